// SPDX-License-Identifier: Apache-2.0
//! Candidate circuit skeletons: levels of gates, how they may be wired, and
//! which top-level gates carry the outputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{TruthSpec, MAX_VARS};
use crate::error::{Error, Result};
use crate::gate::GateKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Connectivity {
    /// Gate inputs come from the level directly below, variables or constants.
    #[default]
    PreviousLevel,
    /// Gate inputs may come from any lower level.
    AllPrevious,
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "previous-level" | "previous" => Ok(Connectivity::PreviousLevel),
            "all-previous" | "any-previous" => Ok(Connectivity::AllPrevious),
            _ => Err(Error::UnknownConnectivity(s.to_string())),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::PreviousLevel => "previous-level",
            Connectivity::AllPrevious => "all-previous",
        })
    }
}

/// 1-based `(level, position)` of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GatePos {
    pub level: usize,
    pub position: usize,
}

impl GatePos {
    pub const fn new(level: usize, position: usize) -> Self {
        GatePos { level, position }
    }
}

impl fmt::Display for GatePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.position)
    }
}

/// Something that can drive a gate input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeedEntity {
    Gate(GatePos),
    /// Variable `x_j`, 1-based.
    Variable(usize),
    One,
    Zero,
}

impl fmt::Display for FeedEntity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeedEntity::Gate(p) => write!(f, "g{}.{}", p.level, p.position),
            FeedEntity::Variable(j) => write!(f, "x{j}"),
            FeedEntity::One => f.write_str("1"),
            FeedEntity::Zero => f.write_str("0"),
        }
    }
}

impl FromStr for FeedEntity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCircuit(format!("unknown input source {s:?}"));
        match s {
            "1" => Ok(FeedEntity::One),
            "0" => Ok(FeedEntity::Zero),
            _ if s.starts_with('x') => s[1..].parse().map(FeedEntity::Variable).map_err(|_| bad()),
            _ if s.starts_with('g') => {
                let (l, p) = s[1..].split_once('.').ok_or_else(bad)?;
                Ok(FeedEntity::Gate(GatePos::new(
                    l.parse().map_err(|_| bad())?,
                    p.parse().map_err(|_| bad())?,
                )))
            }
            _ => Err(bad()),
        }
    }
}

impl From<FeedEntity> for String {
    fn from(e: FeedEntity) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for FeedEntity {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Architecture {
    pub variables: usize,
    /// Gates per level, bottom level first.
    pub widths: Vec<usize>,
    pub connectivity: Connectivity,
    /// Allowed kinds, kept sorted in selector order without duplicates.
    pub gate_set: Vec<GateKind>,
    /// Output `q` is produced by gate `outputs_at[q]`.
    pub outputs_at: Vec<GatePos>,
}

impl Architecture {
    /// A `levels x width` grid with previous-level connectivity and
    /// `outputs` outputs pinned to the first top-level positions.
    pub fn grid(variables: usize, levels: usize, width: usize, gate_set: &[GateKind], outputs: usize) -> Self {
        Self::with_widths(variables, vec![width; levels], gate_set, outputs)
    }

    pub fn with_widths(variables: usize, widths: Vec<usize>, gate_set: &[GateKind], outputs: usize) -> Self {
        let top = widths.len();
        let mut set = gate_set.to_vec();
        set.sort();
        set.dedup();
        Architecture {
            variables,
            widths,
            connectivity: Connectivity::PreviousLevel,
            gate_set: set,
            outputs_at: (1..=outputs).map(|q| GatePos::new(top, q)).collect(),
        }
    }

    /// Single-gate levels, each free to read any lower level.
    pub fn chain(variables: usize, length: usize, gate_set: &[GateKind]) -> Self {
        Self::with_widths(variables, vec![1; length], gate_set, 1).connectivity(Connectivity::AllPrevious)
    }

    pub fn connectivity(mut self, connectivity: Connectivity) -> Self {
        self.connectivity = connectivity;
        self
    }

    pub fn levels(&self) -> usize {
        self.widths.len()
    }

    /// Width of 1-based `level`.
    pub fn width(&self, level: usize) -> usize {
        self.widths[level - 1]
    }

    pub fn gate_count(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.widths.windows(2).all(|w| w[0] == w[1])
    }

    /// All gate positions, level-major.
    pub fn positions(&self) -> impl Iterator<Item = GatePos> + '_ {
        self.widths
            .iter()
            .enumerate()
            .flat_map(|(l, &w)| (1..=w).map(move |p| GatePos::new(l + 1, p)))
    }

    /// Level-major index of a gate position.
    pub fn gate_index(&self, pos: GatePos) -> Option<usize> {
        if pos.level == 0 || pos.level > self.levels() || pos.position == 0 || pos.position > self.width(pos.level) {
            return None;
        }
        Some(self.widths[..pos.level - 1].iter().sum::<usize>() + pos.position - 1)
    }

    pub fn output_index(&self, pos: GatePos) -> Option<usize> {
        self.outputs_at.iter().position(|&p| p == pos)
    }

    /// Whether a gate at `consumer_level` may read the output of gate `source`.
    pub fn may_read(&self, consumer_level: usize, source: GatePos) -> bool {
        match self.connectivity {
            Connectivity::PreviousLevel => source.level + 1 == consumer_level,
            Connectivity::AllPrevious => source.level < consumer_level,
        }
    }

    /// Candidate input sources for a gate at `level`, in selector order:
    /// eligible gate outputs, then `x_1 .. x_n`, then constant 1, then 0.
    pub fn feed_entities(&self, level: usize) -> Result<Vec<FeedEntity>> {
        if level == 0 || level > self.levels() {
            return Err(Error::InvalidArchitecture(format!(
                "level {level} outside 1..={}",
                self.levels()
            )));
        }
        let first = match self.connectivity {
            Connectivity::PreviousLevel => level.saturating_sub(1).max(1),
            Connectivity::AllPrevious => 1,
        };
        let mut out: Vec<FeedEntity> = (first..level)
            .flat_map(|l| (1..=self.width(l)).map(move |p| FeedEntity::Gate(GatePos::new(l, p))))
            .collect();
        out.extend((1..=self.variables).map(FeedEntity::Variable));
        out.push(FeedEntity::One);
        out.push(FeedEntity::Zero);
        Ok(out)
    }

    /// Checks the shape invariants that do not depend on a specification.
    pub fn validate_shape(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArchitecture(m));
        if self.variables == 0 || self.variables > MAX_VARS {
            return bad(format!("variable count {} outside 1..={MAX_VARS}", self.variables));
        }
        if self.widths.is_empty() {
            return bad("at least one level is required".into());
        }
        if let Some(l) = self.widths.iter().position(|&w| w == 0) {
            return bad(format!("level {} has no gates", l + 1));
        }
        if self.gate_set.is_empty() {
            return bad("gate set is empty".into());
        }
        if self.gate_set.windows(2).any(|w| w[0] >= w[1]) {
            return bad("gate set must be sorted in selector order without duplicates".into());
        }
        if self.outputs_at.is_empty() {
            return bad("no output gates".into());
        }
        let top = self.levels();
        if self.outputs_at.len() > self.width(top) {
            return bad(format!(
                "{} outputs do not fit the {} gates of the top level",
                self.outputs_at.len(),
                self.width(top)
            ));
        }
        for (q, p) in self.outputs_at.iter().enumerate() {
            if p.level != top {
                return bad(format!("output {} is at level {}, not the top level {top}", q + 1, p.level));
            }
            if p.position == 0 || p.position > self.width(top) {
                return bad(format!("output {} position {} outside 1..={}", q + 1, p.position, self.width(top)));
            }
            if self.outputs_at[..q].contains(p) {
                return bad(format!("output {} shares gate {p} with another output", q + 1));
            }
        }
        Ok(())
    }

    pub fn validate(&self, spec: &TruthSpec) -> Result<()> {
        self.validate_shape()?;
        if self.variables != spec.vars() {
            return Err(Error::ArchitectureMismatch(format!(
                "architecture has {} variables, specification has {}",
                self.variables,
                spec.vars()
            )));
        }
        if self.outputs_at.len() != spec.output_count() {
            return Err(Error::ArchitectureMismatch(format!(
                "architecture has {} output gates, specification has {} outputs",
                self.outputs_at.len(),
                spec.output_count()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid32() -> Architecture {
        Architecture::grid(3, 3, 2, &GateKind::ALL, 1)
    }

    #[test]
    fn feed_entities_previous_level() {
        let a = grid32();
        let l2 = a.feed_entities(2).unwrap();
        assert_eq!(
            l2.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            ["g1.1", "g1.2", "x1", "x2", "x3", "1", "0"]
        );
        assert_eq!(a.feed_entities(1).unwrap().len(), 5);
        assert!(a.feed_entities(0).is_err());
        assert!(a.feed_entities(4).is_err());
    }

    #[test]
    fn feed_entities_all_previous() {
        let a = grid32().connectivity(Connectivity::AllPrevious);
        assert_eq!(a.feed_entities(3).unwrap().len(), 9);
    }

    #[test]
    fn gate_sources_respect_connectivity() {
        for conn in [Connectivity::PreviousLevel, Connectivity::AllPrevious] {
            let a = Architecture::with_widths(3, vec![3, 2, 2, 1], &GateKind::ALL, 1).connectivity(conn);
            for level in 1..=a.levels() {
                for e in a.feed_entities(level).unwrap() {
                    if let FeedEntity::Gate(p) = e {
                        match conn {
                            Connectivity::PreviousLevel => assert_eq!(p.level, level - 1),
                            Connectivity::AllPrevious => assert!(p.level < level),
                        }
                        assert!(a.may_read(level, p));
                    }
                }
            }
        }
    }

    #[test]
    fn validate_examples() {
        let spec1 = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        grid32().validate(&spec1).unwrap();

        let spec3 = TruthSpec::from_hex(3, &["6b", "2a", "01"], None).unwrap();
        let a = Architecture::grid(3, 3, 2, &GateKind::ALL, 3);
        assert!(a.validate(&spec3).is_err());

        let a = Architecture::grid(3, 3, 2, &[], 1);
        assert!(matches!(a.validate(&spec1), Err(Error::InvalidArchitecture(_))));

        let spec2 = TruthSpec::from_hex(3, &["6b", "2a"], None).unwrap();
        assert!(matches!(grid32().validate(&spec2), Err(Error::ArchitectureMismatch(_))));

        let mut a = grid32();
        a.outputs_at = vec![GatePos::new(2, 1)];
        assert!(a.validate(&spec1).is_err());
    }

    #[test]
    fn feed_entity_text_round_trip() {
        for e in [
            FeedEntity::Gate(GatePos::new(12, 3)),
            FeedEntity::Variable(4),
            FeedEntity::One,
            FeedEntity::Zero,
        ] {
            assert_eq!(e.to_string().parse::<FeedEntity>().unwrap(), e);
        }
        assert!("y1".parse::<FeedEntity>().is_err());
        assert!("g1".parse::<FeedEntity>().is_err());
    }

    #[test]
    fn gate_indices_are_level_major() {
        let a = Architecture::with_widths(3, vec![4, 2, 1], &GateKind::ALL, 1);
        let idx: Vec<_> = a.positions().map(|p| a.gate_index(p).unwrap()).collect();
        assert_eq!(idx, (0..7).collect::<Vec<_>>());
        assert_eq!(a.gate_index(GatePos::new(2, 3)), None);
    }
}
