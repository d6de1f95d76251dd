// SPDX-License-Identifier: Apache-2.0
//! JSON problem files: the functions to build and the skeleton to build
//! them on.
//!
//! ```json
//! {
//!   "variables": 3,
//!   "outputs": ["6b", "sum:1,3,5"],
//!   "dont_care": [0, 1],
//!   "levels": 3,
//!   "gates_per_level": 2,
//!   "connectivity": "previous-level",
//!   "gate_set": ["AND", "OR", "NOT", "XOR", "NAND", "NOR", "CON"],
//!   "objective": "gates"
//! }
//! ```
//!
//! Only `variables`, `outputs` and the level shape are required.
//! `gates_per_level` may be a list of widths, bottom level first, in which
//! case `levels` may be omitted. `outputs_at` lists top-level positions, one
//! per output, and defaults to `1..=m`. `transistor_weights` overrides
//! per-kind weights for the `transistors` objective.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits::{parse_function, Bitvector, TruthSpec, MAX_VARS, MIN_SPEC_VARS};
use crate::error::{Error, Result};
use crate::gate::{CostMode, CostModel, GateKind};
use crate::topology::{Architecture, Connectivity, GatePos};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Widths {
    Uniform(usize),
    PerLevel(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MintermSet {
    Text(String),
    List(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: usize,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dont_care: Option<MintermSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    pub gates_per_level: Widths,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_set: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transistor_weights: Option<BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs_at: Option<Vec<usize>>,
}

/// A parsed and validated problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: Option<String>,
    pub spec: TruthSpec,
    pub arch: Architecture,
    pub cost: CostModel,
}

fn field(name: &str, message: impl Into<String>) -> Error {
    Error::ProblemField {
        field: name.into(),
        message: message.into(),
    }
}

impl ProblemSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_problem(self) -> Result<Problem> {
        let n = self.variables;
        if !(MIN_SPEC_VARS..=MAX_VARS).contains(&n) {
            return Err(field("variables", format!("{n} is outside {MIN_SPEC_VARS}..={MAX_VARS}")));
        }
        if self.outputs.is_empty() {
            return Err(field("outputs", "at least one output function is required"));
        }
        let dc = match &self.dont_care {
            None => Bitvector::zeros(n),
            Some(MintermSet::Text(t)) => parse_function(t, n).map_err(|e| field("dont_care", e.to_string()))?,
            Some(MintermSet::List(l)) => {
                Bitvector::from_minterms(n, l.iter().copied()).map_err(|e| field("dont_care", e.to_string()))?
            }
        };
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for (q, text) in self.outputs.iter().enumerate() {
            outputs.push(parse_function(text, n).map_err(|e| field(&format!("outputs[{q}]"), e.to_string()))?);
        }
        // Listed don't-cares win over on-set bits.
        let spec = TruthSpec::complete(n, outputs)?.with_dont_care(dc)?;

        let widths = match (&self.gates_per_level, self.levels) {
            (Widths::Uniform(w), Some(l)) => vec![*w; l],
            (Widths::Uniform(_), None) => {
                return Err(field("levels", "required when gates_per_level is a single number"))
            }
            (Widths::PerLevel(ws), Some(l)) if ws.len() != l => {
                return Err(field(
                    "gates_per_level",
                    format!("{} widths given for {l} levels", ws.len()),
                ))
            }
            (Widths::PerLevel(ws), _) => ws.clone(),
        };
        if widths.is_empty() {
            return Err(field("levels", "at least one level is required"));
        }
        if let Some(l) = widths.iter().position(|&w| w == 0) {
            return Err(field("gates_per_level", format!("level {} has no gates", l + 1)));
        }

        let connectivity = match &self.connectivity {
            None => Connectivity::PreviousLevel,
            Some(c) => c.parse().map_err(|e: Error| field("connectivity", e.to_string()))?,
        };
        let gate_set: Vec<GateKind> = match &self.gate_set {
            None => GateKind::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|s| s.parse())
                .collect::<Result<_>>()
                .map_err(|e| field("gate_set", e.to_string()))?,
        };
        if gate_set.is_empty() {
            return Err(field("gate_set", "at least one gate kind is required"));
        }

        let mut cost = match &self.objective {
            None => CostModel::gate_count(),
            Some(o) => {
                let mode: CostMode = o.parse()?;
                CostModel {
                    mode,
                    ..CostModel::gate_count()
                }
            }
        };
        if let Some(weights) = &self.transistor_weights {
            for (kind, &w) in weights {
                let kind: GateKind = kind.parse().map_err(|e: Error| field("transistor_weights", e.to_string()))?;
                cost = cost.with_weight(kind, w);
            }
        }

        let m = spec.output_count();
        let top = widths.len();
        let mut arch = Architecture::with_widths(n, widths, &gate_set, m).connectivity(connectivity);
        if let Some(at) = &self.outputs_at {
            if at.len() != m {
                return Err(field("outputs_at", format!("{} positions given for {m} outputs", at.len())));
            }
            arch.outputs_at = at.iter().map(|&p| GatePos::new(top, p)).collect();
        }
        arch.validate(&spec).map_err(|e| field("gates_per_level", e.to_string()))?;
        Ok(Problem {
            name: self.name,
            spec,
            arch,
            cost,
        })
    }
}

/// Parses and validates a problem from JSON text.
pub fn parse_problem(text: &str) -> Result<Problem> {
    ProblemSpecFile::from_json(text)?.into_problem()
}

pub fn load_problem(path: &Path) -> Result<Problem> {
    parse_problem(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG5: &str = r#"{
        "variables": 3,
        "outputs": ["6b", "2a"],
        "dont_care": [0, 1],
        "levels": 3,
        "gates_per_level": 2
    }"#;

    #[test]
    fn dont_cares_clear_on_set_bits() {
        let p = parse_problem(FIG5).unwrap();
        assert_eq!(p.spec.care().to_hex(), "fc");
        assert_eq!(p.spec.outputs()[0].to_hex(), "68");
        assert_eq!(p.spec.outputs()[1].to_hex(), "28");
        assert_eq!(p.arch.widths, vec![2, 2, 2]);
        assert_eq!(p.arch.gate_set, GateKind::ALL.to_vec());
        assert_eq!(p.arch.outputs_at, vec![GatePos::new(3, 1), GatePos::new(3, 2)]);
    }

    #[test]
    fn widths_list_and_options() {
        let p = parse_problem(
            r#"{"variables": 4, "outputs": ["a7f1"], "gates_per_level": [1,1,1],
                "connectivity": "all-previous", "gate_set": ["nand"],
                "objective": "transistors", "transistor_weights": {"NAND": 3}}"#,
        )
        .unwrap();
        assert_eq!(p.arch.levels(), 3);
        assert_eq!(p.arch.connectivity, Connectivity::AllPrevious);
        assert_eq!(p.cost.cost(GateKind::Nand), 3);
    }

    #[test]
    fn field_diagnostics() {
        let cases = [
            (r#"{"variables": 9, "outputs": ["1"], "levels": 1, "gates_per_level": 1}"#, "variables"),
            (r#"{"variables": 3, "outputs": ["zz"], "levels": 1, "gates_per_level": 1}"#, "outputs[0]"),
            (r#"{"variables": 3, "outputs": ["6b"], "gates_per_level": 1}"#, "levels"),
            (r#"{"variables": 3, "outputs": ["6b"], "levels": 1, "gates_per_level": 1, "gate_set": ["MUX"]}"#, "gate_set"),
            (r#"{"variables": 3, "outputs": ["6b", "2a"], "levels": 1, "gates_per_level": 1}"#, "gates_per_level"),
            (r#"{"variables": 3, "outputs": ["6b"], "levels": 1, "gates_per_level": 1, "connectivity": "mesh"}"#, "connectivity"),
            (r#"{"variables": 3, "outputs": ["6b"], "levels": 1, "gates_per_level": 1, "objective": "area"}"#, "objective"),
        ];
        for (text, name) in cases {
            let e = parse_problem(text).unwrap_err();
            assert!(matches!(&e, Error::ProblemField { field, .. } if field == name), "{name}: {e}");
        }
    }

    #[test]
    fn json_syntax_errors_carry_positions() {
        let e = parse_problem("{\n  \"variables\": 3,\n  \"outputs\": [6b]\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_problem(r#"{"variables": 3, "outputs": ["6b"], "levels": 1, "gates_per_level": 1, "color": 1}"#)
            .unwrap_err();
        assert!(e.to_string().contains("color"), "{e}");
    }
}
