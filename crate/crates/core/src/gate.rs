// SPDX-License-Identifier: Apache-2.0
//! Two-input gate kinds, their 0/1 polynomial forms and their costs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::Bitvector;
use crate::error::{Error, Result};

/// Gate kinds in selector order: index 1 is AND, index 7 is the CON wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Nand,
    Nor,
    Con,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Not,
        GateKind::Xor,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Con,
    ];

    /// 1-based selector index (`f_1` .. `f_7`).
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not | GateKind::Con => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Xor => "XOR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Con => "CON",
        }
    }

    /// Polynomial form over integers; exact on {0,1} inputs.
    pub fn arithmetic(self, x: i64, y: i64) -> i64 {
        match self {
            GateKind::And => x * y,
            GateKind::Or => x + y - x * y,
            GateKind::Not => 1 - x,
            GateKind::Xor => x + y - 2 * x * y,
            GateKind::Nand => 1 - x * y,
            GateKind::Nor => (1 - x) * (1 - y),
            GateKind::Con => x,
        }
    }

    /// Bitwise evaluation on packed words; the caller masks the result.
    #[inline]
    pub fn eval_word(self, x: u64, y: u64) -> u64 {
        match self {
            GateKind::And => x & y,
            GateKind::Or => x | y,
            GateKind::Not => !x,
            GateKind::Xor => x ^ y,
            GateKind::Nand => !(x & y),
            GateKind::Nor => !(x | y),
            GateKind::Con => x,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownGateKind(s.to_string()))
    }
}

/// Evaluates a gate on 0/1 inputs through its polynomial form.
/// The second input is ignored by NOT and CON.
pub fn eval_gate(kind: GateKind, x: u8, y: u8) -> u8 {
    debug_assert!(x <= 1 && y <= 1);
    let v = kind.arithmetic(x as i64, y as i64);
    debug_assert!(v == 0 || v == 1);
    v as u8
}

/// Evaluates a gate on every minterm at once.
pub fn eval_gate_bitparallel(kind: GateKind, x: Bitvector, y: Bitvector) -> Result<Bitvector> {
    if x.vars() != y.vars() {
        return Err(Error::WidthMismatch(x.vars(), y.vars()));
    }
    Ok(Bitvector::masked(x.vars(), kind.eval_word(x.bits(), y.bits())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    #[default]
    GateCount,
    Transistor,
}

impl FromStr for CostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gates" | "gate-count" | "gate_count" => Ok(CostMode::GateCount),
            "transistors" | "transistor" => Ok(CostMode::Transistor),
            other => Err(Error::ProblemField {
                field: "objective".into(),
                message: format!("unknown objective {other:?}, expected \"gates\" or \"transistors\""),
            }),
        }
    }
}

/// Static CMOS transistor counts used when no weights are configured.
pub const DEFAULT_TRANSISTOR_WEIGHTS: [u32; 7] = [6, 6, 2, 8, 4, 4, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostModel {
    pub mode: CostMode,
    /// Per-kind weights in selector order, used in transistor mode.
    pub weights: [u32; 7],
}

impl Default for CostModel {
    fn default() -> Self {
        Self::gate_count()
    }
}

impl CostModel {
    pub fn gate_count() -> Self {
        CostModel {
            mode: CostMode::GateCount,
            weights: DEFAULT_TRANSISTOR_WEIGHTS,
        }
    }

    pub fn transistors() -> Self {
        CostModel {
            mode: CostMode::Transistor,
            weights: DEFAULT_TRANSISTOR_WEIGHTS,
        }
    }

    pub fn with_weight(mut self, kind: GateKind, weight: u32) -> Self {
        self.weights[kind as usize] = weight;
        self
    }

    pub fn cost(&self, kind: GateKind) -> u32 {
        gate_cost(kind, self)
    }
}

pub fn gate_cost(kind: GateKind, model: &CostModel) -> u32 {
    match model.mode {
        CostMode::GateCount => u32::from(kind != GateKind::Con),
        CostMode::Transistor => model.weights[kind as usize],
    }
}
