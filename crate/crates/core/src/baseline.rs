// SPDX-License-Identifier: Apache-2.0
//! Non-optimal reference circuits from recursive Shannon and Davio
//! expansion.
//!
//! With `f0 = f|x=0`, `f1 = f|x=1` and `f2 = f0 ^ f1`:
//!
//! * Shannon: `f = x'·f0 + x·f1`
//! * positive Davio: `f = f0 ^ x·f2`
//! * negative Davio: `f = f1 ^ x'·f2`
//!
//! Expansion runs on `x_n` first and works down to `x_1`. Identical
//! subfunctions share one gate, inverters are shared per variable, and
//! products with constants collapse, so the result never exceeds `3^n` gates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{width_mask, Bitvector};
use crate::circuit::{Circuit, GateInstance};
use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::topology::{Architecture, FeedEntity, GatePos};

/// Gates a baseline circuit may use.
pub const BASELINE_GATES: [GateKind; 5] = [GateKind::And, GateKind::Or, GateKind::Not, GateKind::Xor, GateKind::Con];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionKind {
    Shannon,
    PositiveDavio,
    NegativeDavio,
}

impl ExpansionKind {
    pub const ALL: [ExpansionKind; 3] = [
        ExpansionKind::Shannon,
        ExpansionKind::PositiveDavio,
        ExpansionKind::NegativeDavio,
    ];
}

impl fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpansionKind::Shannon => "shannon",
            ExpansionKind::PositiveDavio => "positive-davio",
            ExpansionKind::NegativeDavio => "negative-davio",
        })
    }
}

impl FromStr for ExpansionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shannon" | "s" => Ok(ExpansionKind::Shannon),
            "positive-davio" | "pd" | "davio" => Ok(ExpansionKind::PositiveDavio),
            "negative-davio" | "nd" => Ok(ExpansionKind::NegativeDavio),
            other => Err(Error::ProblemField {
                field: "kind".into(),
                message: format!("unknown expansion {other:?}, expected shannon, positive-davio or negative-davio"),
            }),
        }
    }
}

/// Splits `f` on variable `x_i` into `(f0, f1, f2)` over the remaining
/// `n - 1` variables, which keep their relative order.
pub fn subfunctions(f: Bitvector, i: usize) -> Result<(Bitvector, Bitvector, Bitvector)> {
    let n = f.vars();
    if i == 0 || i > n {
        return Err(Error::VariableOutOfRange { index: i, vars: n });
    }
    let shift = n - i;
    let low = (1usize << shift) - 1;
    let mut f0 = 0u64;
    let mut f1 = 0u64;
    for h in 0..1usize << (n - 1) {
        let g = ((h & !low) << 1) | (h & low);
        if f.get(g) {
            f0 |= 1 << h;
        }
        if f.get(g | 1 << shift) {
            f1 |= 1 << h;
        }
    }
    let f0 = Bitvector::new(n - 1, f0)?;
    let f1 = Bitvector::new(n - 1, f1)?;
    Ok((f0, f1, f0 ^ f1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Sig {
    Lit(FeedEntity),
    Node(usize),
}

struct Builder {
    n: usize,
    kind: ExpansionKind,
    nodes: Vec<(GateKind, Sig, Sig)>,
    memo: HashMap<u64, Sig>,
    inverters: HashMap<usize, Sig>,
}

impl Builder {
    fn gate(&mut self, kind: GateKind, a: Sig, b: Sig) -> Sig {
        self.nodes.push((kind, a, b));
        Sig::Node(self.nodes.len() - 1)
    }

    fn inverse(&mut self, j: usize) -> Sig {
        if let Some(&s) = self.inverters.get(&j) {
            return s;
        }
        let s = self.gate(GateKind::Not, Sig::Lit(FeedEntity::Variable(j)), Sig::Lit(FeedEntity::Variable(j)));
        self.inverters.insert(j, s);
        s
    }

    fn and(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Lit(FeedEntity::Zero), _) | (_, Sig::Lit(FeedEntity::Zero)) => Sig::Lit(FeedEntity::Zero),
            (Sig::Lit(FeedEntity::One), s) | (s, Sig::Lit(FeedEntity::One)) => s,
            _ => self.gate(GateKind::And, a, b),
        }
    }

    fn join(&mut self, kind: GateKind, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Lit(FeedEntity::Zero), s) | (s, Sig::Lit(FeedEntity::Zero)) => s,
            _ => self.gate(kind, a, b),
        }
    }

    /// `x_j` or its complement, times `f`.
    fn product(&mut self, j: usize, positive: bool, f: Sig) -> Sig {
        if f == Sig::Lit(FeedEntity::Zero) {
            return f;
        }
        let x = if positive {
            Sig::Lit(FeedEntity::Variable(j))
        } else {
            self.inverse(j)
        };
        self.and(x, f)
    }

    /// Builds `f`, a function of `x_1 .. x_j` (the low `2^j` bits of `bits`).
    fn build(&mut self, bits: u64, j: usize) -> Result<Sig> {
        let bits = bits & width_mask(j);
        if bits == 0 {
            return Ok(Sig::Lit(FeedEntity::Zero));
        }
        if bits == width_mask(j) {
            return Ok(Sig::Lit(FeedEntity::One));
        }
        // Memo keys carry the variable count so equal words of different
        // widths stay apart.
        let key = bits ^ ((j as u64) << 58);
        if j <= 5 {
            if let Some(&s) = self.memo.get(&key) {
                return Ok(s);
            }
        }
        let (f0, f1, f2) = subfunctions(Bitvector::new(j, bits)?, j)?;
        let s = if f2.bits() == 0 {
            self.build(f0.bits(), j - 1)?
        } else {
            self.expand_on(j, f0, f1, f2)?
        };
        if j <= 5 {
            self.memo.insert(key, s);
        }
        Ok(s)
    }

    fn expand_on(&mut self, j: usize, f0: Bitvector, f1: Bitvector, f2: Bitvector) -> Result<Sig> {
        Ok(match self.kind {
            ExpansionKind::Shannon => {
                let a = self.build(f0.bits(), j - 1)?;
                let b = self.build(f1.bits(), j - 1)?;
                let a = self.product(j, false, a);
                let b = self.product(j, true, b);
                self.join(GateKind::Or, a, b)
            }
            ExpansionKind::PositiveDavio => {
                let a = self.build(f0.bits(), j - 1)?;
                let b = self.build(f2.bits(), j - 1)?;
                let b = self.product(j, true, b);
                self.join(GateKind::Xor, a, b)
            }
            ExpansionKind::NegativeDavio => {
                let a = self.build(f1.bits(), j - 1)?;
                let b = self.build(f2.bits(), j - 1)?;
                let b = self.product(j, false, b);
                self.join(GateKind::Xor, a, b)
            }
        })
    }
}

/// Circuit for `f` on a chain of single-gate levels over
/// [`BASELINE_GATES`], with the output at the top.
pub fn expand(f: Bitvector, kind: ExpansionKind) -> Result<Circuit> {
    let n = f.vars();
    let mut b = Builder {
        n,
        kind,
        nodes: Vec::new(),
        memo: HashMap::new(),
        inverters: HashMap::new(),
    };
    let root = b.build(f.bits(), n)?;
    let entity = |s: Sig| match s {
        Sig::Lit(e) => e,
        Sig::Node(i) => FeedEntity::Gate(GatePos::new(i + 1, 1)),
    };
    let mut gates: Vec<GateInstance> = b
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &(kind, x, y))| GateInstance {
            pos: GatePos::new(i + 1, 1),
            kind,
            inputs: [entity(x), entity(y)],
            enabled: true,
        })
        .collect();
    if root != Sig::Node(b.nodes.len().wrapping_sub(1)) {
        gates.push(GateInstance {
            pos: GatePos::new(gates.len() + 1, 1),
            kind: GateKind::Con,
            inputs: [entity(root), entity(root)],
            enabled: true,
        });
    }
    let arch = Architecture::chain(b.n, gates.len(), &BASELINE_GATES);
    Circuit::new(arch, gates)
}

/// The largest gate count [`expand`] may produce for `n` variables.
pub fn gate_bound(n: usize) -> u64 {
    3u64.pow(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{parse_hex, TruthSpec};
    use crate::circuit::verify;
    use crate::gate::CostModel;

    fn bv(s: &str) -> Bitvector {
        let n = s.len().trailing_zeros() as usize;
        Bitvector::new(n, u64::from_str_radix(s, 2).unwrap()).unwrap()
    }

    #[test]
    fn splits_on_the_first_variable() {
        let (f0, f1, f2) = subfunctions(bv("10100000"), 1).unwrap();
        assert_eq!(f0, bv("0000"));
        assert_eq!(f1, bv("1010"));
        assert_eq!(f2, bv("1010"));
    }

    #[test]
    fn splits_on_the_last_variable() {
        // x1·x3 with x3 fixed: f0 = 0, f1 = x1.
        let (f0, f1, _) = subfunctions(bv("10100000"), 3).unwrap();
        assert_eq!(f0, bv("0000"));
        assert_eq!(f1, bv("1100"));
        assert!(subfunctions(bv("1010"), 3).is_err());
    }

    #[test]
    fn expansions_recombine() {
        for bits in 0..256u64 {
            let f = Bitvector::new(3, bits).unwrap();
            for i in 1..=3 {
                let (f0, f1, f2) = subfunctions(f, i).unwrap();
                for g in 0..8usize {
                    let shift = 3 - i;
                    let x = g >> shift & 1 == 1;
                    let h = ((g >> (shift + 1)) << shift) | (g & ((1 << shift) - 1));
                    let shannon = if x { f1.get(h) } else { f0.get(h) };
                    let pd = f0.get(h) ^ (x && f2.get(h));
                    let nd = f1.get(h) ^ (!x && f2.get(h));
                    assert_eq!(shannon, f.get(g));
                    assert_eq!(pd, f.get(g));
                    assert_eq!(nd, f.get(g));
                }
            }
        }
    }

    #[test]
    fn every_three_variable_function_within_bound() {
        for bits in 0..256u64 {
            let f = Bitvector::new(3, bits).unwrap();
            let spec = TruthSpec::complete(3, vec![f]).unwrap();
            for kind in ExpansionKind::ALL {
                let c = expand(f, kind).unwrap();
                let r = verify(&c, &spec).unwrap();
                assert!(r.pass, "{kind} {}", f.to_hex());
                assert!(u64::from(r.cost) <= gate_bound(3));
            }
        }
    }

    #[test]
    fn constants_and_literals_are_free() {
        for hex in ["00", "ff", "f0", "55"] {
            let c = expand(parse_hex(hex, 3).unwrap(), ExpansionKind::Shannon).unwrap();
            assert_eq!(c.cost(&CostModel::gate_count()), u32::from(hex == "55"), "{hex}");
        }
    }

    #[test]
    fn shares_inverters() {
        let c = expand(parse_hex("6b", 3).unwrap(), ExpansionKind::Shannon).unwrap();
        let nots = c.gates().iter().filter(|g| g.kind == GateKind::Not).count();
        assert!(nots <= 3);
    }
}
