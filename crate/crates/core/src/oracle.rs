// SPDX-License-Identifier: Apache-2.0
//! Exhaustive reference search for small architectures.
//!
//! Walks every assignment of every gate without pruning or symmetry
//! reduction and evaluates gates one minterm at a time, so it shares no
//! search logic with [`crate::solver`]. Inputs of commutative gates are
//! enumerated unordered and unused selectors are not varied, which leaves
//! the set of reachable circuits unchanged.

use crate::bits::{representative_bits, TruthSpec};
use crate::circuit::{Circuit, GateInstance};
use crate::error::{Error, Result};
use crate::gate::{eval_gate, gate_cost, CostModel, GateKind};
use crate::topology::{Architecture, FeedEntity};

/// Largest number of assignments the oracle will walk.
pub const ORACLE_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Minimum cost over all satisfying assignments, `None` if there is none.
    pub cost: Option<u32>,
    pub circuit: Option<Circuit>,
    pub assignments: u128,
}

#[derive(Clone, Copy)]
struct Choice {
    kind: Option<GateKind>,
    a: usize,
    b: usize,
}

/// Number of distinct gate assignments the oracle visits.
pub fn assignment_count(arch: &Architecture) -> Result<u128> {
    let mut total: u128 = 1;
    for level in 1..=arch.levels() {
        let k = arch.feed_entities(level)?.len() as u128;
        let per_gate: u128 = 1 + arch
            .gate_set
            .iter()
            .map(|kind| if kind.arity() == 1 { k } else { k * (k + 1) / 2 })
            .sum::<u128>();
        for _ in 0..arch.width(level) {
            total = total.saturating_mul(per_gate);
        }
    }
    Ok(total)
}

struct Walk<'a> {
    arch: &'a Architecture,
    cost: &'a CostModel,
    care: Vec<usize>,
    expected: Vec<Vec<u8>>,
    entities: Vec<Vec<FeedEntity>>,
    minterm_bits: Vec<Vec<u8>>,
    choices: Vec<Choice>,
    values: Vec<[u8; 64]>,
    best: Option<(u32, Vec<Choice>)>,
    levels: Vec<usize>,
}

impl Walk<'_> {
    fn value(&self, level: usize, entity: usize, m: usize) -> u8 {
        match self.entities[level][entity] {
            FeedEntity::Gate(p) => self.values[self.arch.gate_index(p).expect("validated")][m],
            FeedEntity::Variable(j) => self.minterm_bits[m][j - 1],
            FeedEntity::One => 1,
            FeedEntity::Zero => 0,
        }
    }

    fn leaf(&mut self) {
        for (q, pos) in self.arch.outputs_at.iter().enumerate() {
            let gi = self.arch.gate_index(*pos).expect("validated");
            if self.values[gi][..self.care.len()] != self.expected[q][..] {
                return;
            }
        }
        let c: u32 = self
            .choices
            .iter()
            .filter_map(|c| c.kind)
            .map(|k| gate_cost(k, self.cost))
            .sum();
        if self.best.as_ref().is_none_or(|(b, _)| c < *b) {
            self.best = Some((c, self.choices.clone()));
        }
    }

    fn visit(&mut self, gi: usize) {
        if gi == self.choices.len() {
            self.leaf();
            return;
        }
        let level = self.levels[gi];
        let k = self.entities[level].len();
        let m = self.care.len();
        self.choices[gi] = Choice { kind: None, a: 0, b: 0 };
        self.values[gi] = [0; 64];
        self.visit(gi + 1);
        let arch = self.arch;
        for &kind in &arch.gate_set {
            for a in 0..k {
                let bs = if kind.arity() == 1 { a..a + 1 } else { a..k };
                for b in bs {
                    let mut out = [0u8; 64];
                    for (t, v) in out[..m].iter_mut().enumerate() {
                        *v = eval_gate(kind, self.value(level, a, t), self.value(level, b, t));
                    }
                    self.choices[gi] = Choice { kind: Some(kind), a, b };
                    self.values[gi] = out;
                    self.visit(gi + 1);
                }
            }
        }
    }
}

/// Minimum-cost circuit for `spec` on `arch` by exhaustive enumeration.
/// Refuses architectures with more than [`ORACLE_GUARD`] assignments.
pub fn enumerate_oracle(spec: &TruthSpec, arch: &Architecture, cost: &CostModel) -> Result<OracleResult> {
    arch.validate(spec)?;
    let count = assignment_count(arch)?;
    if count > ORACLE_GUARD {
        return Err(Error::SearchSpaceTooLarge {
            count,
            guard: ORACLE_GUARD,
        });
    }
    let (care_minterms, _) = spec.minterms_of();
    let care: Vec<usize> = care_minterms.iter().map(|m| m.index()).collect();
    let expected = spec
        .outputs()
        .iter()
        .map(|f| care.iter().map(|&g| u8::from(f.get(g))).collect())
        .collect();
    let entities: Vec<Vec<FeedEntity>> = std::iter::once(Vec::new())
        .chain((1..=arch.levels()).map(|l| arch.feed_entities(l).expect("validated")))
        .collect();
    let levels: Vec<usize> = arch.positions().map(|p| p.level).collect();
    let n = levels.len();
    let minterm_bits = care
        .iter()
        .map(|&g| representative_bits(g, arch.variables))
        .collect::<Result<_>>()?;
    let mut walk = Walk {
        arch,
        cost,
        care,
        minterm_bits,
        expected,
        entities,
        choices: vec![Choice { kind: None, a: 0, b: 0 }; n],
        values: vec![[0; 64]; n],
        best: None,
        levels,
    };
    walk.visit(0);

    let circuit = match &walk.best {
        Some((_, choices)) => {
            let gates = arch
                .positions()
                .zip(choices)
                .map(|(pos, c)| {
                    let ents = &walk.entities[pos.level];
                    match c.kind {
                        None => GateInstance::disabled(pos, arch.gate_set[0], ents[0]),
                        Some(kind) => GateInstance {
                            pos,
                            kind,
                            inputs: [ents[c.a], ents[c.b]],
                            enabled: true,
                        },
                    }
                })
                .collect();
            Some(Circuit::new(arch.clone(), gates)?)
        }
        None => None,
    };
    Ok(OracleResult {
        cost: walk.best.map(|(c, _)| c),
        circuit,
        assignments: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::verify;

    #[test]
    fn counts_canonical_assignments() {
        // Entities x1 x2 1 0: disabled plus 10 unordered XOR pairs.
        let arch = Architecture::grid(2, 1, 1, &[GateKind::Xor], 1);
        assert_eq!(assignment_count(&arch).unwrap(), 11);
        let arch = Architecture::grid(2, 1, 1, &[GateKind::Not, GateKind::And], 1);
        assert_eq!(assignment_count(&arch).unwrap(), 15);
    }

    #[test]
    fn guard_refuses_big_spaces() {
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        assert!(matches!(
            enumerate_oracle(&spec, &arch, &CostModel::gate_count()),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn xnor_needs_two_gates() {
        let spec = TruthSpec::from_hex(2, &["9"], None).unwrap();
        let arch = Architecture::grid(2, 2, 1, &[GateKind::Xor, GateKind::Not, GateKind::Con], 1);
        let r = enumerate_oracle(&spec, &arch, &CostModel::gate_count()).unwrap();
        assert_eq!(r.cost, Some(2));
        let c = r.circuit.unwrap();
        assert!(verify(&c, &spec).unwrap().pass);
    }

    #[test]
    fn reports_infeasible() {
        let spec = TruthSpec::from_hex(2, &["6"], None).unwrap();
        let arch = Architecture::grid(2, 1, 1, &[GateKind::And], 1);
        let r = enumerate_oracle(&spec, &arch, &CostModel::gate_count()).unwrap();
        assert_eq!(r.cost, None);
        assert!(r.circuit.is_none());
    }
}
