// SPDX-License-Identifier: Apache-2.0
//! Concrete gate assignments on an architecture, their simulation and
//! verification against a specification.

use serde::{Deserialize, Serialize};

use crate::bits::{representative_bits, Bitvector, TruthSpec};
use crate::error::{Error, Result};
use crate::gate::{eval_gate, gate_cost, CostModel, GateKind};
use crate::topology::{Architecture, FeedEntity, GatePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateInstance {
    pub pos: GatePos,
    pub kind: GateKind,
    /// Input sources; NOT and CON read only the first.
    pub inputs: [FeedEntity; 2],
    /// A disabled gate is eliminated and drives constant 0.
    pub enabled: bool,
}

impl GateInstance {
    pub fn disabled(pos: GatePos, kind: GateKind, input: FeedEntity) -> Self {
        GateInstance {
            pos,
            kind,
            inputs: [input, input],
            enabled: false,
        }
    }

    /// Sources that influence the output.
    pub fn live_inputs(&self) -> &[FeedEntity] {
        match (self.enabled, self.kind.arity()) {
            (false, _) => &[],
            (true, 1) => &self.inputs[..1],
            _ => &self.inputs[..],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    arch: Architecture,
    gates: Vec<GateInstance>,
}

impl Circuit {
    /// `gates` must list every position of `arch` once, level-major.
    pub fn new(arch: Architecture, gates: Vec<GateInstance>) -> Result<Self> {
        arch.validate_shape()?;
        if gates.len() != arch.gate_count() {
            return Err(Error::InvalidCircuit(format!(
                "{} gates given for an architecture of {}",
                gates.len(),
                arch.gate_count()
            )));
        }
        for (gate, pos) in gates.iter().zip(arch.positions()) {
            if gate.pos != pos {
                return Err(Error::InvalidCircuit(format!("expected gate {pos}, found {}", gate.pos)));
            }
            if !arch.gate_set.contains(&gate.kind) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {pos} is {} which is not in the gate set",
                    gate.kind
                )));
            }
            let feeds = arch.feed_entities(pos.level)?;
            for input in gate.inputs {
                if !feeds.contains(&input) {
                    return Err(Error::InvalidCircuit(format!("gate {pos} cannot read {input}")));
                }
            }
        }
        Ok(Circuit { arch, gates })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn gate(&self, pos: GatePos) -> Option<&GateInstance> {
        self.arch.gate_index(pos).map(|i| &self.gates[i])
    }

    pub fn vars(&self) -> usize {
        self.arch.variables
    }

    /// Sum of `gate_cost` over enabled gates.
    pub fn cost(&self, model: &CostModel) -> u32 {
        self.gates
            .iter()
            .filter(|g| g.enabled)
            .map(|g| gate_cost(g.kind, model))
            .sum()
    }

    /// Enabled gates other than CON wires.
    pub fn active_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.enabled && g.kind != GateKind::Con)
            .count()
    }

    /// Output values on minterm `g`, one per output, evaluated gate by gate.
    pub fn simulate(&self, g: usize) -> Result<Vec<u8>> {
        let b = representative_bits(g, self.vars())?;
        let mut values = vec![0u8; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            let read = |e: FeedEntity| -> u8 {
                match e {
                    FeedEntity::Gate(p) => values[self.arch.gate_index(p).expect("validated source")],
                    FeedEntity::Variable(j) => b[j - 1],
                    FeedEntity::One => 1,
                    FeedEntity::Zero => 0,
                }
            };
            let (x, y) = (read(gate.inputs[0]), read(gate.inputs[1]));
            values[i] = if gate.enabled { eval_gate(gate.kind, x, y) } else { 0 };
        }
        Ok(self.output_values(&values))
    }

    fn output_values<T: Copy>(&self, values: &[T]) -> Vec<T> {
        self.arch
            .outputs_at
            .iter()
            .map(|&p| values[self.arch.gate_index(p).expect("validated output")])
            .collect()
    }

    /// Every gate's output over all minterms at once, level-major.
    pub fn gate_vectors(&self) -> Vec<Bitvector> {
        let n = self.vars();
        let mut vecs: Vec<Bitvector> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let read = |e: FeedEntity| -> Bitvector {
                match e {
                    FeedEntity::Gate(p) => vecs[self.arch.gate_index(p).expect("validated source")],
                    FeedEntity::Variable(j) => Bitvector::variable(n, j).expect("validated variable"),
                    FeedEntity::One => Bitvector::ones(n),
                    FeedEntity::Zero => Bitvector::zeros(n),
                }
            };
            let (x, y) = (read(gate.inputs[0]), read(gate.inputs[1]));
            vecs.push(if gate.enabled {
                Bitvector::masked(n, gate.kind.eval_word(x.bits(), y.bits()))
            } else {
                Bitvector::zeros(n)
            });
        }
        vecs
    }

    /// Output functions over all minterms.
    pub fn output_functions(&self) -> Vec<Bitvector> {
        self.output_values(&self.gate_vectors())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    /// `(output index, minterm)` pairs where a care minterm disagrees.
    pub mismatches: Vec<(usize, usize)>,
    pub cost: u32,
}

/// Simulates every care minterm; don't-care minterms are skipped.
pub fn verify(circuit: &Circuit, spec: &TruthSpec) -> Result<VerifyReport> {
    verify_with_cost(circuit, spec, &CostModel::gate_count())
}

pub fn verify_with_cost(circuit: &Circuit, spec: &TruthSpec, cost: &CostModel) -> Result<VerifyReport> {
    circuit.architecture().validate(spec)?;
    let (care, _) = spec.minterms_of();
    let mut mismatches = Vec::new();
    for m in care {
        let g = m.index();
        let got = circuit.simulate(g)?;
        for (q, f) in spec.outputs().iter().enumerate() {
            if (got[q] == 1) != f.get(g) {
                mismatches.push((q, g));
            }
        }
    }
    mismatches.sort();
    Ok(VerifyReport {
        pass: mismatches.is_empty(),
        mismatches,
        cost: circuit.cost(cost),
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::topology::FeedEntity::{Gate, One, Variable, Zero};

    fn g(level: usize, position: usize) -> FeedEntity {
        Gate(GatePos::new(level, position))
    }

    fn on(level: usize, position: usize, kind: GateKind, a: FeedEntity, b: FeedEntity) -> GateInstance {
        GateInstance {
            pos: GatePos::new(level, position),
            kind,
            inputs: [a, b],
            enabled: true,
        }
    }

    fn off(level: usize, position: usize) -> GateInstance {
        GateInstance::disabled(GatePos::new(level, position), GateKind::And, Zero)
    }

    /// Four-gate circuit for 6b on the 3x2 grid:
    /// `NAND(XOR(XOR(x1,x2),x3), OR(x1,x2))`.
    pub fn fig3() -> Circuit {
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        Circuit::new(
            arch,
            vec![
                on(1, 1, GateKind::Xor, Variable(1), Variable(2)),
                on(1, 2, GateKind::Or, Variable(1), Variable(2)),
                on(2, 1, GateKind::Xor, g(1, 1), Variable(3)),
                on(2, 2, GateKind::Con, g(1, 2), g(1, 2)),
                on(3, 1, GateKind::Nand, g(2, 1), g(2, 2)),
                off(3, 2),
            ],
        )
        .unwrap()
    }

    /// Three-gate circuit for {6b, 2a} with minterms 0 and 1 as don't-cares:
    /// `f1 = XOR(AND(x1,x2), x3)`, `f2 = AND(f1, x3)`.
    pub fn fig5() -> Circuit {
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 2);
        Circuit::new(
            arch,
            vec![
                on(1, 1, GateKind::And, Variable(1), Variable(2)),
                off(1, 2),
                on(2, 1, GateKind::Xor, g(1, 1), Variable(3)),
                off(2, 2),
                on(3, 1, GateKind::Con, g(2, 1), One),
                on(3, 2, GateKind::And, g(2, 1), Variable(3)),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fig3_simulation() {
        let c = fig3();
        assert_eq!(c.simulate(0).unwrap(), vec![1]);
        assert_eq!(c.simulate(7).unwrap(), vec![0]);
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let r = verify(&c, &spec).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
        assert_eq!(r.cost, 4);
        assert_eq!(c.active_gate_count(), 4);
    }

    #[test]
    fn fig5_needs_its_dont_cares() {
        let c = fig5();
        let with_dc = TruthSpec::from_hex(3, &["6b", "2a"], None)
            .unwrap()
            .with_dont_care(Bitvector::new(3, 0x03).unwrap())
            .unwrap();
        let r = verify(&c, &with_dc).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
        assert_eq!(r.cost, 3);

        let no_dc = TruthSpec::from_hex(3, &["6b", "2a"], None).unwrap();
        let r = verify(&c, &no_dc).unwrap();
        assert!(!r.pass);
        assert!(r.mismatches.iter().all(|&(_, g)| g <= 1));
    }

    #[test]
    fn disabled_output_gate_reads_zero() {
        let mut gates = fig3().gates().to_vec();
        gates[4].enabled = false;
        let c = Circuit::new(fig3().architecture().clone(), gates).unwrap();
        for g in 0..8 {
            assert_eq!(c.simulate(g).unwrap(), vec![0]);
        }
    }

    #[test]
    fn scalar_and_bitparallel_agree() {
        for c in [fig3(), fig5()] {
            let fs = c.output_functions();
            for g in 0..8 {
                let s = c.simulate(g).unwrap();
                for (q, f) in fs.iter().enumerate() {
                    assert_eq!(f.get(g), s[q] == 1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_sources() {
        let mut gates = fig3().gates().to_vec();
        gates[4].inputs[0] = FeedEntity::Gate(GatePos::new(1, 1));
        assert!(Circuit::new(fig3().architecture().clone(), gates).is_err());
        let mut gates = fig3().gates().to_vec();
        gates[0].inputs[0] = FeedEntity::Variable(4);
        assert!(Circuit::new(fig3().architecture().clone(), gates).is_err());
    }

    #[test]
    fn mismatches_skip_dont_cares() {
        let mut gates = fig3().gates().to_vec();
        gates[4].kind = GateKind::And;
        let c = Circuit::new(fig3().architecture().clone(), gates).unwrap();
        let spec = TruthSpec::from_hex(3, &["6b"], None)
            .unwrap()
            .with_dont_care(Bitvector::new(3, 0x0f).unwrap())
            .unwrap();
        let r = verify(&c, &spec).unwrap();
        assert!(!r.pass);
        assert!(r.mismatches.iter().all(|&(_, g)| g >= 4));
    }
}
