// SPDX-License-Identifier: Apache-2.0
//! The binary selection model of a synthesis problem.
//!
//! Every gate `(i,j)` owns a one-hot type selector `tsel[i,j,r]` over the
//! allowed kinds, two one-hot input selectors `inpsel1/2[i,j,k]` over the feed
//! entities of its level, and an enable flag `E[i,j]`. For every care minterm
//! `g` the signals are defined by
//!
//! ```text
//! inp1[i,j,g] = sum_k inpsel1[i,j,k] * T_k(g)
//! inp2[i,j,g] = sum_k inpsel2[i,j,k] * T_k(g)
//! out[i,j,g]  = E[i,j] * sum_r tsel[i,j,r] * f_r(inp1, inp2)
//! ```
//!
//! and every output gate must reproduce its function on the care minterms.
//! The per-minterm signals are expressions of the selectors, not free
//! variables. Don't-care minterms produce no equations at all.

use serde::{Deserialize, Serialize};

use crate::bits::{Minterm, TruthSpec};
use crate::circuit::{Circuit, GateInstance};
use crate::error::{Error, Result};
use crate::gate::{CostMode, CostModel, GateKind};
use crate::topology::{Architecture, FeedEntity, GatePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    TypeSelect { gate: usize, kind: GateKind },
    InputSelect { gate: usize, input: u8, entity: usize },
    Enable { gate: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateVars {
    pub pos: GatePos,
    pub entities: Vec<FeedEntity>,
    pub type_select: Vec<(GateKind, VarId)>,
    pub input_select: [Vec<VarId>; 2],
    pub enable: VarId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneHotRole {
    GateType { gate: usize },
    Input { gate: usize, input: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneHot {
    pub role: OneHotRole,
    pub vars: Vec<VarId>,
}

/// The `inp1`, `inp2` and `out` definitions of one gate at one care minterm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Propagation {
    pub gate: usize,
    pub minterm: usize,
}

/// `out[gate, minterm] = value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputEquality {
    pub output: usize,
    pub gate: usize,
    pub minterm: usize,
    pub value: u8,
}

/// `E * (base + sum coefficient * tsel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectiveTerm {
    pub gate: usize,
    pub enable: VarId,
    pub base: i64,
    pub selectors: Vec<(VarId, i64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    pub binary_vars: usize,
    pub type_select_vars: usize,
    pub input_select_vars: usize,
    pub enable_vars: usize,
    pub care_minterms: usize,
    pub type_one_hots: usize,
    pub input_one_hots: usize,
    /// `inp1`/`inp2` definitions, two per gate and care minterm.
    pub input_equations: usize,
    /// `out` definitions, one per gate and care minterm.
    pub output_equations: usize,
    /// Output gate equalities, one per output and care minterm.
    pub output_equalities: usize,
    /// Products of two or more unknowns across all equations and the objective.
    pub nonlinear_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintModel {
    spec: TruthSpec,
    arch: Architecture,
    cost: CostModel,
    vars: Vec<Variable>,
    gates: Vec<GateVars>,
    one_hots: Vec<OneHot>,
    propagation: Vec<Propagation>,
    output_equalities: Vec<OutputEquality>,
    objective: Vec<ObjectiveTerm>,
    care: Vec<usize>,
}

/// A 0/1 value for every model variable, indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn get(&self, v: VarId) -> bool {
        self.0[v.index()]
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.0[v.index()] = value;
    }

    fn val(&self, v: VarId) -> i64 {
        i64::from(self.get(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    OneHot(OneHotRole),
    Output { output: usize, minterm: usize },
}

/// Values of the derived signals of one gate at one minterm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateSignals {
    pub inp1: i64,
    pub inp2: i64,
    pub out: i64,
}

pub fn encode(spec: &TruthSpec, arch: &Architecture, cost: &CostModel) -> Result<ConstraintModel> {
    arch.validate(spec)?;
    let (care, _) = spec.minterms_of();
    let care: Vec<usize> = care.iter().map(Minterm::index).collect();

    let mut vars = Vec::new();
    let mut fresh = |v: Variable| {
        vars.push(v);
        VarId(vars.len() as u32 - 1)
    };

    let mut gates = Vec::with_capacity(arch.gate_count());
    let mut one_hots = Vec::new();
    for (gate, pos) in arch.positions().enumerate() {
        let entities = arch.feed_entities(pos.level)?;
        let type_select: Vec<_> = arch
            .gate_set
            .iter()
            .map(|&kind| (kind, fresh(Variable::TypeSelect { gate, kind })))
            .collect();
        let mut select_input = |input: u8| -> Vec<VarId> {
            (0..entities.len())
                .map(|entity| fresh(Variable::InputSelect { gate, input, entity }))
                .collect()
        };
        let input_select = [select_input(1), select_input(2)];
        let enable = fresh(Variable::Enable { gate });

        one_hots.push(OneHot {
            role: OneHotRole::GateType { gate },
            vars: type_select.iter().map(|&(_, v)| v).collect(),
        });
        for (k, sel) in input_select.iter().enumerate() {
            one_hots.push(OneHot {
                role: OneHotRole::Input { gate, input: k as u8 + 1 },
                vars: sel.clone(),
            });
        }
        gates.push(GateVars {
            pos,
            entities,
            type_select,
            input_select,
            enable,
        });
    }

    let propagation = (0..gates.len())
        .flat_map(|gate| care.iter().map(move |&minterm| Propagation { gate, minterm }))
        .collect();

    let mut output_equalities = Vec::new();
    for (output, f) in spec.outputs().iter().enumerate() {
        let gate = arch.gate_index(arch.outputs_at[output]).expect("validated output");
        for &minterm in &care {
            output_equalities.push(OutputEquality {
                output,
                gate,
                minterm,
                value: u8::from(f.get(minterm)),
            });
        }
    }

    let objective = gates
        .iter()
        .enumerate()
        .map(|(gate, gv)| match cost.mode {
            CostMode::GateCount => ObjectiveTerm {
                gate,
                enable: gv.enable,
                base: 1,
                selectors: gv
                    .type_select
                    .iter()
                    .filter(|(k, _)| *k == GateKind::Con)
                    .map(|&(_, v)| (v, -1))
                    .collect(),
            },
            CostMode::Transistor => ObjectiveTerm {
                gate,
                enable: gv.enable,
                base: 0,
                selectors: gv
                    .type_select
                    .iter()
                    .filter(|(k, _)| cost.weights[*k as usize] != 0)
                    .map(|&(k, v)| (v, cost.weights[k as usize] as i64))
                    .collect(),
            },
        })
        .collect();

    Ok(ConstraintModel {
        spec: spec.clone(),
        arch: arch.clone(),
        cost: *cost,
        vars,
        gates,
        one_hots,
        propagation,
        output_equalities,
        objective,
        care,
    })
}

impl ConstraintModel {
    pub fn spec(&self) -> &TruthSpec {
        &self.spec
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn gates(&self) -> &[GateVars] {
        &self.gates
    }

    pub fn one_hots(&self) -> &[OneHot] {
        &self.one_hots
    }

    pub fn propagation(&self) -> &[Propagation] {
        &self.propagation
    }

    pub fn output_equalities(&self) -> &[OutputEquality] {
        &self.output_equalities
    }

    pub fn objective(&self) -> &[ObjectiveTerm] {
        &self.objective
    }

    /// Care minterms in increasing order.
    pub fn care_minterms(&self) -> &[usize] {
        &self.care
    }

    pub fn empty_assignment(&self) -> Assignment {
        Assignment(vec![false; self.vars.len()])
    }

    pub fn stats(&self) -> ModelStats {
        let count = |f: fn(&Variable) -> bool| self.vars.iter().filter(|v| f(v)).count();
        let care = self.care.len();
        let gate_count = self.gates.len();
        let kinds = self.arch.gate_set.len();
        let mut nonlinear = 0;
        for gv in &self.gates {
            // inpsel * out(source) for every gate-output entity, both inputs
            let sources = gv.entities.iter().filter(|e| matches!(e, FeedEntity::Gate(_))).count();
            nonlinear += 2 * sources * care;
            // E * tsel_r * f_r(inp1, inp2) for every kind
            nonlinear += kinds * care;
        }
        nonlinear += self.objective.iter().map(|t| t.selectors.len()).sum::<usize>();
        ModelStats {
            binary_vars: self.vars.len(),
            type_select_vars: count(|v| matches!(v, Variable::TypeSelect { .. })),
            input_select_vars: count(|v| matches!(v, Variable::InputSelect { .. })),
            enable_vars: count(|v| matches!(v, Variable::Enable { .. })),
            care_minterms: care,
            type_one_hots: self
                .one_hots
                .iter()
                .filter(|h| matches!(h.role, OneHotRole::GateType { .. }))
                .count(),
            input_one_hots: self
                .one_hots
                .iter()
                .filter(|h| matches!(h.role, OneHotRole::Input { .. }))
                .count(),
            input_equations: 2 * gate_count * care,
            output_equations: gate_count * care,
            output_equalities: self.output_equalities.len(),
            nonlinear_terms: nonlinear,
        }
    }

    fn check_len(&self, a: &Assignment) -> Result<()> {
        if a.0.len() != self.vars.len() {
            return Err(Error::AssignmentLength {
                got: a.0.len(),
                expected: self.vars.len(),
            });
        }
        Ok(())
    }

    /// Evaluates every gate's `inp1`, `inp2` and `out` at minterm `g`
    /// through the polynomial definitions.
    pub fn signals(&self, a: &Assignment, g: usize) -> Result<Vec<GateSignals>> {
        self.check_len(a)?;
        let b = Minterm::new(g, self.spec.vars())?;
        let mut sig: Vec<GateSignals> = Vec::with_capacity(self.gates.len());
        for gv in &self.gates {
            let value = |e: &FeedEntity| -> i64 {
                match *e {
                    FeedEntity::Gate(p) => sig[self.arch.gate_index(p).expect("feed entity")].out,
                    FeedEntity::Variable(j) => b.bit(j) as i64,
                    FeedEntity::One => 1,
                    FeedEntity::Zero => 0,
                }
            };
            let input = |k: usize| -> i64 {
                gv.input_select[k]
                    .iter()
                    .zip(&gv.entities)
                    .map(|(&v, e)| a.val(v) * value(e))
                    .sum()
            };
            let (inp1, inp2) = (input(0), input(1));
            let body: i64 = gv
                .type_select
                .iter()
                .map(|&(kind, v)| a.val(v) * kind.arithmetic(inp1, inp2))
                .sum();
            sig.push(GateSignals {
                inp1,
                inp2,
                out: a.val(gv.enable) * body,
            });
        }
        Ok(sig)
    }

    /// Every violated one-hot and output constraint.
    pub fn violations(&self, a: &Assignment) -> Result<Vec<Violation>> {
        self.check_len(a)?;
        let mut out: Vec<Violation> = self
            .one_hots
            .iter()
            .filter(|h| h.vars.iter().filter(|&&v| a.get(v)).count() != 1)
            .map(|h| Violation::OneHot(h.role))
            .collect();
        if !out.is_empty() {
            return Ok(out);
        }
        for &g in &self.care {
            let sig = self.signals(a, g)?;
            for eq in self.output_equalities.iter().filter(|eq| eq.minterm == g) {
                if sig[eq.gate].out != eq.value as i64 {
                    out.push(Violation::Output {
                        output: eq.output,
                        minterm: g,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn is_satisfied(&self, a: &Assignment) -> Result<bool> {
        Ok(self.violations(a)?.is_empty())
    }

    pub fn objective_value(&self, a: &Assignment) -> Result<i64> {
        self.check_len(a)?;
        Ok(self
            .objective
            .iter()
            .map(|t| a.val(t.enable) * (t.base + t.selectors.iter().map(|&(v, c)| c * a.val(v)).sum::<i64>()))
            .sum())
    }

    /// Reads the circuit off a one-hot-consistent assignment.
    pub fn decode(&self, a: &Assignment) -> Result<Circuit> {
        self.check_len(a)?;
        let one = |vars: &mut dyn Iterator<Item = VarId>, what: String| -> Result<usize> {
            let set: Vec<usize> = vars.enumerate().filter(|&(_, v)| a.get(v)).map(|(i, _)| i).collect();
            match set.as_slice() {
                [i] => Ok(*i),
                _ => Err(Error::NotOneHot(what)),
            }
        };
        let mut gates = Vec::with_capacity(self.gates.len());
        for gv in &self.gates {
            let r = one(&mut gv.type_select.iter().map(|&(_, v)| v), format!("gate type of {}", gv.pos))?;
            let k1 = one(&mut gv.input_select[0].iter().copied(), format!("input 1 of {}", gv.pos))?;
            let k2 = one(&mut gv.input_select[1].iter().copied(), format!("input 2 of {}", gv.pos))?;
            gates.push(GateInstance {
                pos: gv.pos,
                kind: gv.type_select[r].0,
                inputs: [gv.entities[k1], gv.entities[k2]],
                enabled: a.get(gv.enable),
            });
        }
        Circuit::new(self.arch.clone(), gates)
    }

    /// The assignment that selects exactly the given circuit.
    pub fn assignment_for(&self, circuit: &Circuit) -> Result<Assignment> {
        let c_arch = circuit.architecture();
        if c_arch.widths != self.arch.widths
            || c_arch.connectivity != self.arch.connectivity
            || c_arch.variables != self.arch.variables
        {
            return Err(Error::ArchitectureMismatch("circuit shape differs from the model".into()));
        }
        let mut a = self.empty_assignment();
        for (gv, gate) in self.gates.iter().zip(circuit.gates()) {
            let (_, tsel) = gv
                .type_select
                .iter()
                .find(|(k, _)| *k == gate.kind)
                .ok_or_else(|| Error::InvalidCircuit(format!("{} not allowed at {}", gate.kind, gv.pos)))?;
            a.set(*tsel, true);
            for (k, input) in gate.inputs.iter().enumerate() {
                let e = gv
                    .entities
                    .iter()
                    .position(|x| x == input)
                    .ok_or_else(|| Error::InvalidCircuit(format!("{} cannot read {input}", gv.pos)))?;
                a.set(gv.input_select[k][e], true);
            }
            a.set(gv.enable, gate.enabled);
        }
        Ok(a)
    }
}
