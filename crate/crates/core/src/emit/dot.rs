// SPDX-License-Identifier: Apache-2.0
//! Graphviz drawing of a circuit.

use std::fmt::Write as _;

use crate::circuit::Circuit;
use crate::gate::GateKind;
use crate::topology::FeedEntity;

fn node_id(e: FeedEntity) -> String {
    match e {
        FeedEntity::Gate(p) => format!("g{}_{}", p.level, p.position),
        FeedEntity::Variable(j) => format!("x{j}"),
        FeedEntity::One => "one".into(),
        FeedEntity::Zero => "zero".into(),
    }
}

/// Variables and constants are always drawn; disabled gates are omitted and
/// CON wires become points.
pub fn emit_dot(circuit: &Circuit) -> String {
    let arch = circuit.architecture();
    let mut s = String::new();
    let _ = writeln!(s, "digraph circuit {{");
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [fontname=\"Helvetica\"];");
    let _ = writeln!(s, "  {{ rank=min;");
    for j in 1..=circuit.vars() {
        let _ = writeln!(s, "    x{j} [shape=box, label=\"x{j}\"];");
    }
    let _ = writeln!(s, "    one [shape=box, label=\"1\"];");
    let _ = writeln!(s, "    zero [shape=box, label=\"0\"];");
    let _ = writeln!(s, "  }}");
    for g in circuit.gates().iter().filter(|g| g.enabled) {
        let id = node_id(FeedEntity::Gate(g.pos));
        let out = arch.output_index(g.pos).map(|q| format!("f{}", q + 1));
        let mut attrs = if g.kind == GateKind::Con {
            vec!["shape=point".to_string()]
        } else {
            vec![format!("label=\"{}\"", g.kind)]
        };
        if let Some(out) = out {
            attrs.push(format!("xlabel=\"{out}\""));
            attrs.push("peripheries=2".into());
        }
        let _ = writeln!(s, "  {id} [{}];", attrs.join(", "));
        for input in g.live_inputs() {
            let _ = writeln!(s, "  {} -> {id};", node_id(*input));
        }
    }
    let _ = writeln!(s, "}}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::fig3;
    use crate::circuit::GateInstance;

    #[test]
    fn fig3_has_four_gate_nodes() {
        let text = emit_dot(&fig3());
        let labelled = text.lines().filter(|l| l.contains("label=\"") && l.trim_start().starts_with('g')).count();
        assert_eq!(labelled, 4);
        assert!(text.contains("g2_2 [shape=point]"));
        assert!(!text.contains("g3_2"));
        assert!(text.contains("g3_1 [label=\"NAND\", xlabel=\"f1\", peripheries=2];"));
    }

    #[test]
    fn empty_circuit_draws_only_sources() {
        let c = fig3();
        let gates = c
            .gates()
            .iter()
            .map(|g| GateInstance::disabled(g.pos, g.kind, FeedEntity::Zero))
            .collect();
        let empty = Circuit::new(c.architecture().clone(), gates).unwrap();
        let text = emit_dot(&empty);
        assert!(!text.contains("->"));
        assert!(!text.contains("g1_1"));
        for id in ["x1", "x2", "x3", "one", "zero"] {
            assert!(text.contains(&format!("{id} [shape=box")));
        }
    }
}
