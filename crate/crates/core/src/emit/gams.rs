// SPDX-License-Identifier: Apache-2.0
//! GAMS source for the selector model of a uniform grid.
//!
//! The text keeps the conventional layout for this model family: sets
//! `ii jj kk ll gg qq rr`, tables `f(gg,jj)` and `t(gg,qq)`, binary families
//! `c inp out p q r con` and equations `con1..con5` plus `obj`. Gate types
//! use the `r` numbering NAND, AND, OR, XOR, NOR, NOT, CON. Don't-care
//! minterms are left out of `gg` and appear in the tables only as comment
//! rows.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gate::{gate_cost, CostMode, GateKind};
use crate::model::ConstraintModel;
use crate::topology::Connectivity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GamsOptions {
    pub solver: String,
    pub threads: u32,
    /// Solver time limit in seconds.
    pub reslim: u32,
}

impl Default for GamsOptions {
    fn default() -> Self {
        GamsOptions {
            solver: "BARON".into(),
            threads: 4,
            reslim: 500,
        }
    }
}

/// Index of `kind` in the GAMS set `rr`.
pub fn gams_type_index(kind: GateKind) -> usize {
    match kind {
        GateKind::Nand => 1,
        GateKind::And => 2,
        GateKind::Or => 3,
        GateKind::Xor => 4,
        GateKind::Nor => 5,
        GateKind::Not => 6,
        GateKind::Con => 7,
    }
}

fn kind_of_type_index(r: usize) -> GateKind {
    *GateKind::ALL
        .iter()
        .find(|&&k| gams_type_index(k) == r)
        .expect("1..=7")
}

/// `/0*3,5,7*9/` style element list.
fn element_ranges(items: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let mut j = i;
        while j + 1 < items.len() && items[j + 1] == items[j] + 1 {
            j += 1;
        }
        parts.push(if j > i {
            format!("{}*{}", items[i], items[j])
        } else {
            items[i].to_string()
        });
        i = j + 1;
    }
    format!("/{}/", parts.join(","))
}

fn table_row(label: &str, values: &[u8], first: usize, rest: usize) -> String {
    let mut s = label.to_string();
    for (i, v) in values.iter().enumerate() {
        let w = if i == 0 { first } else { rest };
        let _ = write!(s, "{v:>w$}");
    }
    s
}

/// Renders `model` as a GAMS program. Only uniform widths are supported.
pub fn emit_gams(model: &ConstraintModel, options: &GamsOptions) -> Result<String> {
    let spec = model.spec();
    let arch = model.architecture();
    if !arch.is_uniform() {
        return Err(Error::GamsUnsupported(format!(
            "level widths {:?} are not uniform; the GAMS layout needs one jj set",
            arch.widths
        )));
    }
    let n = spec.vars();
    let levels = arch.levels();
    let width = arch.widths[0];
    let all_previous = arch.connectivity == Connectivity::AllPrevious;
    let positions: Vec<usize> = arch.outputs_at.iter().map(|p| p.position).collect();
    let plain_outputs = positions == (1..=width).collect::<Vec<_>>();
    let oo = if plain_outputs { "jj" } else { "oo" };
    let care: Vec<usize> = model.care_minterms().to_vec();
    let dc: Vec<usize> = spec.dont_care().minterms().collect();
    let hex: Vec<String> = spec.outputs().iter().map(|f| f.to_hex()).collect();

    let mut s = String::new();
    let w = &mut s;
    let rule = "*-------------------------------------------------*";
    let _ = writeln!(w, "{rule}");
    let _ = writeln!(w, "* gatemin model, {levels}x{width} grid, {} connectivity", arch.connectivity);
    let _ = writeln!(w, "* outputs {}", hex.join(" "));
    if !dc.is_empty() {
        let list: Vec<String> = dc.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(w, "* don't-care minterms g={}", list.join(","));
    }
    let _ = writeln!(w, "{rule}");

    let level_list: Vec<String> = (1..=levels).map(|l| l.to_string()).collect();
    let _ = writeln!(w, "set ii no. of levels /{}/;", level_list.join(","));
    let _ = writeln!(w, "set jj no. of gates at a level /1*{width}/;");
    let _ = writeln!(w, "set kk no. of inputs of a gate /1*2/;");
    let _ = writeln!(w, "set ll no. of constants /1*2/;");
    let _ = writeln!(w, "set gg no. of minterms {};", element_ranges(&care));
    if !dc.is_empty() {
        let _ = writeln!(w, "* Full minterm range, for a fully specified variant:");
        let _ = writeln!(w, "*set gg no. of minterms /0*{}/;", (1usize << n) - 1);
    }
    let _ = writeln!(w, "set qq no. of variables /1*{n}/;");
    let _ = writeln!(w, "set rr no. of gate types /1*7/;");
    if !plain_outputs {
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        let _ = writeln!(w, "set oo(jj) output gates {};", element_ranges(&sorted));
    }
    let _ = writeln!(w, "alias (pp,jj);");
    if all_previous {
        let _ = writeln!(w, "alias (hh,ii);");
    }

    // Column c of f holds the output driven by top gate c.
    let mut columns: Vec<(usize, usize)> = positions.iter().enumerate().map(|(q, &p)| (p, q)).collect();
    columns.sort_unstable();
    let f_value = |g: usize| -> Vec<u8> {
        columns
            .iter()
            .map(|&(_, q)| u8::from(spec.outputs()[q].get(g)))
            .collect()
    };
    let _ = writeln!(w, "table f(gg,{oo}) output functions");
    let label_w = format!("{}", (1usize << n) - 1).len();
    let mut head = " ".repeat(label_w);
    for &(p, _) in &columns {
        let _ = write!(head, "{p:>3}");
    }
    let _ = writeln!(w, "{head}");
    if !dc.is_empty() {
        let _ = writeln!(w, "* Don't-care rows; uncomment together with the full gg.");
    }
    for g in 0..1usize << n {
        let label = format!("{g:<label_w$}");
        let row = table_row(&label, &f_value(g), 3, 3);
        let star = if spec.is_care(g) { "" } else { "*" };
        let _ = writeln!(w, "{star}{row}");
    }
    let _ = writeln!(w, ";");
    let _ = writeln!(w);

    let _ = writeln!(w, "table  t(gg,qq) auxiliary table");
    let mut head = " ".repeat(label_w);
    for j in 1..=n {
        let width = if j == 1 { 3 } else { 2 };
        let _ = write!(head, "{j:>width$}");
    }
    let _ = writeln!(w, "{head}");
    if !dc.is_empty() {
        let _ = writeln!(w, "* Don't-care rows; uncomment together with the full gg.");
    }
    for g in 0..1usize << n {
        let bits: Vec<u8> = (1..=n).map(|j| ((g >> (n - j)) & 1) as u8).collect();
        let row = table_row(&format!("{g:<label_w$}"), &bits, 3, 2);
        let star = if spec.is_care(g) { "" } else { "*" };
        let _ = writeln!(w, "{star}{row}");
    }
    let _ = writeln!(w, ";");
    let _ = writeln!(w);

    let transistor = model.cost_model().mode == CostMode::Transistor;
    if transistor {
        let weights: Vec<String> = (1..=7)
            .map(|r| format!("{r} {}", gate_cost(kind_of_type_index(r), model.cost_model())))
            .collect();
        let _ = writeln!(w, "parameter wt(rr) gate weights /{}/;", weights.join(", "));
        let _ = writeln!(w);
    }

    let pdom = if all_previous { "ii,jj,kk,hh,pp" } else { "ii,jj,kk,pp" };
    let _ = writeln!(w, "binary variable c(ii,jj) gate validation;");
    let _ = writeln!(w, "binary variable inp(ii,jj,kk,gg) inputs of gates;");
    let _ = writeln!(w, "binary variable out(ii,pp,gg) output of gates;");
    let _ = writeln!(w, "binary variable p({pdom}) select output to feed the input;");
    let _ = writeln!(w, "binary variable q(ii,jj,kk,qq) select variable to feed the input;");
    let _ = writeln!(w, "binary variable r(ii,jj,rr) select gate type to feed the input;");
    let _ = writeln!(w, "binary variable con(ii,jj,kk,ll) select constant to feed the input;");
    let _ = writeln!(w, "Free Variable z objective;");
    let _ = writeln!(w, "equations con1,con2,con3,con4,con5,obj;");
    let _ = writeln!(w);

    let (p_sum, p_feed) = if all_previous {
        (
            "sum((hh,pp)$(ord(hh) lt ord(ii)),p(ii,jj,kk,hh,pp))",
            "sum((hh,pp)$(ord(hh) lt ord(ii)),p(ii,jj,kk,hh,pp)*\nout(hh,pp,gg))",
        )
    } else {
        ("sum(pp,p(ii,jj,kk,pp))", "sum(pp, p(ii,jj,kk,pp)*\nout(ii-1,pp,gg))")
    };
    let _ = writeln!(w, "con1(ii,jj,kk)..{p_sum}+sum(qq, q(ii,jj,kk,qq))+");
    let _ = writeln!(w, "sum(ll,con(ii,jj,kk,ll))=e=1;");
    let _ = writeln!(w, "con2(ii,jj)..sum(rr,r(ii,jj,rr))=e=1;");
    let _ = writeln!(w, "con3(ii,jj,kk,gg)..inp(ii,jj,kk,gg)=e={p_feed}+sum(qq,q(ii,jj,kk,qq)*t(gg,qq))+con(ii,jj,kk,'1');");
    let _ = writeln!(w, "con4(ii,jj,gg)..out(ii,jj,gg)=e=c(ii,jj)*( r(ii,jj,'2')*");
    let _ = writeln!(w, "prod(kk,inp(ii,jj,kk,gg)) +r(ii,jj,'3')*(sum(kk,inp(ii,jj,kk,gg))");
    let _ = writeln!(w, "-prod(kk,inp(ii,jj,kk,gg))) +r(ii,jj,'6')*(1-inp(ii,jj,'1',gg))");
    let _ = writeln!(w, "+r(ii,jj,'4')*(sum(kk,inp(ii,jj,kk,gg)) -2*prod(kk,inp(ii,jj,kk,gg)))");
    let _ = writeln!(w, "+r(ii,jj,'1')*(1 -prod(kk,inp(ii,jj,kk,gg))) +r(ii,jj,'5')*");
    let _ = writeln!(w, "prod(kk,(1-inp(ii,jj,kk,gg))) +r(ii,jj,'7')*inp(ii,jj,'1',gg));");
    let _ = writeln!(w, "con5(gg,{oo})..out('{levels}',{oo},gg)=e=f(gg,{oo});");
    if transistor {
        let _ = writeln!(w, "obj..z=e=sum((ii,jj),c(ii,jj)*sum(rr,wt(rr)*r(ii,jj,rr)));");
    } else {
        let _ = writeln!(w, "obj..z=e=sum((ii,jj),(c(ii,jj)*(1-r(ii,jj,'7'))));");
    }

    let excluded: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| !arch.gate_set.contains(k))
        .collect();
    if all_previous {
        let _ = writeln!(w, "p.fx(ii,jj,kk,hh,pp)$(ord(hh) ge ord(ii))=0;");
    } else {
        let _ = writeln!(w, "p.fx('1',jj,kk,pp)=0;");
    }
    if !plain_outputs {
        let _ = writeln!(w, "c.fx('{levels}',jj)$(not oo(jj))=0;");
    }
    for k in excluded {
        let _ = writeln!(w, "r.fx(ii,jj,'{}')=0;", gams_type_index(k));
    }
    let _ = writeln!(w, "Model mplex /");
    let _ = writeln!(w, "con1,con2,con3,con4,con5,");
    let _ = writeln!(w, "Obj/;");
    let _ = writeln!(w, "Option MINLP = {};", options.solver);
    let _ = writeln!(w, "Option threads={};", options.threads);
    let _ = writeln!(w, "mplex.reslim = {};", options.reslim);
    let _ = writeln!(w, "Solve mplex using MINLP minimizing z;");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{Bitvector, TruthSpec};
    use crate::gate::CostModel;
    use crate::model::encode;
    use crate::topology::Architecture;

    fn fig5_model() -> ConstraintModel {
        let spec = TruthSpec::from_hex(3, &["6b", "2a"], None)
            .unwrap()
            .with_dont_care(Bitvector::new(3, 0x03).unwrap())
            .unwrap();
        encode(&spec, &Architecture::grid(3, 3, 2, &GateKind::ALL, 2), &CostModel::gate_count()).unwrap()
    }

    #[test]
    fn type_numbering() {
        let order: Vec<usize> = GateKind::ALL.iter().map(|&k| gams_type_index(k)).collect();
        assert_eq!(order, [2, 3, 6, 4, 1, 5, 7]);
        for r in 1..=7 {
            assert_eq!(gams_type_index(kind_of_type_index(r)), r);
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(element_ranges(&[2, 3, 4, 5, 6, 7]), "/2*7/");
        assert_eq!(element_ranges(&[0, 1, 2, 3, 5, 7, 8, 9]), "/0*3,5,7*9/");
        assert_eq!(element_ranges(&[4]), "/4/");
    }

    #[test]
    fn dont_care_layout() {
        let text = emit_gams(&fig5_model(), &GamsOptions::default()).unwrap();
        assert!(text.contains("set gg no. of minterms /2*7/;"));
        assert!(text.contains("*set gg no. of minterms /0*7/;"));
        assert!(text.contains("\n2  0  0\n3  1  1\n4  0  0\n5  1  1\n6  1  0\n7  0  0\n;"));
        assert!(text.contains("\n2  0 1 0\n"));
        assert!(text.contains("\n*0  0 0 0\n*1  0 0 1\n"));
        assert!(text.contains("mplex.reslim = 500;"));
        // No statement line may start with '*', which GAMS reads as a comment.
        for line in text.lines().filter(|l| l.starts_with('*')) {
            assert!(!line.contains("inp(") && !line.contains("out("), "{line}");
        }
    }

    #[test]
    fn refuses_ragged_widths() {
        let spec = TruthSpec::from_hex(3, &["6b"], None).unwrap();
        let arch = Architecture::with_widths(3, vec![2, 1], &GateKind::ALL, 1);
        let model = encode(&spec, &arch, &CostModel::gate_count()).unwrap();
        assert!(matches!(
            emit_gams(&model, &GamsOptions::default()),
            Err(Error::GamsUnsupported(_))
        ));
    }
}
