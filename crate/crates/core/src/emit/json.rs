// SPDX-License-Identifier: Apache-2.0
//! JSON netlists and solve results.
//!
//! A netlist is `{"format": "gatemin-netlist", "version": 1, "architecture":
//! {...}, "gates": [...]}`. Each gate carries `pos` (`level`, `position`),
//! `kind`, `inputs` (two of `"g<level>.<position>"`, `"x<j>"`, `"1"`, `"0"`)
//! and `enabled`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateInstance};
use crate::error::{Error, Result};
use crate::solver::{SolveResult, SolveStatus};
use crate::topology::Architecture;

pub const NETLIST_FORMAT: &str = "gatemin-netlist";
pub const NETLIST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netlist {
    pub format: String,
    pub version: u32,
    pub architecture: Architecture,
    pub gates: Vec<GateInstance>,
}

impl Netlist {
    pub fn new(circuit: &Circuit) -> Self {
        Netlist {
            format: NETLIST_FORMAT.into(),
            version: NETLIST_VERSION,
            architecture: circuit.architecture().clone(),
            gates: circuit.gates().to_vec(),
        }
    }

    pub fn into_circuit(self) -> Result<Circuit> {
        if self.format != NETLIST_FORMAT {
            return Err(Error::InvalidCircuit(format!(
                "format {:?} is not {NETLIST_FORMAT:?}",
                self.format
            )));
        }
        if self.version != NETLIST_VERSION {
            return Err(Error::InvalidCircuit(format!(
                "netlist version {} is not supported (expected {NETLIST_VERSION})",
                self.version
            )));
        }
        Circuit::new(self.architecture, self.gates)
    }
}

/// Outcome of a synthesis run as written by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub status: SolveStatus,
    pub cost: Option<u32>,
    pub nodes: u64,
    pub time_seconds: f64,
    pub circuit: Option<Netlist>,
}

impl ResultFile {
    pub fn new(result: &SolveResult) -> Self {
        ResultFile {
            status: result.status,
            cost: result.cost,
            nodes: result.nodes_explored,
            time_seconds: result.wall_time.as_secs_f64(),
            circuit: result.circuit.as_ref().map(Netlist::new),
        }
    }
}

/// Pretty-printed netlist with a trailing newline.
pub fn emit_json(circuit: &Circuit) -> String {
    let mut s = serde_json::to_string_pretty(&Netlist::new(circuit)).expect("netlists always serialize");
    s.push('\n');
    s
}

/// Accepts a netlist, or a result file that contains one.
pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let netlist = match value.get("format") {
        Some(_) => value,
        None => match value.get("circuit") {
            Some(serde_json::Value::Null) | None => {
                return Err(Error::InvalidCircuit("no circuit in the JSON document".into()))
            }
            Some(c) => c.clone(),
        },
    };
    serde_json::from_value::<Netlist>(netlist)?.into_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::fixtures::{fig3, fig5};

    #[test]
    fn round_trip() {
        for c in [fig3(), fig5()] {
            let text = emit_json(&c);
            assert_eq!(circuit_from_json(&text).unwrap(), c);
        }
    }

    #[test]
    fn documented_field_names() {
        let v: serde_json::Value = serde_json::from_str(&emit_json(&fig3())).unwrap();
        assert_eq!(v["format"], "gatemin-netlist");
        assert_eq!(v["version"], 1);
        assert_eq!(v["gates"][0]["kind"], "XOR");
        assert_eq!(v["gates"][0]["inputs"][0], "x1");
        assert_eq!(v["gates"][4]["inputs"][1], "g2.2");
        assert_eq!(v["architecture"]["connectivity"], "previous-level");
    }

    #[test]
    fn rejects_other_versions() {
        let text = emit_json(&fig3()).replace("\"version\": 1", "\"version\": 9");
        assert!(circuit_from_json(&text).is_err());
    }
}
