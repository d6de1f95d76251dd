// SPDX-License-Identifier: Apache-2.0
//! Text exporters: GAMS models, Graphviz drawings and JSON netlists.

pub mod dot;
pub mod gams;
pub mod json;

pub use dot::emit_dot;
pub use gams::{emit_gams, gams_type_index, GamsOptions};
pub use json::{circuit_from_json, emit_json, Netlist, ResultFile, NETLIST_FORMAT, NETLIST_VERSION};
