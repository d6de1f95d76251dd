// SPDX-License-Identifier: Apache-2.0
//! Exact synthesis of minimum-cost multi-level circuits of two-input gates.
//!
//! A [`TruthSpec`] (one or more functions with optional don't-cares) and an
//! [`Architecture`] (levels of gate slots, connectivity, allowed kinds) are
//! encoded by [`encode`] into a selector model, which [`solve`] minimises
//! exactly. Results are checked with [`verify`] and exported through
//! [`emit`].

pub mod baseline;
pub mod bench;
pub mod bits;
pub mod circuit;
pub mod emit;
pub mod error;
pub mod gate;
pub mod model;
pub mod oracle;
pub mod problem;
pub mod solver;
pub mod topology;

pub use baseline::{expand, subfunctions, ExpansionKind};
pub use bits::{parse_function, parse_hex, Bitvector, Minterm, TruthSpec};
pub use circuit::{verify, verify_with_cost, Circuit, GateInstance, VerifyReport};
pub use emit::{circuit_from_json, emit_dot, emit_gams, emit_json, GamsOptions};
pub use error::{Error, Result};
pub use gate::{eval_gate, eval_gate_bitparallel, gate_cost, CostMode, CostModel, GateKind};
pub use model::{encode, Assignment, ConstraintModel, ModelStats};
pub use oracle::{enumerate_oracle, OracleResult};
pub use problem::{load_problem, parse_problem, Problem, ProblemSpecFile};
pub use solver::{lower_bound, solve, PartialAssignment, SearchConfig, SearchStrategy, SolveResult, SolveStatus};
pub use topology::{Architecture, Connectivity, FeedEntity, GatePos};
