// SPDX-License-Identifier: Apache-2.0
//! Benchmark suites: named problems with a reference gate count to match.
//!
//! A suite file is a JSON object `{"cases": [...]}`. Each case has a `name`,
//! the problem either inline as `problem` or as a `spec` path relative to the
//! suite file, `reference_cost`, `reference_source`, and optionally
//! `time_limit_seconds` and `stretch` (not expected to finish in budget).
//! Reference costs are gate counts and do not depend on the skeleton used.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::circuit::verify_with_cost;
use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::model::encode;
use crate::problem::{load_problem, Problem, ProblemSpecFile};
use crate::solver::{solve, SearchConfig, SolveStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchCase {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSpecFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<PathBuf>,
    pub reference_cost: u32,
    pub reference_source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_seconds: Option<f64>,
    #[serde(default)]
    pub stretch: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSuite {
    pub cases: Vec<BenchCase>,
    #[serde(skip)]
    pub base: PathBuf,
}

impl BenchSuite {
    pub fn load(path: &Path) -> Result<Self> {
        let mut suite: BenchSuite = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        suite.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(suite)
    }
}

impl BenchCase {
    pub fn problem(&self, base: &Path) -> Result<Problem> {
        match (&self.problem, &self.spec) {
            (Some(p), None) => p.clone().into_problem(),
            (None, Some(path)) => load_problem(&base.join(path)),
            _ => Err(Error::ProblemField {
                field: format!("cases[{}]", self.name),
                message: "exactly one of problem or spec is required".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub gate_set: Vec<GateKind>,
    pub widths: Vec<usize>,
    pub status: Option<SolveStatus>,
    pub cost: Option<u32>,
    pub reference_cost: u32,
    pub verified: bool,
    pub stretch: bool,
    pub seconds: f64,
    pub error: Option<String>,
}

impl BenchRow {
    /// A verified circuit no worse than the reference.
    pub fn meets_reference(&self) -> bool {
        self.verified && self.cost.is_some_and(|c| c <= self.reference_cost)
    }

    /// Verified but more expensive than the reference.
    pub fn exceeds_reference(&self) -> bool {
        self.verified && self.cost.is_some_and(|c| c > self.reference_cost)
    }
}

pub fn run_case(case: &BenchCase, base: &Path, threads: usize, default_limit: Option<Duration>) -> BenchRow {
    let mut row = BenchRow {
        name: case.name.clone(),
        gate_set: Vec::new(),
        widths: Vec::new(),
        status: None,
        cost: None,
        reference_cost: case.reference_cost,
        verified: false,
        stretch: case.stretch,
        seconds: 0.0,
        error: None,
    };
    let problem = match case.problem(base) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.gate_set = problem.arch.gate_set.clone();
    row.widths = problem.arch.widths.clone();
    let model = match encode(&problem.spec, &problem.arch, &problem.cost) {
        Ok(m) => m,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let mut config = SearchConfig::default().with_threads(threads);
    config.time_limit = case
        .time_limit_seconds
        .map(Duration::from_secs_f64)
        .or(default_limit);
    let result = solve(&model, &config);
    row.status = Some(result.status);
    row.cost = result.cost;
    row.seconds = result.wall_time.as_secs_f64();
    if let Some(c) = &result.circuit {
        match verify_with_cost(c, &problem.spec, &problem.cost) {
            Ok(rep) if rep.pass && Some(rep.cost) == result.cost => row.verified = true,
            Ok(rep) => row.error = Some(format!("verification failed at {:?}", rep.mismatches)),
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

pub fn run_suite(suite: &BenchSuite, threads: usize, default_limit: Option<Duration>) -> Vec<BenchRow> {
    suite
        .cases
        .iter()
        .map(|c| run_case(c, &suite.base, threads, default_limit))
        .collect()
}

/// Plain-text table; every column but `time` is deterministic.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>4} {:>4} {:<22} {:<8} {:<26} {:>9}  note",
        "case", "ours", "ref", "status", "verified", "gates", "time"
    );
    for r in rows {
        let cost = r.cost.map_or("-".to_string(), |c| c.to_string());
        let status = r.status.map_or("error".to_string(), |s| s.to_string());
        let gates: Vec<&str> = r.gate_set.iter().map(|k| k.name()).collect();
        let note = if let Some(e) = &r.error {
            e.clone()
        } else if r.exceeds_reference() {
            "EXCEEDS REFERENCE".into()
        } else if r.stretch && !r.meets_reference() {
            "stretch".into()
        } else if r.meets_reference() {
            if r.cost < Some(r.reference_cost) { "below reference" } else { "" }.into()
        } else {
            "no circuit".into()
        };
        let _ = writeln!(
            s,
            "{:<10} {:>4} {:>4} {:<22} {:<8} {:<26} {:>8.2}s  {}",
            r.name,
            cost,
            r.reference_cost,
            status,
            if r.verified { "yes" } else { "no" },
            gates.join(","),
            r.seconds,
            note
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(json: &str) -> BenchCase {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn runs_an_inline_case() {
        let c = case(
            r#"{"name": "ab", "reference_cost": 5, "reference_source": "test",
                "problem": {"variables": 3, "outputs": ["ab"], "gates_per_level": [1,1,1,1,1],
                            "connectivity": "all-previous", "gate_set": ["NAND"]}}"#,
        );
        let row = run_case(&c, Path::new("."), 1, None);
        assert_eq!(row.status, Some(SolveStatus::Optimal));
        assert_eq!(row.cost, Some(5));
        assert!(row.verified && row.meets_reference() && !row.exceeds_reference());
        let table = render_table(&[row]);
        assert!(table.lines().nth(1).unwrap().starts_with("ab"));
    }

    #[test]
    fn flags_costs_above_reference() {
        let c = case(
            r#"{"name": "e8", "reference_cost": 5, "reference_source": "test",
                "problem": {"variables": 3, "outputs": ["e8"], "gates_per_level": [1,1,1,1,1,1],
                            "connectivity": "all-previous", "gate_set": ["NAND"]}}"#,
        );
        let row = run_case(&c, Path::new("."), 1, None);
        assert_eq!(row.cost, Some(6));
        assert!(row.exceeds_reference());
        assert!(render_table(&[row]).contains("EXCEEDS REFERENCE"));
    }

    #[test]
    fn bad_case_is_reported_not_fatal() {
        let c = case(r#"{"name": "none", "reference_cost": 1, "reference_source": "test"}"#);
        let row = run_case(&c, Path::new("."), 1, None);
        assert!(row.error.is_some());
        assert!(!row.verified);
    }
}
