// SPDX-License-Identifier: Apache-2.0
//! `gatemin`: exact synthesis of minimal two-input gate circuits.
//!
//! Exit codes: 0 optimal or feasible, 2 infeasible, 3 timeout with no
//! circuit, 4 a circuit failed `verify`, 1 usage or internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gatemin::bench::{render_table, run_suite, BenchSuite};
use gatemin::baseline::gate_bound;
use gatemin::emit::ResultFile;
use gatemin::{
    circuit_from_json, emit_dot, emit_gams, emit_json, encode, expand, load_problem, solve, verify_with_cost,
    Architecture, CostMode, CostModel, ExpansionKind, GamsOptions, GatePos, Problem, SearchConfig, SolveResult,
    SolveStatus, TruthSpec,
};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "gatemin", version, about = "Exact synthesis of minimal two-input gate circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmitTarget {
    Dot,
    Gams,
    Json,
}

impl EmitTarget {
    fn extension(self) -> &'static str {
        match self {
            EmitTarget::Dot => "dot",
            EmitTarget::Gams => "gms",
            EmitTarget::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Objective {
    Gates,
    Transistors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BaselineKind {
    Shannon,
    PositiveDavio,
    NegativeDavio,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a minimum-cost circuit for a problem file.
    Synth {
        spec: PathBuf,
        /// Wall-clock budget, e.g. `90`, `1.5s`, `500ms`, `2m`, `1h`.
        #[arg(long, value_parser = parse_duration)]
        time_limit: Option<Duration>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Overrides the objective in the problem file.
        #[arg(long, value_enum)]
        objective: Option<Objective>,
        /// Artifacts to write next to the result, repeatable or comma separated.
        #[arg(long, value_enum, value_delimiter = ',')]
        emit: Vec<EmitTarget>,
        /// Directory for emitted artifacts.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write the result JSON to this file.
        #[arg(long)]
        result: Option<PathBuf>,
        /// On infeasibility retry with one more level, then one more gate per level, and so on.
        #[arg(long)]
        grow: bool,
        #[arg(long, default_value_t = 4)]
        max_grow: usize,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Check a netlist or result file against a problem file.
    Verify { circuit: PathBuf, spec: PathBuf },
    /// Run a benchmark suite and print a comparison table.
    Bench {
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Budget for cases without their own `time_limit_seconds`.
        #[arg(long, value_parser = parse_duration)]
        time_limit: Option<Duration>,
        /// Also write the rows as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build expansion circuits for each output and report their size.
    Baseline {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "shannon")]
        kind: BaselineKind,
        /// Write each circuit as a DOT or JSON file into `--out-dir`.
        #[arg(long, value_enum, value_delimiter = ',')]
        emit: Vec<EmitTarget>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Write the GAMS model for a problem file.
    EmitGams {
        spec: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "BARON")]
        solver: String,
        #[arg(long, default_value_t = 4)]
        gams_threads: u32,
        #[arg(long, default_value_t = 500)]
        reslim: u32,
        #[arg(long, value_enum)]
        objective: Option<Objective>,
    },
}

fn parse_duration(text: &str) -> std::result::Result<Duration, String> {
    let t = text.trim();
    let (number, scale) = if let Some(v) = t.strip_suffix("ms") {
        (v, 1e-3)
    } else if let Some(v) = t.strip_suffix('s') {
        (v, 1.0)
    } else if let Some(v) = t.strip_suffix('m') {
        (v, 60.0)
    } else if let Some(v) = t.strip_suffix('h') {
        (v, 3600.0)
    } else {
        (t, 1.0)
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("invalid duration {text:?}, expected e.g. 30, 1.5s, 500ms, 2m"))?;
    if !value.is_finite() || value < 0.0 {
        return Err(format!("invalid duration {text:?}"));
    }
    Ok(Duration::from_secs_f64(value * scale))
}

fn load(spec: &Path, objective: Option<Objective>) -> Result<Problem> {
    let mut p = load_problem(spec).with_context(|| format!("reading {}", spec.display()))?;
    match objective {
        Some(Objective::Gates) => p.cost.mode = CostMode::GateCount,
        Some(Objective::Transistors) => p.cost.mode = CostMode::Transistor,
        None => {}
    }
    Ok(p)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "circuit".into())
}

/// One enlargement step: odd attempts add a level under the top, even
/// attempts widen every level by one.
fn grown(arch: &Architecture, attempt: usize) -> Architecture {
    let mut a = arch.clone();
    if attempt % 2 == 1 {
        let width = *a.widths.iter().max().expect("non-empty");
        let top = a.widths.len();
        a.widths.insert(top - 1, width);
        for pos in &mut a.outputs_at {
            *pos = GatePos::new(top + 1, pos.position);
        }
    } else {
        for w in &mut a.widths {
            *w += 1;
        }
    }
    a
}

fn exit_for(status: SolveStatus) -> ExitCode {
    match status {
        SolveStatus::Optimal | SolveStatus::FeasibleBestSoFar => ExitCode::SUCCESS,
        SolveStatus::Infeasible => ExitCode::from(EXIT_INFEASIBLE),
        SolveStatus::TimeoutNoSolution => ExitCode::from(EXIT_TIMEOUT),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    spec_path: &Path,
    time_limit: Option<Duration>,
    threads: usize,
    objective: Option<Objective>,
    emit: &[EmitTarget],
    out_dir: &Path,
    result_path: Option<&Path>,
    grow: bool,
    max_grow: usize,
    no_symmetry: bool,
) -> Result<ExitCode> {
    let problem = load(spec_path, objective)?;
    let name = stem(spec_path);
    let mut config = SearchConfig::default()
        .with_threads(threads)
        .with_symmetry_breaking(!no_symmetry);
    config.time_limit = time_limit;

    let attempts = if grow { max_grow + 1 } else { 1 };
    let mut arch = problem.arch.clone();
    let mut outcome: Option<SolveResult> = None;
    for attempt in 0..attempts {
        if attempt > 0 {
            arch = grown(&arch, attempt);
        }
        let model = encode(&problem.spec, &arch, &problem.cost)?;
        if attempt == 0 && emit.contains(&EmitTarget::Gams) {
            fs::create_dir_all(out_dir)?;
            let text = emit_gams(&model, &GamsOptions::default())?;
            write(&out_dir.join(format!("{name}.gms")), &text)?;
        }
        let result = solve(&model, &config);
        if grow {
            eprintln!("attempt {}: widths {:?} -> {}", attempt + 1, arch.widths, result.status);
        }
        let infeasible = result.status == SolveStatus::Infeasible;
        outcome = Some(result);
        if !infeasible {
            break;
        }
    }
    let result = outcome.expect("at least one attempt");

    if let Some(circuit) = &result.circuit {
        let report = verify_with_cost(circuit, &problem.spec, &problem.cost)?;
        if !report.pass || Some(report.cost) != result.cost {
            bail!(
                "internal error: solver circuit failed verification (mismatches {:?}, cost {} vs {:?})",
                report.mismatches,
                report.cost,
                result.cost
            );
        }
        for target in emit {
            let text = match target {
                EmitTarget::Dot => emit_dot(circuit),
                EmitTarget::Json => emit_json(circuit),
                EmitTarget::Gams => continue,
            };
            fs::create_dir_all(out_dir)?;
            write(&out_dir.join(format!("{name}.{}", target.extension())), &text)?;
        }
    }

    let mut json = serde_json::to_string_pretty(&ResultFile::new(&result))?;
    json.push('\n');
    if let Some(path) = result_path {
        write(path, &json)?;
    }
    print!("{json}");
    Ok(exit_for(result.status))
}

fn cmd_verify(circuit_path: &Path, spec_path: &Path) -> Result<ExitCode> {
    let problem = load(spec_path, None)?;
    let text = fs::read_to_string(circuit_path).with_context(|| format!("reading {}", circuit_path.display()))?;
    let circuit = circuit_from_json(&text).with_context(|| format!("parsing {}", circuit_path.display()))?;
    let report = verify_with_cost(&circuit, &problem.spec, &problem.cost)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_bench(suite_path: &Path, threads: usize, time_limit: Option<Duration>, json: Option<&Path>) -> Result<ExitCode> {
    let suite = BenchSuite::load(suite_path).with_context(|| format!("reading {}", suite_path.display()))?;
    let rows = run_suite(&suite, threads, time_limit);
    print!("{}", render_table(&rows));
    if let Some(path) = json {
        write(path, &serde_json::to_string_pretty(&rows)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_baseline(spec_path: &Path, kind: BaselineKind, emit: &[EmitTarget], out_dir: &Path) -> Result<ExitCode> {
    let problem = load(spec_path, None)?;
    let n = problem.spec.vars();
    let kinds: Vec<ExpansionKind> = match kind {
        BaselineKind::Shannon => vec![ExpansionKind::Shannon],
        BaselineKind::PositiveDavio => vec![ExpansionKind::PositiveDavio],
        BaselineKind::NegativeDavio => vec![ExpansionKind::NegativeDavio],
        BaselineKind::All => ExpansionKind::ALL.to_vec(),
    };
    let bound = gate_bound(n);
    let name = stem(spec_path);
    let mut failed = false;
    for (q, f) in problem.spec.outputs().iter().enumerate() {
        // Each output is checked on its own care set.
        let single = TruthSpec::new(n, vec![*f], problem.spec.dont_care())?;
        for &k in &kinds {
            let circuit = expand(*f, k)?;
            let report = verify_with_cost(&circuit, &single, &CostModel::gate_count())?;
            failed |= !report.pass;
            println!(
                "f{} {} {}: {} gates, bound {}, margin {}, {}",
                q + 1,
                f.to_hex(),
                k,
                report.cost,
                bound,
                bound - u64::from(report.cost),
                if report.pass { "verified" } else { "FAILED" }
            );
            for target in emit {
                let text = match target {
                    EmitTarget::Dot => emit_dot(&circuit),
                    EmitTarget::Json => emit_json(&circuit),
                    EmitTarget::Gams => bail!("baseline circuits have no GAMS form"),
                };
                fs::create_dir_all(out_dir)?;
                write(&out_dir.join(format!("{name}.f{}.{k}.{}", q + 1, target.extension())), &text)?;
            }
        }
    }
    Ok(if failed {
        ExitCode::from(EXIT_VERIFY_FAILED)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_emit_gams(
    spec_path: &Path,
    output: Option<&Path>,
    options: GamsOptions,
    objective: Option<Objective>,
) -> Result<ExitCode> {
    let problem = load(spec_path, objective)?;
    let model = encode(&problem.spec, &problem.arch, &problem.cost)?;
    let text = emit_gams(&model, &options)?;
    match output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Synth {
            spec,
            time_limit,
            threads,
            objective,
            emit,
            out_dir,
            result,
            grow,
            max_grow,
            no_symmetry,
        } => {
            if threads == 0 {
                return Err(anyhow!("--threads must be at least 1"));
            }
            cmd_synth(
                &spec,
                time_limit,
                threads,
                objective,
                &emit,
                &out_dir,
                result.as_deref(),
                grow,
                max_grow,
                no_symmetry,
            )
        }
        Command::Verify { circuit, spec } => cmd_verify(&circuit, &spec),
        Command::Bench {
            suite,
            threads,
            time_limit,
            json,
        } => cmd_bench(&suite, threads.max(1), time_limit, json.as_deref()),
        Command::Baseline {
            spec,
            kind,
            emit,
            out_dir,
        } => cmd_baseline(&spec, kind, &emit, &out_dir),
        Command::EmitGams {
            spec,
            output,
            solver,
            gams_threads,
            reslim,
            objective,
        } => cmd_emit_gams(
            &spec,
            output.as_deref(),
            GamsOptions {
                solver,
                threads: gams_threads,
                reslim,
            },
            objective,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gatemin::GateKind;

    #[test]
    fn durations() {
        assert_eq!(parse_duration("90").unwrap(), Duration::from_secs(90));
        assert_eq!(parse_duration("1.5s").unwrap(), Duration::from_millis(1500));
        assert_eq!(parse_duration("500ms").unwrap(), Duration::from_millis(500));
        assert_eq!(parse_duration("2m").unwrap(), Duration::from_secs(120));
        assert_eq!(parse_duration("1h").unwrap(), Duration::from_secs(3600));
        assert!(parse_duration("soon").is_err());
        assert!(parse_duration("-1").is_err());
    }

    #[test]
    fn growth_alternates() {
        let a = Architecture::grid(3, 2, 2, &GateKind::ALL, 2);
        let one = grown(&a, 1);
        assert_eq!(one.widths, vec![2, 2, 2]);
        assert_eq!(one.outputs_at, vec![GatePos::new(3, 1), GatePos::new(3, 2)]);
        let two = grown(&one, 2);
        assert_eq!(two.widths, vec![3, 3, 3]);
        assert_eq!(two.outputs_at, one.outputs_at);
    }
}
