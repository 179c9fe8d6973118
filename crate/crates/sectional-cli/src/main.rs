//! Command line front end: every pipeline of the sectional crate behind one
//! binary with JSON input documents, deterministic seeds, and reports that
//! embed their own replay configuration.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use sectional::bounds::{
    canonical_bounds, canonical_bounds_with_frame, remark_2_4_fixture, sum_bounds,
};
use sectional::curvature::{
    plane_curvature, CanonicalTensor, CurvatureEvaluator, TensorInput, TensorSum, TwoPlane,
};
use sectional::linalg::{Frame, SymmetricForm};
use sectional::oracle::{estimate_range, plane_for_value, CurvatureRangeEstimate};
use sectional::realization::realize_interval_with;
use sectional::spectral::{paper_spectrum, sweep_spectrum, SpectralResult};

/// Refinement sweeps spent on each extremal candidate of a range estimate.
const REFINEMENT_SWEEPS: usize = 60;

/// Exit code when a verification command finds a violation.
const VIOLATION_EXIT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "sectional",
    version,
    about = "Sharp sectional-curvature bounds, a constructive eigensolver, a range \
             oracle, and curvature-interval realization, all reporting JSON"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input JSON document; pass - to read standard input
    #[arg(short, long)]
    input: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads for sampling; never affects report bytes
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct RunArgs {
    /// Base seed of every pseudo-random draw
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance of solver and verification thresholds
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Monte-Carlo sample budget
    #[arg(long, default_value_t = 4096)]
    samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Extremal-plane deflation
    Paper,
    /// Largest-pivot rotation sweeps
    Sweep,
}

impl ModeArg {
    fn token(self) -> &'static str {
        match self {
            ModeArg::Paper => "paper",
            ModeArg::Sweep => "sweep",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    /// Two degenerate forms whose summed bound 2 is never attained
    #[value(name = "remark-2-4")]
    Remark24,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp curvature range of a single form's canonical tensor
    Bounds {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Outer curvature interval of a signed sum of canonical tensors
    SumBounds {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Eigenvalues and an orthonormal eigenframe of a symmetric form
    Spectral {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Solver strategy
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
    },
    /// Monte-Carlo curvature range estimate with extremal refinement
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check that the estimated range stays inside the formula bounds
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Find a plane whose curvature equals a prescribed value
    PlaneFor {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Target curvature value inside the sharp range
        #[arg(long, allow_hyphen_values = true)]
        value: f64,
    },
    /// Realize a curvature interval as a hypersurface and measure it back
    Realize {
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Target interval endpoints A,B
        #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
        interval: (f64, f64),
        /// Manifold dimension
        #[arg(long)]
        dim: usize,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Built-in walkthrough fixtures
    Demo {
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Fixture name
        #[arg(value_enum)]
        name: DemoName,
    },
}

fn parse_interval(raw: &str) -> Result<(f64, f64), String> {
    let (a, b) = raw
        .split_once(',')
        .ok_or_else(|| "expected two comma-separated endpoints A,B".to_string())?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad left endpoint: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad right endpoint: {e}"))?;
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version requests are not errors; anything else is an
            // input error, reported with exit code 1
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// A validated input document: a single form or a normalized signed sum.
enum Parsed {
    Form(SymmetricForm),
    Sum(TensorSum),
}

fn read_raw_input(input: &str) -> Result<String, String> {
    if input == "-" {
        let mut raw = String::new();
        std::io::stdin()
            .read_to_string(&mut raw)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(raw)
    } else {
        fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))
    }
}

fn parse_document(raw: &str) -> Result<(TensorInput, Parsed), String> {
    let input: TensorInput =
        serde_json::from_str(raw).map_err(|e| format!("malformed input document: {e}"))?;
    let parsed = match &input {
        TensorInput::Form(doc) => Parsed::Form(doc.build().map_err(|e| e.to_string())?),
        TensorInput::Sum(doc) => Parsed::Sum(doc.build().map_err(|e| e.to_string())?),
    };
    Ok((input, parsed))
}

fn require_form(parsed: Parsed) -> Result<SymmetricForm, String> {
    match parsed {
        Parsed::Form(form) => Ok(form),
        Parsed::Sum(_) => {
            Err("this command takes a single form document, not a sum; see sum-bounds".into())
        }
    }
}

fn require_sum(parsed: Parsed) -> Result<TensorSum, String> {
    match parsed {
        Parsed::Sum(sum) => Ok(sum),
        Parsed::Form(_) => {
            Err("this command takes a sum document with a terms list; see bounds".into())
        }
    }
}

fn validate(run: &RunArgs, workers: usize) -> Result<(), String> {
    if !(run.tol > 0.0) {
        return Err(format!("tol must be positive, got {}", run.tol));
    }
    if run.samples == 0 {
        return Err("samples must be at least 1".into());
    }
    if workers == 0 {
        return Err("workers must be at least 1".into());
    }
    Ok(())
}

/// Runs `f` on a dedicated thread pool; the oracle's reductions are
/// worker-count independent, so this only changes wall time.
fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| format!("cannot build worker pool: {e}"))?;
    Ok(pool.install(f))
}

fn base_config(run: &RunArgs) -> Value {
    json!({"seed": run.seed, "tol": run.tol, "samples": run.samples})
}

fn extend_config(run: &RunArgs, extra: &[(&str, Value)]) -> Value {
    let mut config = base_config(run);
    let map = config.as_object_mut().expect("config is an object");
    for (key, value) in extra {
        map.insert((*key).to_string(), value.clone());
    }
    config
}

/// Report envelope with fixed key order; the config block is everything
/// needed to replay the run (workers and output destination excluded, since
/// neither affects the bytes).
fn assemble(
    command: &str,
    config: Value,
    input: Option<&TensorInput>,
    result: Value,
    provenance: Value,
) -> Result<Value, String> {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    map.insert("config".into(), config);
    if let Some(input) = input {
        map.insert(
            "input".into(),
            serde_json::to_value(input).map_err(|e| e.to_string())?,
        );
    }
    map.insert("result".into(), result);
    map.insert("provenance".into(), provenance);
    Ok(Value::Object(map))
}

fn write_report(output: &Option<PathBuf>, report: &Value) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn estimate_for(
    parsed: &Parsed,
    samples: usize,
    seed: u64,
) -> Result<CurvatureRangeEstimate, String> {
    let estimate = match parsed {
        Parsed::Form(form) => estimate_range(
            &CanonicalTensor::new(form.clone()),
            form.dim(),
            samples,
            REFINEMENT_SWEEPS,
            seed,
        ),
        Parsed::Sum(sum) => {
            estimate_range(sum, sum.dim(), samples, REFINEMENT_SWEEPS, seed)
        }
    };
    estimate.map_err(|e| e.to_string())
}

/// Formula interval for either input kind: sharp for a single form, outer
/// for a sum.
fn formula_interval(parsed: &Parsed) -> Result<(f64, f64, bool), String> {
    match parsed {
        Parsed::Form(form) => {
            let bounds = canonical_bounds(form).map_err(|e| e.to_string())?;
            Ok((bounds.lower, bounds.upper, true))
        }
        Parsed::Sum(sum) => {
            let (m, upper) = sum_bounds(sum).map_err(|e| e.to_string())?;
            Ok((m, upper, false))
        }
    }
}

fn attainment_plane(frame: &Frame, pair: (usize, usize)) -> Result<TwoPlane, String> {
    let basis = Frame::new(vec![
        frame.vectors()[pair.0].clone(),
        frame.vectors()[pair.1].clone(),
    ])
    .map_err(|e| e.to_string())?;
    TwoPlane::from_frame(basis).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Bounds { input, out, run } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let form = require_form(parsed)?;
            let (bounds, estimate) = with_pool(out.workers, || {
                let bounds = canonical_bounds(&form).map_err(|e| e.to_string())?;
                let estimate =
                    estimate_for(&Parsed::Form(form.clone()), run.samples, run.seed)?;
                Ok::<_, String>((bounds, estimate))
            })??;
            let provenance = json!({
                "formula": {"m": bounds.lower, "M": bounds.upper},
                "oracle": {"min": estimate.min_value, "max": estimate.max_value},
            });
            let result = serde_json::to_value(&bounds).map_err(|e| e.to_string())?;
            let report =
                assemble("bounds", base_config(&run), Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::SumBounds { input, out, run } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let sum = require_sum(parsed)?;
            let (interval, estimate) = with_pool(out.workers, || {
                let interval = sum_bounds(&sum).map_err(|e| e.to_string())?;
                let estimate =
                    estimate_for(&Parsed::Sum(sum.clone()), run.samples, run.seed)?;
                Ok::<_, String>((interval, estimate))
            })??;
            let provenance = json!({
                "formula": {"m": interval.0, "M": interval.1},
                "oracle": {"min": estimate.min_value, "max": estimate.max_value},
            });
            let result = json!({"m": interval.0, "M": interval.1});
            let report =
                assemble("sum-bounds", base_config(&run), Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::Spectral { input, out, run, mode } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let form = require_form(parsed)?;
            let solve = |mode: ModeArg| -> Result<SpectralResult, String> {
                match mode {
                    ModeArg::Paper => {
                        paper_spectrum(&form, run.tol, run.seed).map_err(|e| e.to_string())
                    }
                    ModeArg::Sweep => sweep_spectrum(&form, run.tol).map_err(|e| e.to_string()),
                }
            };
            let chosen = solve(mode)?;
            let other_mode =
                if mode == ModeArg::Paper { ModeArg::Sweep } else { ModeArg::Paper };
            let other = solve(other_mode)?;
            let provenance = json!({
                "formula": {
                    "mode": mode.token(),
                    "sorted_eigenvalues": chosen.sorted_eigenvalues(),
                },
                "oracle": {
                    "mode": other_mode.token(),
                    "sorted_eigenvalues": other.sorted_eigenvalues(),
                },
            });
            let config = extend_config(&run, &[("mode", json!(mode.token()))]);
            let result = serde_json::to_value(&chosen).map_err(|e| e.to_string())?;
            let report = assemble("spectral", config, Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::Oracle { input, out, run } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let (interval, estimate) = with_pool(out.workers, || {
                let interval = formula_interval(&parsed)?;
                let estimate = estimate_for(&parsed, run.samples, run.seed)?;
                Ok::<_, String>((interval, estimate))
            })??;
            let provenance = json!({
                "formula": {"m": interval.0, "M": interval.1, "sharp": interval.2},
                "oracle": {"min": estimate.min_value, "max": estimate.max_value},
            });
            let result = serde_json::to_value(&estimate).map_err(|e| e.to_string())?;
            let report =
                assemble("oracle", base_config(&run), Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::Verify { input, out, run } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let (interval, estimate) = with_pool(out.workers, || {
                let interval = formula_interval(&parsed)?;
                let estimate = estimate_for(&parsed, run.samples, run.seed)?;
                Ok::<_, String>((interval, estimate))
            })??;
            let (lower, upper, sharp) = interval;
            let excess =
                (lower - estimate.min_value).max(estimate.max_value - upper).max(0.0);
            let violation = excess > run.tol;
            let estimate_value = serde_json::to_value(&estimate).map_err(|e| e.to_string())?;
            let result = json!({
                "bounds": {"m": lower, "M": upper, "sharp": sharp},
                "estimate": estimate_value,
                "violation": violation,
                "excess": excess,
            });
            let provenance = json!({
                "formula": {"m": lower, "M": upper},
                "oracle": {"min": estimate.min_value, "max": estimate.max_value},
            });
            let report =
                assemble("verify", base_config(&run), Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(if violation { VIOLATION_EXIT } else { 0 })
        }
        Command::PlaneFor { input, out, run, value } => {
            validate(&run, out.workers)?;
            let (doc, parsed) = parse_document(&read_raw_input(&input.input)?)?;
            let form = require_form(parsed)?;
            let (bounds, frame) =
                canonical_bounds_with_frame(&form).map_err(|e| e.to_string())?;
            let plane_min = attainment_plane(&frame, bounds.min_pair)?;
            let plane_max = attainment_plane(&frame, bounds.max_pair)?;
            let tensor = CanonicalTensor::new(form);
            let plane = plane_for_value(&tensor, &plane_min, &plane_max, value)
                .map_err(|e| e.to_string())?;
            let achieved = plane_curvature(&tensor, &plane);
            let plane_value = serde_json::to_value(&plane).map_err(|e| e.to_string())?;
            let result = json!({
                "value": value,
                "achieved": achieved,
                "plane": plane_value,
            });
            let provenance = json!({
                "formula": {"m": bounds.lower, "M": bounds.upper, "target": value},
                "oracle": {"achieved": achieved},
            });
            let config = extend_config(&run, &[("value", json!(value))]);
            let report = assemble("plane-for", config, Some(&doc), result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::Realize { out, run, interval, dim, step } => {
            validate(&run, out.workers)?;
            let (a, b) = interval;
            let realized = with_pool(out.workers, || {
                realize_interval_with(a, b, dim, step, run.samples, run.seed)
                    .map_err(|e| e.to_string())
            })??;
            let provenance = json!({
                "formula": {"target": [a, b]},
                "oracle": {
                    "measured": [realized.measured_range.0, realized.measured_range.1],
                },
            });
            let config = extend_config(
                &run,
                &[
                    ("interval", json!([a, b])),
                    ("dim", json!(dim)),
                    ("step", json!(step)),
                ],
            );
            let result = serde_json::to_value(&realized).map_err(|e| e.to_string())?;
            let report = assemble("realize", config, None, result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
        Command::Demo { out, run, name: DemoName::Remark24 } => {
            validate(&run, out.workers)?;
            let (fixture, outer_max) = remark_2_4_fixture();
            let (interval, estimate) = with_pool(out.workers, || {
                let interval = sum_bounds(&fixture).map_err(|e| e.to_string())?;
                let estimate =
                    estimate_for(&Parsed::Sum(fixture.clone()), run.samples, run.seed)?;
                Ok::<_, String>((interval, estimate))
            })??;
            let gap = outer_max - estimate.max_value;
            let estimate_value = serde_json::to_value(&estimate).map_err(|e| e.to_string())?;
            let result = json!({
                "outer": [interval.0, interval.1],
                "estimate": estimate_value,
                "gap": gap,
            });
            let provenance = json!({
                "formula": {"M": outer_max},
                "oracle": {"max": estimate.max_value, "gap": gap},
            });
            let config = extend_config(&run, &[("name", json!("remark-2-4"))]);
            let report = assemble("demo", config, None, result, provenance)?;
            write_report(&out.output, &report)?;
            Ok(0)
        }
    }
}
