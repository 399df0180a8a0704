//! Command-line plumbing for the `symhodge` binary: flag parsing, the
//! optional TOML config layer, and the `verify`, `extend`, and `solve`
//! subcommands.
//!
//! Reports go to stdout or `--out`; timing goes to stderr so that report
//! bytes stay identical across runs with the same seed and config.  Exit
//! codes: 0 when every check passed or produced its expected witness, 1
//! when a check failed or a solve was refused, 2 for usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cartan::{eqform_from_json, eqform_to_json, Cartan, DEFAULT_DEGREE_BOUND};
use crate::models::{
    flat_torus, form_from_json, form_to_json, kodaira_thurston, sphere_s1, ModelComplex,
};
use crate::report::{run_extension, run_verification, ModelChoice};
use crate::solvers::{ddelta_solve, harmonic_representative, ExactnessRoute};

#[derive(Parser)]
#[command(
    name = "symhodge",
    about = "Exact-arithmetic verification of symplectic Hodge theory on model complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full check suite for one model or all of them.
    Verify(VerifyArgs),
    /// Extend a base cohomology class of the sphere to an equivariantly
    /// closed form.
    Extend(ExtendArgs),
    /// Run a single solver on a form supplied as JSON.
    Solve(SolveArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// flat-torus-2, flat-torus-4, sphere-s1, kodaira-thurston, or all
    #[arg(long)]
    model: Option<String>,
    /// Seed for the randomized portions of the suite.
    #[arg(long)]
    seed: Option<u64>,
    /// Total-degree cap for the equivariant computations.
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or markdown
    #[arg(long)]
    format: Option<String>,
    /// TOML file mirroring these flags; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    /// Only sphere-s1 carries the circle action.
    #[arg(long, default_value = "sphere-s1")]
    model: String,
    /// 1, omega, or omega^2
    #[arg(long)]
    class: String,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// flat-torus-2, flat-torus-4, sphere-s1, or kodaira-thurston
    #[arg(long)]
    model: String,
    /// ddelta, dgdelta, or harmonic
    #[arg(long)]
    op: String,
    /// Path to a form JSON file, or the JSON itself.
    #[arg(long)]
    input: String,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// The subset of the verify flags that may come from a config file.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    seed: Option<u64>,
    degree_bound: Option<usize>,
    out: Option<PathBuf>,
    format: Option<String>,
}

pub fn run() -> i32 {
    dispatch(Cli::parse())
}

fn dispatch(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Extend(args) => cmd_extend(args),
        Command::Solve(args) => cmd_solve(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Usage errors bubble up as Err and exit 2; well-formed runs return their
/// exit code.
fn cmd_verify(args: VerifyArgs) -> Result<i32, String> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };
    let model_name = args
        .model
        .or(file.model)
        .ok_or_else(|| "no model selected; pass --model or set model in the config".to_string())?;
    let models: Vec<ModelChoice> = if model_name == "all" {
        ModelChoice::all().to_vec()
    } else {
        vec![ModelChoice::from_name(&model_name)
            .ok_or_else(|| format!("unknown model {model_name:?}"))?]
    };
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let degree_bound = args.degree_bound.or(file.degree_bound).unwrap_or(DEFAULT_DEGREE_BOUND);
    let format = args.format.or(file.format).unwrap_or_else(|| "json".to_string());
    if format != "json" && format != "markdown" {
        return Err(format!("unknown format {format:?}; use json or markdown"));
    }
    let out = args.out.or(file.out);

    let start = Instant::now();
    let report = run_verification(&models, seed, degree_bound);
    eprintln!("verify finished in {:.3}s", start.elapsed().as_secs_f64());

    let rendered =
        if format == "markdown" { report.to_markdown() } else { report.to_json_string() };
    emit(&out, &rendered)?;
    Ok(if report.ok() { 0 } else { 1 })
}

fn cmd_extend(args: ExtendArgs) -> Result<i32, String> {
    if args.model != "sphere-s1" {
        return Err(format!("extension is defined on sphere-s1, not {:?}", args.model));
    }
    if !matches!(args.class.as_str(), "1" | "omega" | "omega^2") {
        return Err(format!("unknown class {:?}; use 1, omega, or omega^2", args.class));
    }
    let start = Instant::now();
    match run_extension(&args.class) {
        Ok((description, mut value)) => {
            eprintln!("extend finished in {:.3}s", start.elapsed().as_secs_f64());
            if let Value::Object(map) = &mut value {
                map.insert("schema".into(), json!(1));
            }
            emit(&args.out, &pretty(&value))?;
            eprintln!("{description} written");
            Ok(0)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            Ok(1)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32, String> {
    let choice = ModelChoice::from_name(&args.model)
        .ok_or_else(|| format!("unknown model {:?}", args.model))?;
    if !matches!(args.op.as_str(), "ddelta" | "dgdelta" | "harmonic") {
        return Err(format!("unknown op {:?}; use ddelta, dgdelta, or harmonic", args.op));
    }
    let text = if Path::new(&args.input).exists() {
        fs::read_to_string(&args.input)
            .map_err(|e| format!("cannot read input {}: {e}", args.input))?
    } else {
        args.input.clone()
    };
    let input: Value =
        serde_json::from_str(&text).map_err(|e| format!("input is not valid JSON: {e}"))?;
    let result = match choice {
        ModelChoice::FlatTorus2 => solve_on(&flat_torus(1), &args.op, &input),
        ModelChoice::FlatTorus4 => solve_on(&flat_torus(2), &args.op, &input),
        ModelChoice::SphereS1 => solve_on(&sphere_s1(), &args.op, &input),
        ModelChoice::KodairaThurston => solve_on(&kodaira_thurston(), &args.op, &input),
    };
    match result {
        Ok(value) => {
            let wrapped = json!({
                "schema": 1,
                "model": args.model,
                "op": args.op,
                "status": "solved",
                "result": value,
            });
            emit(&args.out, &pretty(&wrapped))?;
            Ok(0)
        }
        Err(SolveRefusal::Usage(msg)) => Err(msg),
        Err(SolveRefusal::Refused(msg)) => {
            let wrapped = json!({
                "schema": 1,
                "model": args.model,
                "op": args.op,
                "status": "refused",
                "reason": msg,
            });
            emit(&args.out, &pretty(&wrapped))?;
            Ok(1)
        }
    }
}

/// A solve can be refused on mathematical grounds (exit 1) or rejected as
/// malformed input (exit 2).
enum SolveRefusal {
    Usage(String),
    Refused(String),
}

fn route_name(route: ExactnessRoute) -> &'static str {
    match route {
        ExactnessRoute::Exact => "exact",
        ExactnessRoute::Coexact => "coexact",
    }
}

fn solve_on<M: ModelComplex>(model: &M, op: &str, input: &Value) -> Result<Value, SolveRefusal> {
    match op {
        "ddelta" => {
            let alpha = form_from_json(model, input)
                .map_err(|e| SolveRefusal::Usage(format!("bad form: {e}")))?;
            let cert = ddelta_solve(model, &alpha)
                .map_err(|e| SolveRefusal::Refused(e.to_string()))?;
            let residual = alpha.add(&model.d(&model.delta(&cert.beta)).neg());
            Ok(json!({
                "beta": form_to_json(&cert.beta),
                "route": route_name(cert.route),
                "residual": form_to_json(&residual),
            }))
        }
        "harmonic" => {
            let gamma = form_from_json(model, input)
                .map_err(|e| SolveRefusal::Usage(format!("bad form: {e}")))?;
            let witness = harmonic_representative(model, &gamma)
                .map_err(|e| SolveRefusal::Refused(e.to_string()))?;
            let class_defect =
                gamma.add(&witness.harmonic.neg()).add(&model.d(&witness.correction).neg());
            Ok(json!({
                "harmonic": form_to_json(&witness.harmonic),
                "correction": form_to_json(&witness.correction),
                "residual": {
                    "d_of_harmonic": form_to_json(&model.d(&witness.harmonic)),
                    "delta_of_harmonic": form_to_json(&model.delta(&witness.harmonic)),
                    "class_defect": form_to_json(&class_defect),
                },
            }))
        }
        "dgdelta" => {
            let cartan =
                Cartan::new(model).map_err(|e| SolveRefusal::Refused(e.to_string()))?;
            let alpha = eqform_from_json(model, input)
                .map_err(|e| SolveRefusal::Usage(format!("bad equivariant form: {e}")))?;
            let cert = cartan
                .dg_delta_solve(&alpha)
                .map_err(|e| SolveRefusal::Refused(e.to_string()))?;
            let residual =
                alpha.add(&cartan.d_g(&cartan.delta_equiv(&cert.beta)).neg());
            let routes: Vec<Value> = cert
                .routes
                .iter()
                .map(|(deg, r)| json!({ "degree": deg, "route": route_name(*r) }))
                .collect();
            Ok(json!({
                "beta": eqform_to_json(&cert.beta, cartan.degree_bound),
                "routes": routes,
                "residual": eqform_to_json(&residual, cartan.degree_bound),
            }))
        }
        other => Err(SolveRefusal::Usage(format!("unknown op {other:?}"))),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::Form;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn config_file_fills_in_missing_flags() {
        let dir = std::env::temp_dir().join("symhodge-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("verify.toml");
        fs::write(&cfg, "model = \"flat-torus-2\"\nseed = 3\nformat = \"markdown\"\n").unwrap();
        let out = dir.join("report.md");
        let args = VerifyArgs {
            model: None,
            seed: None,
            degree_bound: None,
            out: Some(out.clone()),
            format: None,
            config: Some(cfg),
        };
        assert_eq!(cmd_verify(args).unwrap(), 0);
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.contains("- seed: 3"));
        assert!(text.contains("flat-torus-2/cohomology-dims"));
    }

    #[test]
    fn flags_override_the_config_file() {
        let dir = std::env::temp_dir().join("symhodge-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("verify-override.toml");
        fs::write(&cfg, "model = \"flat-torus-2\"\nseed = 3\n").unwrap();
        let out = dir.join("report-override.json");
        let args = VerifyArgs {
            model: None,
            seed: Some(11),
            degree_bound: None,
            out: Some(out.clone()),
            format: None,
            config: Some(cfg),
        };
        assert_eq!(cmd_verify(args).unwrap(), 0);
        let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(report["seed"], 11);
    }

    #[test]
    fn usage_errors_are_reported_not_panicked() {
        let args = VerifyArgs {
            model: Some("klein-bottle".into()),
            seed: None,
            degree_bound: None,
            out: None,
            format: None,
            config: None,
        };
        assert!(cmd_verify(args).is_err());
        let args = ExtendArgs {
            model: "sphere-s1".into(),
            class: "omega^3".into(),
            out: None,
        };
        assert!(cmd_extend(args).is_err());
    }

    #[test]
    fn solve_round_trips_a_seeded_instance() {
        use crate::models::form_to_json;
        use rand::SeedableRng;
        let model = flat_torus(1);
        let alpha = (0..20u64)
            .find_map(|s| {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
                let a = model.d(&model.delta(&model.random_form(1, &mut rng)));
                (!a.is_zero()).then_some(a)
            })
            .expect("some seed yields a nonzero instance");
        let value = solve_on(&model, "ddelta", &form_to_json(&alpha))
            .unwrap_or_else(|_| panic!("seeded instance must solve"));
        let beta = form_from_json(&model, &value["beta"]).unwrap();
        assert_eq!(model.d(&model.delta(&beta)), alpha);
        let residual = form_from_json(&model, &value["residual"]).unwrap();
        assert!(residual.is_zero());
    }

    #[test]
    fn solve_refuses_a_non_closed_input() {
        let model = flat_torus(1);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let f = model.random_function(&mut rng);
        let alpha = f.wedge(&Form::from_part(1, 0b01, crate::models::TrigPoly::constant(
            crate::linalg::rat_int(1),
        )));
        if model.d(&alpha).is_zero() {
            return; // this seed gives a function of the first coordinate only
        }
        match solve_on(&model, "ddelta", &crate::models::form_to_json(&alpha)) {
            Err(SolveRefusal::Refused(_)) => {}
            _ => panic!("non-closed input must be refused"),
        }
    }
}
