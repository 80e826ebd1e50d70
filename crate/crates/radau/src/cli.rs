//! Command-line front end: build rules, verify their exactness, and run
//! the analysis experiments, emitting JSON or CSV.
//!
//! Exit codes: 0 success/pass, 1 verification or experiment failure,
//! 2 usage or input error, 3 numerical failure.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    self, chi_bound_chain, continuity_experiment, estimate_node_constant,
    interval_scaling_check, Interval, Verdict,
};
use crate::orthopoly::MAX_ORDER;
use crate::radau::{build_radau, rule_to_csv, verify_exactness, RadauRule};
use crate::weights::WeightSpec;
use crate::Error;

#[derive(Parser, Debug)]
#[command(
    name = "radau",
    version,
    about = "Right-sided weighted Gauss-Radau quadrature rules on (-1, 1)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a Radau rule for a weight and print or write it.
    Build(BuildArgs),
    /// Check the exactness of a rule (from a file or built on the fly).
    Verify(VerifyArgs),
    /// Run one of the analysis experiments.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
}

fn parse_order(s: &str) -> Result<usize, String> {
    let q: usize = s
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))?;
    if q < 1 || q > MAX_ORDER {
        return Err(format!("q must satisfy q >= 1 (and q <= {MAX_ORDER}), got {q}"));
    }
    Ok(q)
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// Weight-spec JSON file, e.g. {"family":"exp","rho":1.0,"tau":2.0}.
    #[arg(long, conflicts_with = "weight")]
    pub spec: Option<PathBuf>,
    /// Inline weight family: constant | exp | jacobi.
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
}

impl WeightArgs {
    fn resolve(&self) -> Result<WeightSpec, CliFailure> {
        let spec = if let Some(path) = &self.spec {
            let text = fs::read_to_string(path)
                .map_err(|e| CliFailure::usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliFailure::usage(format!("invalid weight spec: {e}")))?
        } else {
            match self.weight.as_deref() {
                None | Some("constant") => WeightSpec::Constant,
                Some("exp") => WeightSpec::Exp {
                    rho: self.rho,
                    tau: self.tau,
                },
                Some("jacobi") => WeightSpec::Jacobi {
                    alpha: self.alpha,
                    beta: self.beta,
                },
                Some(other) => {
                    return Err(CliFailure::usage(format!(
                        "unknown weight family `{other}` (use constant, exp, jacobi, or --spec for tables)"
                    )))
                }
            }
        };
        spec.validate()
            .map_err(|e| CliFailure::usage(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    fn write(&self, text: &str) -> Result<(), CliFailure> {
        match &self.output {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliFailure::usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, value_parser = parse_order)]
    pub q: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Rule JSON file produced by `radau build`; built on the fly from the
    /// weight arguments when omitted.
    #[arg(long)]
    pub rule: Option<PathBuf>,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    pub q: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub build_tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Node/weight deviation under shrinking L1 perturbations of a target.
    Continuity {
        /// Target weight family (constant | exp | jacobi, defaults applied).
        #[arg(long, default_value = "constant")]
        target: String,
        /// Perturbation family: exp (tau halves each step) or table.
        #[arg(long, default_value = "exp")]
        family: String,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, value_parser = parse_order)]
        q: usize,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The chi^2 bound chain over a tau grid.
    ChiBound {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 2.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[arg(long, value_parser = parse_order)]
        q: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Change-of-variables identity on a single interval.
    Interval {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, value_parser = parse_order)]
        q: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Uniform lower bound on the lowest node over tau in [0, T].
    ConstantC {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long = "T", default_value_t = 4.0)]
        horizon: f64,
        #[arg(long, value_parser = parse_order)]
        q: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

struct CliFailure {
    code: i32,
    message: String,
}

impl CliFailure {
    fn usage(message: String) -> Self {
        Self { code: 2, message }
    }

    fn from_error(e: Error) -> Self {
        let code = match e {
            Error::OutsideDomain { .. }
            | Error::InvalidWeight(_)
            | Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. } => 2,
            Error::Accuracy { .. }
            | Error::LostPositivity { .. }
            | Error::AlphaOutOfRange { .. }
            | Error::NoConvergence { .. }
            | Error::Inconsistent(_) => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        CliFailure::from_error(e)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Run a parsed invocation; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliFailure> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Experiment { experiment } => cmd_experiment(experiment),
    }
}

fn cmd_build(args: BuildArgs) -> Result<i32, CliFailure> {
    let spec = args.weight.resolve()?;
    let rule = build_radau(&spec, args.q, args.tol)?;
    let text = match args.out.format {
        Format::Json => to_json(&rule),
        Format::Csv => rule_to_csv(&rule),
    };
    args.out.write(&text)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliFailure> {
    let rule: RadauRule = match &args.rule {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliFailure::usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliFailure::usage(format!("invalid rule file: {e}")))?
        }
        None => {
            let spec = args.weight.resolve()?;
            build_radau(&spec, args.q, args.build_tol)?
        }
    };
    let report = verify_exactness(&rule, args.tol).map_err(|e| match e {
        // a structurally broken rule file is an input problem, not a numeric one
        Error::InvalidArgument(msg) | Error::InvalidWeight(msg) => CliFailure::usage(msg),
        other => CliFailure::from_error(other),
    })?;
    println!(
        "max defect {:.3e} over degrees 0..{}: {}",
        report.max_defect,
        2 * rule.q,
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_experiment(cmd: ExperimentCommand) -> Result<i32, CliFailure> {
    match cmd {
        ExperimentCommand::Continuity {
            target,
            family,
            steps,
            q,
            rho,
            tol,
            threshold,
            out,
        } => {
            if steps == 0 {
                return Err(CliFailure::usage("steps must be >= 1".into()));
            }
            let target_spec = match target.as_str() {
                "constant" => WeightSpec::Constant,
                "exp" => WeightSpec::Exp { rho, tau: 1.0 },
                other => {
                    return Err(CliFailure::usage(format!(
                        "unknown target family `{other}`"
                    )))
                }
            };
            let perturbations: Vec<WeightSpec> = (0..steps)
                .map(|n| {
                    let eps = 0.5f64.powi(n as i32);
                    match family.as_str() {
                        "exp" => Ok(match &target_spec {
                            WeightSpec::Exp { rho, tau } => WeightSpec::Exp {
                                rho: *rho,
                                tau: tau + eps,
                            },
                            _ => WeightSpec::Exp { rho, tau: eps },
                        }),
                        "table" => Ok(WeightSpec::Table {
                            xs: vec![-1.0, 0.0, 1.0],
                            vals: vec![1.0, 1.0 + eps, 1.0],
                        }),
                        other => Err(CliFailure::usage(format!(
                            "unknown perturbation family `{other}`"
                        ))),
                    }
                })
                .collect::<Result<_, _>>()?;
            let report = continuity_experiment(&target_spec, &perturbations, q, tol, threshold)?;
            out.write(&to_json(&report))?;
            Ok(verdict_code(report.verdict))
        }
        ExperimentCommand::ChiBound {
            rho,
            tau_min,
            tau_max,
            grid,
            q,
            tol,
            out,
        } => {
            if grid == 0 {
                return Err(CliFailure::usage("grid must be >= 1".into()));
            }
            let taus: Vec<f64> = if grid == 1 {
                vec![tau_min]
            } else {
                (0..grid)
                    .map(|i| tau_min + (tau_max - tau_min) * i as f64 / (grid - 1) as f64)
                    .collect()
            };
            let report = chi_bound_chain(rho, &taus, q, tol)?;
            let text = match out.format {
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            };
            out.write(&text)?;
            Ok(verdict_code(report.verdict))
        }
        ExperimentCommand::Interval {
            a,
            b,
            rho,
            q,
            tol,
            out,
        } => {
            let interval =
                Interval::new(a, b).map_err(|e| CliFailure::usage(e.to_string()))?;
            let check = interval_scaling_check(&interval, rho, q, tol)?;
            out.write(&to_json(&check))?;
            Ok(verdict_code(check.verdict))
        }
        ExperimentCommand::ConstantC {
            rho,
            horizon,
            q,
            grid,
            tol,
            out,
        } => {
            let estimate = estimate_node_constant(rho, horizon, q, grid, tol)
                .map_err(CliFailure::from_error)?;
            out.write(&to_json(&estimate))?;
            Ok(verdict_code(estimate.verdict))
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        analysis::Verdict::Pass => 0,
        analysis::Verdict::Fail => 1,
    }
}
