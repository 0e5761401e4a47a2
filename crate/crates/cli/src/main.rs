//! Command-line front end: ingest operator/region/form JSON, run the
//! analyses and fuzz suites, emit verdict JSON and plottable CSV.
//!
//! Exit codes: 0 success, 2 analysis-negative (containment failure,
//! non-maximality, suite violations), 3 malformed input, 4 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use omax::hilbert::{c, defect_index};
use omax::maximality::{self, Certificate, MaximalityStatus};
use omax::numrange;
use omax::regions::Region;
use omax::semigroups;
use omax::transforms;
use omax::zoo;
use omax::{forms, io as omax_io, suites, Error, PartialOperator, ToleranceConfig};

const EXIT_NEGATIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "omax",
    version,
    about = "Numerical ranges, Omega-maximality, transforms, semigroups and forms on C^n"
)]
struct Cli {
    /// Override for the PSD / equality tolerances (default 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Angle count for boundary polygons.
    #[arg(long, global = true, default_value_t = 64)]
    angles: usize,
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Trial count for suites.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Directory for report.json / CSV artifacts (stdout always gets the
    /// report).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Containment certificate, boundary polygon, maximality verdict and
    /// defect indices for an operator against a region.
    Analyze(OperatorRegionArgs),
    /// Maximality verdict with certificate and predicate chain.
    Maximality(OperatorRegionArgs),
    /// Phillips transform report (contraction, isometry, Krein, class
    /// C(theta), region condition).
    Transform {
        #[command(flatten)]
        or: OperatorRegionArgs,
        /// Sector half-angle for the class C(theta) check.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Semigroup growth bounds, contraction equivalence and derivative
    /// identity for a total generator.
    Semigroup {
        #[arg(long)]
        operator: PathBuf,
    },
    /// Form diagnostics: parts, q-closedness constants, associated
    /// operator and (for strip regions) the strip theorem.
    Forms {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        region: Option<PathBuf>,
    },
    /// Run a fuzz suite: implications | transforms | semigroups | forms |
    /// all.
    Suite { name: String },
    /// Emit a zoo instance as operator JSON.
    Zoo {
        #[command(subcommand)]
        instance: ZooCmd,
    },
}

#[derive(Args)]
struct OperatorRegionArgs {
    #[arg(long)]
    operator: PathBuf,
    #[arg(long)]
    region: PathBuf,
}

#[derive(Subcommand)]
enum ZooCmd {
    /// The fixed C^2 positive example.
    C2,
    /// Diagonal multiplication operator; symbols as "re,im;re,im;...".
    Multiplication {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        region: PathBuf,
    },
    /// Discretized derivative i(f' + rf) with constant potential.
    Derivative {
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// dirichlet-both | dirichlet-left | free | theta
        #[arg(long, default_value = "dirichlet-both")]
        boundary: String,
        /// Phase angle for the theta coupling.
        #[arg(long, default_value_t = 0.0)]
        theta_arg: f64,
        /// Constant potential value.
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// Seeded random operator with numerical range inside a region.
    Random {
        #[arg(long)]
        region: PathBuf,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
}

fn tolerances(cli: &Cli) -> ToleranceConfig {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol {
        cfg.tol_psd = t;
        cfg.tol_eq = t;
    }
    cfg
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn emit(cli: &Cli, name: &str, report: &serde_json::Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(report).expect("serializable report");
    println!("{text}");
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)
            .map_err(|e| Error::Schema(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, text)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn write_artifact(cli: &Cli, name: &str, text: &str) -> Result<(), Error> {
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)
            .map_err(|e| Error::Schema(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, text)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn complex_json(z: omax::C64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn vector_json(v: &omax::CVec) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|&z| complex_json(z)).collect())
}

fn certificate_json(cert: &Certificate) -> serde_json::Value {
    match cert {
        Certificate::Resolvent { lambda } => {
            json!({ "type": "resolvent", "lambda": complex_json(*lambda) })
        }
        Certificate::Extension { v, w } => {
            json!({ "type": "extension", "v": vector_json(v), "w": vector_json(w) })
        }
        Certificate::Infeasibility { detail } => {
            json!({ "type": "infeasibility", "detail": detail })
        }
        Certificate::None => json!({ "type": "none" }),
    }
}

fn status_str(s: MaximalityStatus) -> &'static str {
    match s {
        MaximalityStatus::Maximal => "Maximal",
        MaximalityStatus::NotMaximal => "NotMaximal",
        MaximalityStatus::Unknown => "Unknown",
    }
}

fn defects_json(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> serde_json::Value {
    let comps: Vec<serde_json::Value> = region
        .complement_components()
        .iter()
        .map(|comp| {
            json!({
                "sample": complex_json(comp.sample),
                "defect_index": defect_index(t, comp.sample, cfg),
            })
        })
        .collect();
    serde_json::Value::Array(comps)
}

fn boundary_csv(polygon: &numrange::BoundaryPolygon) -> String {
    let mut out = String::from("angle,h,inner_re,inner_im\n");
    for ((phi, h), (re, im)) in polygon
        .angles
        .iter()
        .zip(&polygon.support)
        .zip(&polygon.inner_points)
    {
        out.push_str(&format!("{phi},{h},{re},{im}\n"));
    }
    out
}

fn cmd_analyze(cli: &Cli, args: &OperatorRegionArgs) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let t = omax_io::parse_operator(&read_file(&args.operator)?, &cfg)?;
    let region = omax_io::parse_region(&read_file(&args.region)?)?;
    let cert = numrange::contained_in(&t, &region, &cfg)?;
    let polygon = numrange::boundary_polygon(&t, cli.angles.max(3), &cfg)?;
    write_artifact(cli, "boundary.csv", &boundary_csv(&polygon))?;
    let (verdict_json, exit) = if cert.contained {
        let verdict = maximality::is_maximal(&t, &region, &cfg)?;
        (
            json!({
                "status": status_str(verdict.status),
                "certificate": certificate_json(&verdict.certificate),
                "notes": verdict.notes,
            }),
            if verdict.status == MaximalityStatus::Maximal {
                0
            } else {
                EXIT_NEGATIVE
            },
        )
    } else {
        (serde_json::Value::Null, EXIT_NEGATIVE)
    };
    let report = json!({
        "containment": cert,
        "boundary": {
            "angles": polygon.angle_count(),
            "hausdorff_gap": polygon.hausdorff_gap,
        },
        "maximality": verdict_json,
        "defects": if cert.contained { defects_json(&t, &region, &cfg) } else { serde_json::Value::Null },
    });
    emit(cli, "report.json", &report)?;
    Ok(exit)
}

fn cmd_maximality(cli: &Cli, args: &OperatorRegionArgs) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let t = omax_io::parse_operator(&read_file(&args.operator)?, &cfg)?;
    let region = omax_io::parse_region(&read_file(&args.region)?)?;
    let cert = numrange::contained_in(&t, &region, &cfg)?;
    if !cert.contained {
        emit(
            cli,
            "verdict.json",
            &json!({ "status": "NotContained", "containment": cert }),
        )?;
        return Ok(EXIT_NEGATIVE);
    }
    let verdict = maximality::is_maximal(&t, &region, &cfg)?;
    let chain = maximality::implication_suite(&t, &region, &cfg)?;
    let report = json!({
        "status": status_str(verdict.status),
        "certificate": certificate_json(&verdict.certificate),
        "predicates": { "P1": chain.p1, "P2": chain.p2, "P3": chain.p3, "P4": chain.p4 },
        "notes": verdict.notes,
    });
    emit(cli, "verdict.json", &report)?;
    Ok(if verdict.status == MaximalityStatus::Maximal {
        0
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_transform(cli: &Cli, args: &OperatorRegionArgs, theta: Option<f64>) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let t = omax_io::parse_operator(&read_file(&args.operator)?, &cfg)?;
    let region = omax_io::parse_region(&read_file(&args.region)?)?;
    let report = transforms::transform_report(&t, &region, theta, &cfg)?;
    emit(cli, "transform.json", &serde_json::to_value(&report).expect("serializable"))?;
    Ok(0)
}

fn growth_csv(report: &semigroups::GrowthReport) -> String {
    let mut out = String::from("t,norm_min_xi,norm_max_xi,lower_bound,upper_bound\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.t, row.norm_min_xi, row.norm_max_xi, row.lower_bound, row.upper_bound
        ));
    }
    out
}

fn cmd_semigroup(cli: &Cli, operator: &Path) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let a = omax_io::parse_operator(&read_file(operator)?, &cfg)?;
    let grid = semigroups::SemigroupSampler::default_grid();
    let growth = semigroups::growth_bound_check(&a, &grid, 5, cli.seed, 1e-6, &cfg)?;
    let contraction = semigroups::contraction_check(&a, &cfg)?;
    let xi = {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
        numrange::random_unit_vector(a.ambient_dim(), &mut rng)
    };
    let derivative = semigroups::derivative_identity_check(&a, &xi, &[0.3, 1.1, 2.4], 1e-3, &cfg)?;
    write_artifact(cli, "growth.csv", &growth_csv(&growth))?;
    let ok = growth.bounds_hold && contraction.equivalent && derivative.ok;
    let report = json!({
        "growth": {
            "omega1": growth.omega1,
            "omega2": growth.omega2,
            "bounds_hold": growth.bounds_hold,
            "fit_lower": growth.fit_lower,
            "fit_upper": growth.fit_upper,
            "overshoot_m": growth.overshoot_m,
        },
        "contraction": contraction,
        "derivative_identity": { "max_error": derivative.max_error, "bound": derivative.bound, "ok": derivative.ok },
    });
    emit(cli, "semigroup.json", &report)?;
    Ok(if ok { 0 } else { EXIT_NEGATIVE })
}

fn cmd_forms(cli: &Cli, form: &Path, region: Option<&PathBuf>) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let f = omax_io::parse_form(&read_file(form)?, &cfg)?;
    let q = f
        .domain_norm()
        .map(|_| forms::q_closedness_constants(&f, &cfg))
        .transpose()?;
    let mut report = json!({
        "dim": f.dim(),
        "total": f.domain().is_total(),
        "q_constants": q.map(|(a, b)| json!({ "alpha": a, "beta": b })),
        "null_sequence_criterion": forms::null_sequence_criterion(&f, &cfg)?,
    });
    let mut exit = 0;
    if let Some(path) = region {
        let region = omax_io::parse_region(&read_file(path)?)?;
        if region.is_strip() || region.is_line() {
            let strip = forms::strip_form_theorem_check(&f, &region, &cfg)?;
            if !strip.ok {
                exit = EXIT_NEGATIVE;
            }
            report["strip_theorem"] = serde_json::to_value(&strip).expect("serializable");
        } else if f.domain().is_total() {
            let t = forms::associated_operator(&f, &cfg)?;
            let cert = numrange::contained_in(&t, &region, &cfg)?;
            if !cert.contained {
                exit = EXIT_NEGATIVE;
            }
            report["containment"] = serde_json::to_value(&cert).expect("serializable");
        }
    }
    emit(cli, "forms.json", &report)?;
    Ok(exit)
}

fn cmd_suite(cli: &Cli, name: &str) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let summaries = suites::run_suite(name, cli.trials, cli.seed, &cfg)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let all_ok = summaries.iter().all(|s| s.ok());
    emit(
        cli,
        "suite.json",
        &serde_json::to_value(&summaries).expect("serializable"),
    )?;
    Ok(if all_ok { 0 } else { EXIT_NEGATIVE })
}

fn parse_alpha(text: &str) -> Result<Vec<omax::C64>, Error> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Schema(format!(
                    "alpha entry '{pair}' must be 're,im'"
                )));
            }
            let re: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("bad real part in '{pair}'")))?;
            let im: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("bad imaginary part in '{pair}'")))?;
            Ok(c(re, im))
        })
        .collect()
}

fn cmd_zoo(cli: &Cli, instance: &ZooCmd) -> Result<u8, Error> {
    let cfg = tolerances(cli);
    let t = match instance {
        ZooCmd::C2 => zoo::c2_positive_example(),
        ZooCmd::Multiplication { alpha, region } => {
            let alpha = parse_alpha(alpha)?;
            let region = omax_io::parse_region(&read_file(region)?)?;
            zoo::multiplication_operator(&alpha, &region, &cfg)?
        }
        ZooCmd::Derivative {
            n,
            boundary,
            theta_arg,
            r,
        } => {
            let boundary = match boundary.as_str() {
                "dirichlet-both" => zoo::BoundaryCondition::DirichletBoth,
                "dirichlet-left" => zoo::BoundaryCondition::DirichletLeft,
                "free" => zoo::BoundaryCondition::Free,
                "theta" => {
                    zoo::BoundaryCondition::Theta(omax::C64::from_polar(1.0, *theta_arg))
                }
                other => {
                    return Err(Error::Schema(format!(
                        "unknown boundary '{other}' (dirichlet-both | dirichlet-left | free | theta)"
                    )))
                }
            };
            let spec = zoo::GridSpec::new(zoo::Interval::Unit, *n, boundary)?;
            zoo::discretized_derivative(&spec, &vec![*r; *n], &cfg)?.operator
        }
        ZooCmd::Random { region, n, d } => {
            let region = omax_io::parse_region(&read_file(region)?)?;
            zoo::random_operator_with_range_in(&region, *n, *d, cli.seed, &cfg)?
        }
    };
    emit(
        cli,
        "operator.json",
        &serde_json::to_value(omax_io::operator_to_json(&t)).expect("serializable"),
    )?;
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(cli, args),
        Cmd::Maximality(args) => cmd_maximality(cli, args),
        Cmd::Transform { or, theta } => cmd_transform(cli, or, *theta),
        Cmd::Semigroup { operator } => cmd_semigroup(cli, operator),
        Cmd::Forms { form, region } => cmd_forms(cli, form, region.as_ref()),
        Cmd::Suite { name } => cmd_suite(cli, name),
        Cmd::Zoo { instance } => cmd_zoo(cli, instance),
    }
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Schema(_) | Error::DimensionMismatch { .. } => EXIT_INPUT,
        Error::InvalidArgument(msg) if msg.contains("unknown suite") => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success status itself.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
