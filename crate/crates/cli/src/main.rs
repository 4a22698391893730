//! Command-line front end for exact characteristic-polynomial statistics of
//! the Gaussian, Laguerre, and Jacobi unitary ensembles.
//!
//! Exit codes: 0 on success, 1 when a validation check fails, 2 on domain
//! errors (bad parameter values, unsupported operations, budget limits),
//! 64 on usage errors (unknown verbs or flags).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::process::ExitCode;

use rmt_charpoly::asymptotics::{self, Parity};
use rmt_charpoly::exact::{parse_rational, rat, to_f64, to_fraction_string};
use rmt_charpoly::expansions::{Direction, ExpansionTable};
use rmt_charpoly::montecarlo::{self, Functional, MCConfig};
use rmt_charpoly::secular::SecularQuery;
use rmt_charpoly::validate::{self, Budget};
use rmt_charpoly::{moments, Ensemble, EnsembleSpec, Error, ExactScalar, Partition};

type Result<T> = std::result::Result<T, Error>;

#[derive(Parser)]
#[command(
    name = "rmt-charpoly",
    version,
    about = "Exact moments, correlations, and secular-coefficient statistics of \
             characteristic polynomials of Hermitian random matrices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Print exact rationals as decimal floats instead of num/den strings.
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Gue,
    Lue,
    Jue,
}

#[derive(Copy, Clone, ValueEnum)]
enum RouteArg {
    /// Partition sum over the rectangular box (builds the full polynomial).
    PartitionSum,
    /// Confluent evaluation of the multi-point correlation at one point.
    BoxPhi,
    /// Derivatives of a determinant of orthogonal polynomials.
    DerivativeDet,
}

#[derive(Copy, Clone, ValueEnum)]
enum DirectionArg {
    /// Schur polynomials expanded over products of monic orthogonal polynomials.
    Psi,
    /// Products of monic orthogonal polynomials expanded over Schur polynomials.
    Upsilon,
}

#[derive(Copy, Clone, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    /// Formal average of the even and odd series.
    Avg,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Matrix ensemble family.
    #[arg(long, value_enum)]
    ensemble: Family,

    /// Matrix size N.
    #[arg(short = 'N', long = "size", value_name = "N")]
    n: u32,

    /// Laguerre exponent (rational such as 1/2, must be > -1); lue only.
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    gamma: Option<String>,

    /// First Jacobi exponent (rational, must be > -1); jue only.
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    gamma1: Option<String>,

    /// Second Jacobi exponent (rational, must be > -1); jue only.
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    gamma2: Option<String>,
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec> {
        let reject = |flag: &str, set: bool, family: &str| -> Result<()> {
            if set {
                Err(Error::Domain(format!(
                    "--{flag} does not apply to the {family} ensemble"
                )))
            } else {
                Ok(())
            }
        };
        match self.ensemble {
            Family::Gue => {
                reject("gamma", self.gamma.is_some(), "gue")?;
                reject("gamma1", self.gamma1.is_some(), "gue")?;
                reject("gamma2", self.gamma2.is_some(), "gue")?;
                EnsembleSpec::gue(self.n)
            }
            Family::Lue => {
                reject("gamma1", self.gamma1.is_some(), "lue")?;
                reject("gamma2", self.gamma2.is_some(), "lue")?;
                let gamma = parse_opt_rational(self.gamma.as_deref())?;
                EnsembleSpec::lue(self.n, gamma)
            }
            Family::Jue => {
                reject("gamma", self.gamma.is_some(), "jue")?;
                let gamma1 = parse_opt_rational(self.gamma1.as_deref())?;
                let gamma2 = parse_opt_rational(self.gamma2.as_deref())?;
                EnsembleSpec::jue(self.n, gamma1, gamma2)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expected p-th power of the characteristic polynomial, exactly.
    Moment {
        #[command(flatten)]
        ensemble: EnsembleArgs,

        /// Power of det(t - M).
        #[arg(short, long)]
        p: u32,

        /// Evaluation point (rational); omit to print the whole polynomial in t.
        #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
        t: Option<String>,

        /// Computation route.
        #[arg(long, value_enum, default_value_t = RouteArg::PartitionSum)]
        route: RouteArg,
    },

    /// Expected product of characteristic polynomials at several points.
    Correlation {
        #[command(flatten)]
        ensemble: EnsembleArgs,

        /// Comma-separated rational evaluation points, e.g. 0,1/2,-3/7.
        #[arg(long, value_name = "RAT,RAT,...", allow_hyphen_values = true)]
        t: String,
    },

    /// Expected product of secular (characteristic-polynomial) coefficients.
    Secular {
        #[command(flatten)]
        ensemble: EnsembleArgs,

        /// Comma-separated coefficient indices, e.g. 2,2 for E[sc_2^2].
        #[arg(long, value_name = "R,R,...")]
        lambda: String,
    },

    /// Change-of-basis coefficient table between Schur polynomials and
    /// products of monic orthogonal polynomials, over a rectangular box.
    Expansion {
        #[command(flatten)]
        ensemble: EnsembleArgs,

        /// Which expansion direction to tabulate.
        #[arg(long, value_enum)]
        direction: DirectionArg,

        /// Maximum part size of the partition box.
        #[arg(long)]
        box_n: u32,

        /// Maximum number of parts of the partition box.
        #[arg(long)]
        box_p: usize,

        /// Number of variables (defaults to the matrix size N).
        #[arg(long)]
        n_vars: Option<u32>,
    },

    /// Large-N series coefficients of the scaled moment of det(M)^(2p)
    /// along one parity of the matrix size.
    Asymptotics {
        /// Power parameter p.
        #[arg(short, long)]
        p: u32,

        /// Parity of the matrix size.
        #[arg(long, value_enum)]
        parity: ParityArg,

        /// Highest power of 1/N to include.
        #[arg(long)]
        n_order: u32,
    },

    /// Recovery of the semicircle-density Taylor coefficients from the
    /// parity-averaged, Gaussian-damped small-t expansion.
    Semicircle {
        /// Power parameter p.
        #[arg(short, long)]
        p: u32,

        /// Highest power of t to check (even).
        #[arg(long)]
        t_order: u32,

        /// Depth of the 1/N series (defaults to the smallest sufficient depth).
        #[arg(long)]
        n_order: Option<u32>,
    },

    /// Monte Carlo estimate of a moment, correlation, or secular product,
    /// with the exact value and z-score attached when available.
    Mc {
        #[command(flatten)]
        ensemble: EnsembleArgs,

        /// Number of matrix samples.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,

        /// Base seed; estimates are reproducible for a fixed seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Worker threads (defaults to the available parallelism); the
        /// estimate is bit-identical for any worker count.
        #[arg(long)]
        workers: Option<usize>,

        /// Power of det(t - M) for the moment functional.
        #[arg(short, long)]
        p: Option<u32>,

        /// Evaluation point(s), comma-separated rationals; two or more
        /// points select the correlation functional.
        #[arg(long, value_name = "RAT,RAT,...", allow_hyphen_values = true)]
        t: Option<String>,

        /// Secular-coefficient indices; selects the secular product functional.
        #[arg(long, value_name = "R,R,...")]
        lambda: Option<String>,
    },

    /// Run the named self-validation suite (or all suites).
    Validate {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,

        /// Check budget: small or full. Defaults to the RMT_CHARPOLY_BUDGET
        /// environment variable, then to small.
        #[arg(long)]
        budget: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = Output {
        format: cli.format,
        float: cli.float,
    };
    match dispatch(cli.command, &out) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command, out: &Output) -> Result<u8> {
    match command {
        Command::Moment {
            ensemble,
            p,
            t,
            route,
        } => run_moment(&ensemble.spec()?, p, t.as_deref(), route, out),
        Command::Correlation { ensemble, t } => run_correlation(&ensemble.spec()?, &t, out),
        Command::Secular { ensemble, lambda } => run_secular(&ensemble.spec()?, &lambda, out),
        Command::Expansion {
            ensemble,
            direction,
            box_n,
            box_p,
            n_vars,
        } => run_expansion(&ensemble.spec()?, direction, box_n, box_p, n_vars, out),
        Command::Asymptotics { p, parity, n_order } => run_asymptotics(p, parity, n_order, out),
        Command::Semicircle { p, t_order, n_order } => run_semicircle(p, t_order, n_order, out),
        Command::Mc {
            ensemble,
            samples,
            seed,
            workers,
            p,
            t,
            lambda,
        } => run_mc(&ensemble.spec()?, samples, seed, workers, p, t, lambda, out),
        Command::Validate { suite, budget } => run_validate(&suite, budget, out),
    }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

struct Output {
    format: Format,
    float: bool,
}

impl Output {
    fn scalar(&self, x: &ExactScalar) -> Value {
        if self.float {
            json!(to_f64(x))
        } else {
            json!(to_fraction_string(x))
        }
    }

    fn scalar_str(&self, x: &ExactScalar) -> String {
        if self.float {
            to_f64(x).to_string()
        } else {
            to_fraction_string(x)
        }
    }

    fn emit(&self, object: Value, header: &str, rows: Vec<Vec<String>>) {
        match self.format {
            Format::Json => out_line(&object.to_string()),
            Format::Csv => {
                out_line(header);
                for row in rows {
                    out_line(&csv_row(&row));
                }
            }
        }
    }
}

/// Writes one stdout line, exiting quietly when the reader has closed the
/// pipe (e.g. the output is piped into `head`).
fn out_line(line: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains(',') || f.contains('"') || f.contains('\n') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",")
}

fn family_name(spec: &EnsembleSpec) -> &'static str {
    match spec.ensemble {
        Ensemble::Gue => "gue",
        Ensemble::Lue { .. } => "lue",
        Ensemble::Jue { .. } => "jue",
    }
}

/// Compact single-field label for CSV rows.
fn ensemble_label(spec: &EnsembleSpec) -> String {
    match &spec.ensemble {
        Ensemble::Gue => "gue".into(),
        Ensemble::Lue { gamma } => format!("lue({})", to_fraction_string(gamma)),
        Ensemble::Jue { gamma1, gamma2 } => format!(
            "jue({};{})",
            to_fraction_string(gamma1),
            to_fraction_string(gamma2)
        ),
    }
}

fn ensemble_fields(spec: &EnsembleSpec, out: &Output, obj: &mut Map<String, Value>) {
    obj.insert("ensemble".into(), json!(family_name(spec)));
    obj.insert("N".into(), json!(spec.n));
    match &spec.ensemble {
        Ensemble::Gue => {}
        Ensemble::Lue { gamma } => {
            obj.insert("gamma".into(), out.scalar(gamma));
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            obj.insert("gamma1".into(), out.scalar(gamma1));
            obj.insert("gamma2".into(), out.scalar(gamma2));
        }
    }
}

fn parse_opt_rational(s: Option<&str>) -> Result<ExactScalar> {
    match s {
        Some(s) => parse_rational(s),
        None => Ok(rat(0)),
    }
}

fn parse_points(s: &str) -> Result<Vec<ExactScalar>> {
    s.split(',')
        .map(|part| parse_rational(part.trim()))
        .collect()
}

/// Parses comma-separated indices into a partition, sorting as needed
/// (the statistics are symmetric in the indices).
fn parse_partition(s: &str) -> Result<Partition> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Partition::new(vec![]);
    }
    let mut parts = trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("invalid partition part '{}'", part.trim())))
        })
        .collect::<Result<Vec<u32>>>()?;
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts)
}

fn partition_json(p: &Partition) -> Value {
    json!(p.parts())
}

fn partition_str(p: &Partition) -> String {
    if p.len() == 0 {
        "-".into()
    } else {
        p.parts()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

fn route_name(route: RouteArg) -> &'static str {
    match route {
        RouteArg::PartitionSum => "partition-sum",
        RouteArg::BoxPhi => "box-phi",
        RouteArg::DerivativeDet => "derivative-det",
    }
}

fn run_moment(
    spec: &EnsembleSpec,
    p: u32,
    t: Option<&str>,
    route: RouteArg,
    out: &Output,
) -> Result<u8> {
    let mut obj = Map::new();
    obj.insert("verb".into(), json!("moment"));
    ensemble_fields(spec, out, &mut obj);
    obj.insert("p".into(), json!(p));
    obj.insert("route".into(), json!(route_name(route)));

    match t {
        Some(tstr) => {
            let t = parse_rational(tstr)?;
            let value = match route {
                RouteArg::PartitionSum => moments::moment_poly(spec, p)?.evaluate(&t),
                RouteArg::BoxPhi => moments::moment_value_box_phi(spec, p, &t)?,
                RouteArg::DerivativeDet => moments::moment_derivative_det(spec, p, &t)?,
            };
            obj.insert("t".into(), out.scalar(&t));
            obj.insert("value".into(), out.scalar(&value));
            out.emit(
                Value::Object(obj),
                "ensemble,N,p,route,t,value",
                vec![vec![
                    ensemble_label(spec),
                    spec.n.to_string(),
                    p.to_string(),
                    route_name(route).to_string(),
                    out.scalar_str(&t),
                    out.scalar_str(&value),
                ]],
            );
        }
        None => {
            if !matches!(route, RouteArg::PartitionSum) {
                return Err(Error::Domain(format!(
                    "route {} evaluates at a single point; pass --t",
                    route_name(route)
                )));
            }
            let poly = moments::moment_poly(spec, p)?;
            let coeffs: Vec<Value> = poly.coeffs().iter().map(|c| out.scalar(c)).collect();
            obj.insert("coefficients".into(), json!(coeffs));
            let rows = poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    vec![
                        ensemble_label(spec),
                        spec.n.to_string(),
                        p.to_string(),
                        route_name(route).to_string(),
                        k.to_string(),
                        out.scalar_str(c),
                    ]
                })
                .collect();
            out.emit(Value::Object(obj), "ensemble,N,p,route,k,coefficient", rows);
        }
    }
    Ok(0)
}

fn run_correlation(spec: &EnsembleSpec, t: &str, out: &Output) -> Result<u8> {
    let points = parse_points(t)?;
    let value = moments::correlation(spec, &points)?;
    let mut obj = Map::new();
    obj.insert("verb".into(), json!("correlation"));
    ensemble_fields(spec, out, &mut obj);
    obj.insert(
        "points".into(),
        json!(points.iter().map(|x| out.scalar(x)).collect::<Vec<_>>()),
    );
    obj.insert("value".into(), out.scalar(&value));
    let points_label = points
        .iter()
        .map(to_fraction_string)
        .collect::<Vec<_>>()
        .join(" ");
    out.emit(
        Value::Object(obj),
        "ensemble,N,points,value",
        vec![vec![
            ensemble_label(spec),
            spec.n.to_string(),
            points_label,
            out.scalar_str(&value),
        ]],
    );
    Ok(0)
}

fn run_secular(spec: &EnsembleSpec, lambda: &str, out: &Output) -> Result<u8> {
    let indices = parse_partition(lambda)?;
    let query = SecularQuery {
        spec: spec.clone(),
        indices: indices.clone(),
    };
    let value = query.evaluate()?;
    let mut obj = Map::new();
    obj.insert("verb".into(), json!("secular"));
    ensemble_fields(spec, out, &mut obj);
    obj.insert("lambda".into(), partition_json(&indices));
    obj.insert("value".into(), out.scalar(&value));
    out.emit(
        Value::Object(obj),
        "ensemble,N,lambda,value",
        vec![vec![
            ensemble_label(spec),
            spec.n.to_string(),
            partition_str(&indices),
            out.scalar_str(&value),
        ]],
    );
    Ok(0)
}

fn run_expansion(
    spec: &EnsembleSpec,
    direction: DirectionArg,
    box_n: u32,
    box_p: usize,
    n_vars: Option<u32>,
    out: &Output,
) -> Result<u8> {
    let n_vars = n_vars.unwrap_or(spec.n);
    let dir = match direction {
        DirectionArg::Psi => Direction::Psi,
        DirectionArg::Upsilon => Direction::Upsilon,
    };
    let dir_name = match direction {
        DirectionArg::Psi => "psi",
        DirectionArg::Upsilon => "upsilon",
    };
    let table = ExpansionTable::new(spec.clone(), dir, box_n, box_p, n_vars);
    let rows = table.rows();
    let mut obj = Map::new();
    obj.insert("verb".into(), json!("expansion"));
    ensemble_fields(spec, out, &mut obj);
    obj.insert("direction".into(), json!(dir_name));
    obj.insert("box_n".into(), json!(box_n));
    obj.insert("box_p".into(), json!(box_p));
    obj.insert("n_vars".into(), json!(n_vars));
    obj.insert(
        "rows".into(),
        json!(rows
            .iter()
            .map(|(lambda, nu, v)| {
                json!({
                    "lambda": partition_json(lambda),
                    "nu": partition_json(nu),
                    "value": out.scalar(v),
                })
            })
            .collect::<Vec<_>>()),
    );
    let csv_rows = rows
        .iter()
        .map(|(lambda, nu, v)| {
            vec![
                ensemble_label(spec),
                dir_name.to_string(),
                partition_str(lambda),
                partition_str(nu),
                out.scalar_str(v),
            ]
        })
        .collect();
    out.emit(
        Value::Object(obj),
        "ensemble,direction,lambda,nu,value",
        csv_rows,
    );
    Ok(0)
}

fn run_asymptotics(p: u32, parity: ParityArg, n_order: u32, out: &Output) -> Result<u8> {
    let series = match parity {
        ParityArg::Even => asymptotics::cd_series(p, Parity::Even, n_order)?,
        ParityArg::Odd => asymptotics::cd_series(p, Parity::Odd, n_order)?,
        ParityArg::Avg => asymptotics::parity_average(
            &asymptotics::cd_series(p, Parity::Even, n_order)?,
            &asymptotics::cd_series(p, Parity::Odd, n_order)?,
        )?,
    };
    let parity_name = match parity {
        ParityArg::Even => "even",
        ParityArg::Odd => "odd",
        ParityArg::Avg => "avg",
    };
    let obj = json!({
        "verb": "asymptotics",
        "p": p,
        "parity": parity_name,
        "leading_factor": series.leading_factor,
        "coefficients": series
            .coefficients
            .iter()
            .map(|c| out.scalar(c))
            .collect::<Vec<_>>(),
    });
    let rows = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| {
            vec![
                p.to_string(),
                parity_name.to_string(),
                k.to_string(),
                out.scalar_str(c),
            ]
        })
        .collect();
    out.emit(obj, "p,parity,k,coefficient", rows);
    Ok(0)
}

fn run_semicircle(p: u32, t_order: u32, n_order: Option<u32>, out: &Output) -> Result<u8> {
    let report = match n_order {
        Some(depth) => asymptotics::semicircle_recovery(p, t_order, depth)?,
        // Probe with depth 0; the starvation error reports the depth the
        // t-window actually needs.
        None => match asymptotics::semicircle_recovery(p, t_order, 0) {
            Err(Error::OrderStarvation { required, .. }) => {
                asymptotics::semicircle_recovery(p, t_order, required)?
            }
            other => other?,
        },
    };
    let scalars = |v: &[ExactScalar]| -> Vec<Value> { v.iter().map(|c| out.scalar(c)).collect() };
    let mut obj = Map::new();
    obj.insert("verb".into(), json!("semicircle"));
    obj.insert("p".into(), json!(report.p));
    obj.insert("t_order".into(), json!(report.t_order));
    obj.insert("n_order".into(), json!(report.n_order));
    obj.insert("constant_terms".into(), json!(scalars(&report.constant_terms)));
    obj.insert("target".into(), json!(scalars(&report.target)));
    obj.insert(
        "growing_terms_cancel".into(),
        json!(report.growing_terms_cancel),
    );
    obj.insert(
        "matches_semicircle".into(),
        json!(report.matches_semicircle),
    );
    obj.insert(
        "first_mismatch_t_power".into(),
        json!(report.first_mismatch_t_power),
    );
    if let Some(b1) = &report.subleading_1 {
        obj.insert("subleading_1".into(), json!(scalars(b1)));
    }
    if let Some(b1d) = &report.subleading_1_display {
        obj.insert("subleading_1_display".into(), json!(scalars(b1d)));
    }
    if let Some(b2) = &report.subleading_2_constant {
        obj.insert("subleading_2_constant".into(), out.scalar(b2));
    }
    let rows = report
        .constant_terms
        .iter()
        .zip(&report.target)
        .enumerate()
        .map(|(k, (c, t))| {
            vec![
                (2 * k).to_string(),
                out.scalar_str(c),
                out.scalar_str(t),
                (c == t).to_string(),
            ]
        })
        .collect();
    out.emit(
        Value::Object(obj),
        "t_power,constant_term,target,matches",
        rows,
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_mc(
    spec: &EnsembleSpec,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
    p: Option<u32>,
    t: Option<String>,
    lambda: Option<String>,
    out: &Output,
) -> Result<u8> {
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });

    // Pick the functional, keeping exact rational inputs around so the
    // estimate can be compared against the exact routes.
    let (functional, exact) = if let Some(lambda) = &lambda {
        if p.is_some() || t.is_some() {
            return Err(Error::Domain(
                "--lambda selects the secular product; it cannot be combined with -p or --t".into(),
            ));
        }
        let indices = parse_partition(lambda)?;
        let query = SecularQuery {
            spec: spec.clone(),
            indices: indices.clone(),
        };
        (Functional::SecularProduct { indices }, query.evaluate().ok())
    } else {
        let points = match &t {
            Some(t) => parse_points(t)?,
            None => vec![rat(0)],
        };
        if points.len() > 1 {
            if p.is_some() {
                return Err(Error::Domain(
                    "several --t points select the correlation; -p does not apply".into(),
                ));
            }
            let exact = moments::correlation(spec, &points).ok();
            let floats = points.iter().map(to_f64).collect();
            (Functional::Correlation { points: floats }, exact)
        } else {
            let p = p.unwrap_or(1);
            let point = points[0].clone();
            // E[det(t-M)^p] equals the correlation with the point repeated
            // p times; the confluent route accepts repeated points.
            let exact = moments::correlation(spec, &vec![point.clone(); p as usize]).ok();
            (
                Functional::Moment {
                    p,
                    t: to_f64(&point),
                },
                exact,
            )
        }
    };

    let config = MCConfig {
        spec: spec.clone(),
        samples,
        seed,
        workers,
    };
    let estimate = montecarlo::estimate(&config, &functional)?;

    let mut obj = Map::new();
    obj.insert("verb".into(), json!("mc"));
    obj.insert("functional".into(), json!(estimate.functional));
    ensemble_fields(spec, out, &mut obj);
    obj.insert("samples".into(), json!(estimate.samples));
    obj.insert("seed".into(), json!(seed));
    obj.insert("workers".into(), json!(workers));
    obj.insert("mean".into(), json!(estimate.mean));
    obj.insert("stderr".into(), json!(estimate.stderr));
    obj.insert("overflow".into(), json!(estimate.overflow));
    let mut exact_str = String::new();
    let mut z_str = String::new();
    if let Some(exact) = &exact {
        obj.insert("exact".into(), out.scalar(exact));
        exact_str = out.scalar_str(exact);
        if estimate.stderr > 0.0 {
            let z = (estimate.mean - to_f64(exact)) / estimate.stderr;
            obj.insert("z_score".into(), json!(z));
            z_str = z.to_string();
        }
    }
    out.emit(
        Value::Object(obj),
        "functional,ensemble,N,samples,seed,workers,mean,stderr,overflow,exact,z_score",
        vec![vec![
            estimate.functional.clone(),
            ensemble_label(spec),
            spec.n.to_string(),
            estimate.samples.to_string(),
            seed.to_string(),
            workers.to_string(),
            estimate.mean.to_string(),
            estimate.stderr.to_string(),
            estimate.overflow.to_string(),
            exact_str,
            z_str,
        ]],
    );
    Ok(0)
}

fn run_validate(suite: &str, budget: Option<String>, out: &Output) -> Result<u8> {
    let budget_name = budget
        .or_else(|| std::env::var("RMT_CHARPOLY_BUDGET").ok())
        .unwrap_or_else(|| "small".into());
    let budget = Budget::parse(&budget_name)?;
    let results = if suite == "all" {
        validate::run_all(budget)
    } else {
        validate::run_suite(suite, budget)?
    };
    let (passed, failed) = validate::tally(&results);
    let obj = json!({
        "verb": "validate",
        "suite": suite,
        "budget": budget.name(),
        "checks": results
            .iter()
            .map(|r| {
                json!({
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })
            })
            .collect::<Vec<_>>(),
        "passed": passed,
        "failed": failed,
    });
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.suite.to_string(),
                r.name.clone(),
                r.passed.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    out.emit(obj, "suite,name,passed,detail", rows);
    Ok(if failed > 0 { 1 } else { 0 })
}
