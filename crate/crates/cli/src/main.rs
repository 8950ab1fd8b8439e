//! `berrut-lab`: evaluate the interpolant, run convergence studies, print
//! limit sets and run the self-checks.
//!
//! Exit codes: 0 on success, 1 when a verification fails or output cannot be
//! written, 2 on a usage error.

mod output;
mod range;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use berrut_core::barycentric::{evaluate, probe_points, SampledFunction, WeightScheme};
use berrut_core::error_analysis::{bias_norms, uniform_study};
use berrut_core::limits::{denominator_limits, error_limit_set, LimitSetKind, Point};
use berrut_core::model::library;
use berrut_core::verify::{self, Section, VerifyConfig};
use berrut_core::{ExtendedReal, FunctionModel, Parity, RationalPoint};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{float, Format, Table};

#[derive(Parser, Debug)]
#[command(
    name = "berrut-lab",
    version,
    about = "Berrut rational interpolation at equispaced nodes"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format; csv for data commands and text for verify by default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate B_n f at a list of points.
    Interpolate {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Scheme::Berrut)]
        scheme: Scheme,
        /// Comma-separated points in [-1, 1].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
    },
    /// Scaled sup errors and the bounded-variation bound over a range of n.
    Convergence {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
        /// `a:b`, `a:b:s`, `a:b:*k` or a comma-separated list.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 2001)]
        probes: usize,
    },
    /// Limit sets of D_n/n and, with --fn, of n (B_n f - f) at a point.
    Limits {
        /// x + 1 as num/den.
        #[arg(long, conflicts_with = "irrational", required_unless_present = "irrational")]
        rational: Option<String>,
        /// A float standing for an irrational x in (-1, 1).
        #[arg(long, allow_hyphen_values = true)]
        irrational: Option<f64>,
        #[arg(long = "fn")]
        function: Option<String>,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
    },
    /// Run the self-check sections.
    Verify {
        /// Comma-separated section ids; all sections when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Sample count for the randomised sections.
        #[arg(long)]
        samples: Option<usize>,
        /// Sawtooth sizes for the main-term section.
        #[arg(long = "m", value_delimiter = ',')]
        ms: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Berrut,
    Halved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
    Both,
}

impl ParityArg {
    fn parities(self) -> &'static [Parity] {
        match self {
            ParityArg::Odd => &[Parity::Odd],
            ParityArg::Even => &[Parity::Even],
            ParityArg::Both => &[Parity::Odd, Parity::Even],
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<berrut_core::Error> for Failure {
    fn from(e: berrut_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BERRUT_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("BERRUT_LAB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let data_format = cli.out.format.unwrap_or(Format::Csv);
    // Everything is computed before the output file is opened, so a failed
    // run never leaves a truncated file behind.
    let table = match cli.command {
        Command::Interpolate { function, n, scheme, x } => interpolate(&function, n, scheme, &x)?,
        Command::Convergence {
            function,
            parity,
            n,
            probes,
        } => convergence(&function, parity, &n, probes)?,
        Command::Limits {
            rational,
            irrational,
            function,
            parity,
        } => limits(rational.as_deref(), irrational, function.as_deref(), parity)?,
        Command::Verify {
            only,
            samples,
            ms,
            seed,
        } => {
            let format = cli.out.format.unwrap_or(Format::Text);
            return run_verify(&only, samples, ms, seed, format, cli.out.output);
        }
    };
    let mut out = open(cli.out.output)?;
    table.write(data_format, &mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn open(path: Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(&p).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn model(name: &str) -> Result<FunctionModel, Failure> {
    library::by_name(name).ok_or_else(|| {
        usage(format!(
            "unknown function '{name}'; known: {}",
            library::NAMES.join(", ")
        ))
    })
}

fn interpolate(function: &str, n: usize, scheme: Scheme, xs: &[f64]) -> Result<Table, Failure> {
    let f = model(function)?;
    let samples = SampledFunction::from_model(&f, n)?;
    let weights = match scheme {
        Scheme::Berrut => WeightScheme::Berrut,
        Scheme::Halved => WeightScheme::EndpointHalved,
    };
    if let Some(x) = xs.iter().find(|x| !(-1.0..=1.0).contains(*x)) {
        return Err(usage(format!("--x {x} is outside [-1, 1]")));
    }
    let mut t = Table::new(&["n", "x", "value", "error"]);
    for &x in xs {
        let v = evaluate(&samples, &weights, x)?;
        t.push(vec![n.to_string(), float(x), float(v), float(v - f.eval(x))]);
    }
    Ok(t)
}

fn convergence(function: &str, parity: ParityArg, n_spec: &str, probes: usize) -> Result<Table, Failure> {
    let f = model(function)?;
    if probes < 2 {
        return Err(usage("--probes must be at least 2"));
    }
    let ns = range::parse_n_list(n_spec).map_err(usage)?;
    let mut rows = Vec::new();
    for &p in parity.parities() {
        let list: Vec<usize> = ns.iter().copied().filter(|&n| p.matches(n)).collect();
        if !list.is_empty() {
            rows.extend(uniform_study(&f, &list, p, probes)?);
        }
    }
    if rows.is_empty() {
        return Err(usage(format!("no n of the requested parity in '{n_spec}'")));
    }
    rows.sort_by_key(|r| r.n);

    let tv = f.tv().ok();
    let mut t = Table::new(&[
        "n",
        "parity",
        "sup_err",
        "scaled_err",
        "bias_corrected",
        "bv_bound_rhs",
        "bound_satisfied",
        "warning",
    ]);
    for r in rows {
        let (rhs, ok, warning) = match tv {
            Some(tv) => {
                let rhs = tv / 2.0 + bias_norms(&f, 2001, &probe_points(probes, r.n))?.max();
                (float(rhs), (r.scaled_err <= rhs + 1e-6).to_string(), String::new())
            }
            None => (String::new(), String::new(), "no TV(f') metadata".to_string()),
        };
        t.push(vec![
            r.n.to_string(),
            Parity::of(r.n).as_str().to_string(),
            float(r.sup_err),
            float(r.scaled_err),
            float(r.bias_corrected),
            rhs,
            ok,
            warning,
        ]);
    }
    Ok(t)
}

fn parse_rational(s: &str) -> Result<RationalPoint, Failure> {
    let bad = || usage(format!("'{s}' is not num/den with x + 1 = num/den in (0, 2)"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    RationalPoint::reduced(a, b).map_err(|e| usage(format!("'{s}': {e}")))
}

fn extended(v: ExtendedReal) -> String {
    match v {
        ExtendedReal::NegInfinity => "-inf".into(),
        ExtendedReal::PosInfinity => "inf".into(),
        ExtendedReal::Finite(v) => float(v),
    }
}

fn limits(
    rational: Option<&str>,
    irrational: Option<f64>,
    function: Option<&str>,
    parity: ParityArg,
) -> Result<Table, Failure> {
    let f = function.map(model).transpose()?;
    let point = match (rational, irrational) {
        (Some(r), None) => Point::Rational(parse_rational(r)?),
        (None, Some(x)) if x > -1.0 && x < 1.0 => Point::Irrational(x),
        (None, Some(x)) => return Err(usage(format!("--irrational {x} is outside (-1, 1)"))),
        _ => return Err(usage("give exactly one of --rational and --irrational")),
    };
    let mut t = Table::new(&["set", "parity", "x", "lo", "hi", "form"]);
    let x = float(point.value());
    for &p in parity.parities() {
        match point {
            Point::Rational(r) => {
                for l in denominator_limits(r, p) {
                    let v = float(l.value()?);
                    let form = format!("{}A({})", if l.sign > 0 { '+' } else { '-' }, l.arg);
                    t.push(vec![
                        "denominator".into(),
                        p.as_str().into(),
                        x.clone(),
                        v.clone(),
                        v,
                        form,
                    ]);
                }
            }
            Point::Irrational(_) => {
                let half_pi = float(std::f64::consts::FRAC_PI_2);
                let neg_half_pi = float(-std::f64::consts::FRAC_PI_2);
                let row = |lo: String, hi: String| {
                    vec![
                        "denominator".into(),
                        p.as_str().into(),
                        x.clone(),
                        lo,
                        hi,
                        "interval".into(),
                    ]
                };
                t.push(row("-inf".into(), neg_half_pi));
                t.push(row(half_pi, "inf".into()));
            }
        }
        if let Some(f) = &f {
            let set = error_limit_set(f, point, p)?;
            let name = format!("error:{}", f.name);
            match &set.kind {
                LimitSetKind::FiniteSet(vals) => {
                    for &v in vals {
                        t.push(vec![
                            name.clone(),
                            p.as_str().into(),
                            x.clone(),
                            extended(v),
                            extended(v),
                            "point".into(),
                        ]);
                    }
                }
                LimitSetKind::Interval { lo, hi } => {
                    t.push(vec![
                        name.clone(),
                        p.as_str().into(),
                        x.clone(),
                        float(*lo),
                        float(*hi),
                        "interval".into(),
                    ]);
                }
            }
        }
    }
    Ok(t)
}

fn run_verify(
    only: &[String],
    samples: Option<usize>,
    ms: Vec<u64>,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let sections = if only.is_empty() {
        Section::ALL.to_vec()
    } else {
        only.iter()
            .map(|id| {
                Section::from_id(id).ok_or_else(|| {
                    let ids: Vec<&str> = Section::ALL.iter().map(|s| s.id()).collect();
                    usage(format!("unknown section '{id}'; known: {}", ids.join(", ")))
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut config = VerifyConfig {
        seed,
        samples,
        ..VerifyConfig::default()
    };
    if !ms.is_empty() {
        config.ms = ms;
    }
    let reports = verify::run(&config, &sections)?;
    let all_passed = reports.iter().all(|r| r.passed());

    let mut out = open(output)?;
    match format {
        Format::Csv => {
            let mut t = Table::new(&["section", "check", "status", "detail"]);
            for r in &reports {
                for c in &r.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    t.push(vec![
                        r.section.id().into(),
                        c.label.clone(),
                        status.into(),
                        c.detail.clone(),
                    ]);
                }
                for n in &r.notes {
                    t.push(vec![r.section.id().into(), String::new(), "NOTE".into(), n.clone()]);
                }
            }
            t.write(Format::Csv, &mut out)?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(out, "== {} ({})", r.section.id(), r.section.title())?;
                for c in &r.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(out, "  {status}  {}: {}", c.label, c.detail)?;
                }
                for n in &r.notes {
                    writeln!(out, "        {n}")?;
                }
                writeln!(out, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.section.id())?;
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            writeln!(out, "{passed}/{} sections passed", reports.len())?;
        }
    }
    out.flush()?;
    Ok(ExitCode::from(if all_passed { 0 } else { 1 }))
}
