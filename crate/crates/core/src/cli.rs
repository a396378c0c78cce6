//! The `elim` command line.
//!
//! Every subcommand prints one JSON object on stdout. Exit code 0 means
//! success, 1 a mathematical refusal (the JSON then carries an `"error"` key),
//! 2 malformed flags or input. Human-readable diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::complexes::{self, BasedComplex};
use crate::elimination::{self, FormSystem};
use crate::error::Error;
use crate::koszul::{self, KoszulSpec};
use crate::mahler;
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};
use crate::stability::{self, OnePS};

/// Subcommand name and the library operation behind it.
pub const COMMAND_TABLE: &[(&str, &str)] = &[
    ("torsion", "complexes::torsion"),
    ("exactness", "complexes::is_exact"),
    ("scaling-exponent", "complexes::scaling_exponent"),
    ("chi", "koszul::chi"),
    ("dims", "koszul::complex_dims"),
    ("build", "koszul::build_complex"),
    ("resultant", "elimination::resultant"),
    ("resultant-symbolic", "elimination::resultant_symbolic"),
    ("sylvester", "elimination::sylvester_resultant"),
    ("discriminant", "elimination::discriminant"),
    ("chow-points", "elimination::chow_form_points"),
    ("weight", "stability::weight"),
    ("limit", "stability::limit_polynomial"),
    ("slope", "stability::slope_fit"),
    ("mahler", "mahler::theta"),
    ("l2norm", "mahler::l2_norm_sq"),
];

/// Environment variable capping the symbolic interpolation system.
pub const MAX_GRID_VAR: &str = "ELIM_MAX_GRID";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    DomainError,
    UsageError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::DomainError => 1,
            Status::UsageError => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    /// JSON for stdout; `Null` prints nothing.
    pub payload: Value,
    /// Plain text for stdout, used by `--help`.
    pub text: Option<String>,
    pub diagnostics: String,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult { status: Status::Ok, payload, text: None, diagnostics: String::new() }
    }

    /// The exact bytes written to stdout.
    pub fn stdout(&self) -> String {
        match (&self.text, &self.payload) {
            (Some(text), _) => text.clone(),
            (None, Value::Null) => String::new(),
            (None, v) => format!("{v}\n"),
        }
    }

    /// Writes stdout and stderr and returns the exit code.
    pub fn emit(&self) -> i32 {
        print!("{}", self.stdout());
        if !self.diagnostics.is_empty() {
            eprintln!("{}", self.diagnostics.trim_end());
        }
        self.status.exit_code()
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

#[derive(Parser, Debug)]
#[command(name = "elim", version, about = "Exact resultants, discriminants and Koszul torsion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ComplexArg {
    /// Path to a complex in JSON, or `-` for stdin
    #[arg(long)]
    complex: String,
}

#[derive(Args, Debug)]
struct KoszulArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated degrees d0,...,dn
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u32>,
    /// Twist; defaults to the Macaulay bound
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
}

#[derive(Args, Debug)]
struct FormsArgs {
    #[arg(long)]
    n: usize,
    /// Forms separated by `;`
    #[arg(long)]
    forms: String,
    /// Twist; defaults to the Macaulay bound
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long)]
    poly: String,
    /// Comma-separated integer weights, one per variable
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    weights: Vec<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion of a based exact complex, with its factor audit
    Torsion(ComplexArg),
    /// Whether the input is a complex and whether it is exact
    Exactness(ComplexArg),
    /// Exponent e with torsion(mu d) = mu^e torsion(d)
    ScalingExponent {
        /// Comma-separated term dimensions
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Alternating sum of the Koszul term dimensions
    Chi(KoszulArgs),
    /// Koszul term dimensions in complex order
    Dims(KoszulArgs),
    /// The trimmed based Koszul complex of a system of forms
    Build(FormsArgs),
    /// Resultant of n+1 forms on P^n
    Resultant(FormsArgs),
    /// Resultant as a polynomial in the generic coefficients
    ResultantSymbolic {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
    },
    /// Sylvester determinant of two binary forms
    Sylvester {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Discriminant of a single form
    Discriminant {
        #[arg(long)]
        form: String,
        /// Number of variables minus one; defaults to the highest index used
        #[arg(long)]
        n: Option<usize>,
    },
    /// Chow form of finitely many points, e.g. "1,0;0,1"
    ChowPoints {
        #[arg(long)]
        points: String,
    },
    /// Weight of a polynomial under a diagonal one-parameter subgroup
    Weight(OrbitArgs),
    /// Lowest weight part of a polynomial
    Limit(OrbitArgs),
    /// Fitted log-slope of the orbit norm as t goes to 0
    Slope {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 1e-3)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-6)]
        tmin: f64,
        /// Sample points per decade
        #[arg(long, default_value_t = 1)]
        per_decade: usize,
    },
    /// Monte-Carlo Mahler measure
    Mahler {
        #[arg(long)]
        poly: String,
        /// Number of variables; defaults to the highest index used plus one
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Act by this one-parameter subgroup first (needs --t)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "t")]
        weights: Option<Vec<i64>>,
        #[arg(long, requires = "weights")]
        t: Option<String>,
    },
    /// Exact L2 norm squared on projective space
    L2norm {
        #[arg(long)]
        poly: String,
        /// Number of variables; defaults to the highest index used plus one
        #[arg(long)]
        vars: Option<usize>,
    },
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { status: Status::UsageError, payload: Value::Null, text: None, diagnostics: rendered }
            } else {
                CommandResult { status: Status::Ok, payload: Value::Null, text: Some(rendered), diagnostics: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(payload) => CommandResult::ok(payload),
        Err(Failure::Usage(msg)) => CommandResult {
            status: Status::UsageError,
            payload: Value::Null,
            text: None,
            diagnostics: format!("error: {msg}"),
        },
        Err(Failure::Domain(e)) => CommandResult {
            status: Status::DomainError,
            payload: json!({ "error": e.to_string() }),
            text: None,
            diagnostics: format!("error: {e}"),
        },
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rat(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn read_complex(source: &str) -> std::result::Result<BasedComplex, Failure> {
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("reading {source}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid complex: {e}")))
}

/// Variable prefix used in `text`, so output reads like the input.
fn prefix_of(text: &str, default: &str) -> String {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_lowercase() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_lowercase() {
                i += 1;
            }
            if i < bytes.len() && bytes[i].is_ascii_digit() {
                return text[start..i].to_string();
            }
        } else {
            i += 1;
        }
    }
    default.to_string()
}

fn koszul_spec(args: &KoszulArgs) -> std::result::Result<KoszulSpec, Failure> {
    Ok(match args.m {
        Some(m) => KoszulSpec::new(args.n, args.degrees.clone(), m)?,
        None => KoszulSpec::at_macaulay_bound(args.n, args.degrees.clone())?,
    })
}

fn max_grid() -> std::result::Result<usize, Failure> {
    match std::env::var(MAX_GRID_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_GRID_VAR} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(elimination::DEFAULT_MAX_GRID),
    }
}

fn parse_points(text: &str) -> std::result::Result<Vec<Vec<Rational>>, Failure> {
    text.split(';')
        .map(|p| p.split(',').map(|c| rational::parse(c.trim()).map_err(Failure::from)).collect())
        .collect()
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Torsion(a) => {
            let c = read_complex(&a.complex)?;
            let t = complexes::torsion(&c)?;
            Ok(to_json(&t))
        }
        Command::Exactness(a) => {
            let c = read_complex(&a.complex)?;
            let is_complex = complexes::is_complex(&c);
            let exact = is_complex && complexes::is_exact(&c)?;
            Ok(json!({ "complex": is_complex, "exact": exact }))
        }
        Command::ScalingExponent { dims } => Ok(json!({ "exponent": complexes::scaling_exponent(&dims) })),
        Command::Chi(a) => Ok(json!({ "chi": koszul::chi(&koszul_spec(&a)?) })),
        Command::Dims(a) => {
            let spec = koszul_spec(&a)?;
            Ok(json!({
                "dims": koszul::complex_dims(&spec),
                "macaulay_bound": koszul::macaulay_bound(&spec),
            }))
        }
        Command::Build(a) => {
            let sys = FormSystem::parse(a.n, &a.forms)?;
            let spec = match a.m {
                Some(m) => KoszulSpec::new(a.n, sys.degrees().to_vec(), m)?,
                None => KoszulSpec::at_macaulay_bound(a.n, sys.degrees().to_vec())?,
            };
            Ok(to_json(&koszul::build_complex(&spec, sys.forms())?))
        }
        Command::Resultant(a) => {
            let sys = FormSystem::parse(a.n, &a.forms)?;
            let value = match a.m {
                Some(m) => elimination::resultant_with_twist(&sys, m)?,
                None => elimination::resultant(&sys)?,
            };
            Ok(json!({ "value": rat(&value) }))
        }
        Command::ResultantSymbolic { n, degrees } => {
            let r = elimination::resultant_symbolic(n, &degrees, max_grid()?)?;
            let layout: Vec<Vec<String>> = elimination::coefficient_layout(n, &degrees)
                .iter()
                .map(|mons| mons.iter().map(|e| MultiPoly::monomial(n + 1, e.clone(), rational::from_int(1)).to_string()).collect())
                .collect();
            Ok(json!({
                "polynomial": r.format_with("u"),
                "degree": elimination::resultant_degree(&degrees),
                "terms": r.len(),
                "layout": layout,
            }))
        }
        Command::Sylvester { f, g } => {
            let f = MultiPoly::parse(&f, Some(2))?;
            let g = MultiPoly::parse(&g, Some(2))?;
            Ok(json!({ "value": rat(&elimination::sylvester_resultant(&f, &g)?) }))
        }
        Command::Discriminant { form, n } => {
            let f = MultiPoly::parse(&form, n.map(|n| n + 1))?;
            Ok(json!({ "value": rat(&elimination::discriminant(&f)?) }))
        }
        Command::ChowPoints { points } => {
            let pts = parse_points(&points)?;
            Ok(json!({ "polynomial": elimination::chow_form_points(&pts)?.format_with("u") }))
        }
        Command::Weight(a) => {
            let f = MultiPoly::parse(&a.poly, Some(a.weights.len()))?;
            Ok(json!({ "weight": stability::weight(&f, &OnePS::new(a.weights))? }))
        }
        Command::Limit(a) => {
            let f = MultiPoly::parse(&a.poly, Some(a.weights.len()))?;
            let lambda = OnePS::new(a.weights);
            Ok(json!({
                "weight": stability::weight(&f, &lambda)?,
                "limit": stability::limit_polynomial(&f, &lambda)?.format_with(&prefix_of(&a.poly, "w")),
            }))
        }
        Command::Slope { orbit, tmax, tmin, per_decade } => {
            let f = MultiPoly::parse(&orbit.poly, Some(orbit.weights.len()))?;
            let lambda = OnePS::new(orbit.weights);
            if !(tmin > 0.0 && tmin < tmax) || per_decade == 0 {
                return Err(Error::InvalidArgument("need 0 < tmin < tmax and a positive per-decade count".into()).into());
            }
            let ts = stability::log_spaced(tmax, tmin, per_decade);
            Ok(json!({
                "slope": stability::slope_fit(&f, &lambda, &ts)?,
                "weight": stability::weight(&f, &lambda)?,
                "t": ts,
            }))
        }
        Command::Mahler { poly, vars, samples, seed, shards, weights, t } => {
            let f = MultiPoly::parse(&poly, vars)?;
            let est = match (weights, t) {
                (Some(w), Some(t)) => {
                    let t = rational::parse(&t)?;
                    mahler::theta_along_orbit(&f, &OnePS::new(w), &t, samples, seed)?
                }
                _ => mahler::theta_sharded(&f, samples, seed, shards)?,
            };
            Ok(to_json(&est))
        }
        Command::L2norm { poly, vars } => {
            let f = MultiPoly::parse(&poly, vars)?;
            Ok(json!({ "value": rat(&mahler::l2_norm_sq(&f)?) }))
        }
    }
}
