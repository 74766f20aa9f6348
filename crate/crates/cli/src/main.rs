use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use pcf_cli::{suite, table};
use pcf_core::analysis::{growth_diagnostics, oracle, tietze_check, verify_limit, Verdict};
use pcf_core::rational::parse_rational;
use pcf_core::transforms::{
    bauer_muir, euler_from_series, even_part, extension_bmoe, generalized_euler, generalized_product, odd_part,
    product_to_cf, ProductSpec, SeriesSpec,
};
use pcf_core::{evaluate, evaluate_terms, preset, CfSpec, Error, RationalFunction};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "pcf",
    version,
    about = "Build, transform, evaluate and check polynomial continued fractions"
)]
struct Cli {
    /// Number of terms (partial quotients) to use.
    #[arg(long, global = true, default_value_t = 64)]
    terms: usize,
    /// Convergence tolerance, as an exact decimal or fraction.
    #[arg(long, global = true, default_value = "1e-10")]
    tol: String,
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the limit.
    Eval {
        #[command(flatten)]
        input: InputArgs,
        /// Use exactly --terms terms instead of stopping once converged.
        #[arg(long)]
        fixed: bool,
    },
    /// Exact canonical numerators and denominators.
    Convergents(InputArgs),
    /// Apply a transformation and print the resulting fraction.
    Transform(TransformArgs),
    /// Construct a preset family member.
    Family {
        #[command(flatten)]
        params: PresetArgs,
        /// Exit 0 even when a hypothesis fails.
        #[arg(long)]
        allow_unverified: bool,
    },
    /// Irrationality criterion for integer fractions.
    Tietze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1000)]
        scan_limit: u64,
    },
    /// Lower bounds for the growth of the denominators.
    Growth {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1")]
        epsilon: String,
    },
    /// Compare the limit of a preset with its claimed value.
    Verify {
        #[command(flatten)]
        params: PresetArgs,
        #[arg(long)]
        allow_unverified: bool,
    },
    /// Run every identity check and write one report per check.
    ReproducePaper {
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct PresetArgs {
    /// Preset id (ex1.1, ex2.2, ..., entry13, brouncker, pincherle, ...).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a_upper: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long = "H", allow_hyphen_values = true)]
    h_upper: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Any preset parameter as KEY=VALUE.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

impl PresetArgs {
    fn map(&self) -> Result<BTreeMap<String, String>, Error> {
        let named = [
            ("A", &self.a_upper),
            ("k", &self.k),
            ("m", &self.m),
            ("f", &self.f),
            ("g", &self.g),
            ("c", &self.c),
            ("d", &self.d),
            ("b", &self.b),
            ("H", &self.h_upper),
            ("a", &self.a),
            ("alpha", &self.alpha),
            ("x", &self.x),
            ("r", &self.r),
        ];
        let mut out: BTreeMap<String, String> = named
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        for kv in &self.extra {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected KEY=VALUE, got {kv}")))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    fn member(&self) -> Result<pcf_core::FamilyMember, Error> {
        let id = self
            .preset
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--preset is required".into()))?;
        preset(id, &self.map()?)
    }
}

#[derive(Args, Debug, Clone, Default)]
struct InputArgs {
    /// Continued fraction JSON file, or - for stdin.
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    #[command(flatten)]
    params: PresetArgs,
}

impl InputArgs {
    fn cf(&self) -> Result<CfSpec, Error> {
        match &self.input {
            Some(path) => {
                let mut text = String::new();
                if path.as_os_str() == "-" {
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                } else {
                    text = fs::read_to_string(path)
                        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                }
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
            }
            None if self.params.preset.is_some() => Ok(self.params.member()?.cf),
            None => Err(Error::InvalidArgument("give --input FILE or --preset ID".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Euler,
    GenEuler,
    Product,
    GenProduct,
    Even,
    Odd,
    BauerMuir,
    Extend,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[command(flatten)]
    input: InputArgs,
    /// Series terms c_1, c_2, ... (comma separated).
    #[arg(long, allow_hyphen_values = true)]
    series: Option<String>,
    /// Series term as a function of n, sampled at n = 1..terms.
    #[arg(long, allow_hyphen_values = true)]
    series_fn: Option<String>,
    /// Product factors a_1, a_2, ... (comma separated).
    #[arg(long, allow_hyphen_values = true)]
    factors: Option<String>,
    /// Perturbation b_0, b_1, ... (comma separated).
    #[arg(long, allow_hyphen_values = true)]
    perturbation: Option<String>,
    /// Modifying sequence w_0, w_1, ... (comma separated).
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Modifying sequence as a function of n, used for n >= 1.
    #[arg(long, allow_hyphen_values = true)]
    w_fn: Option<String>,
    /// w_0 when --w-fn is used.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    w0: String,
}

fn list(s: &str) -> Result<Vec<BigRational>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_rational(t.trim()))
        .collect()
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Error> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this operation")))
}

impl TransformArgs {
    fn series(&self, terms: usize) -> Result<SeriesSpec, Error> {
        let c = match (&self.series, &self.series_fn) {
            (Some(s), _) => list(s)?,
            (None, Some(f)) => {
                let f: RationalFunction = f.parse()?;
                (1..=terms as i64).map(|n| f.eval_i64(n)).collect::<Result<_, _>>()?
            }
            _ => return Err(Error::InvalidArgument("--series or --series-fn is required".into())),
        };
        Ok(match &self.perturbation {
            Some(p) => SeriesSpec::perturbed(c, list(p)?),
            None => SeriesSpec::new(c),
        })
    }

    fn w(&self, terms: usize) -> Result<Vec<BigRational>, Error> {
        match (&self.w, &self.w_fn) {
            (Some(w), _) => list(w),
            (None, Some(f)) => {
                let f: RationalFunction = f.parse()?;
                let mut w = vec![parse_rational(&self.w0)?];
                for n in 1..=terms as i64 {
                    w.push(f.eval_i64(n)?);
                }
                Ok(w)
            }
            _ => Err(Error::InvalidArgument("--w or --w-fn is required".into())),
        }
    }

    fn run(&self, terms: usize) -> Result<CfSpec, Error> {
        match self.op {
            Op::Euler => euler_from_series(&self.series(terms)?),
            Op::GenEuler => generalized_euler(&self.series(terms)?),
            Op::Product | Op::GenProduct => {
                let factors = list(required(&self.factors, "factors")?)?;
                let spec = match &self.perturbation {
                    Some(p) => ProductSpec::perturbed(factors, list(p)?),
                    None => ProductSpec::new(factors),
                };
                if self.op == Op::Product {
                    product_to_cf(&spec)
                } else {
                    generalized_product(&spec)
                }
            }
            Op::Even => even_part(&self.input.cf()?, terms),
            Op::Odd => odd_part(&self.input.cf()?, terms),
            Op::BauerMuir => Ok(bauer_muir(&self.input.cf()?, &self.w(terms)?, terms)?.cf),
            Op::Extend => extension_bmoe(&self.input.cf()?, &self.w(terms)?, terms),
        }
    }
}

struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::HypothesisViolation { .. }) {
            1
        } else {
            2
        };
        Failure {
            code,
            body: json!({ "error": e.kind(), "message": e.to_string() }),
        }
    }
}

fn print(format: Format, value: &impl Serialize) {
    let v = serde_json::to_value(value).expect("outputs serialize");
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("json") + "\n",
        Format::Table => table::render(&v),
    };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    oracle::cache_file_from_env()?;
    let tol = parse_rational(&cli.tol)?;
    let prec = cli.precision_bits;
    match &cli.command {
        Command::Eval { input, fixed } => {
            let cf = input.cf()?;
            let result = if *fixed {
                evaluate_terms(&cf, cli.terms, &tol, prec)
            } else {
                evaluate(&cf, &tol, cli.terms, prec)
            };
            let est = match result {
                Ok(est) => est,
                // the estimate is still useful; `converged` says it all
                Err(Error::DidNotConverge { estimate }) => *estimate,
                Err(e) => return Err(e.into()),
            };
            print(cli.format, &est);
        }
        Command::Convergents(input) => print(cli.format, &input.cf()?.convergents(cli.terms)?),
        Command::Transform(t) => print(cli.format, &t.run(cli.terms)?),
        Command::Family {
            params,
            allow_unverified,
        } => {
            let member = params.member()?;
            print(cli.format, &member);
            if !allow_unverified {
                member.ensure_verified()?;
            }
        }
        Command::Tietze { input, scan_limit } => print(cli.format, &tietze_check(&input.cf()?, *scan_limit)?),
        Command::Growth { input, epsilon } => print(
            cli.format,
            &growth_diagnostics(&input.cf()?, cli.terms, &parse_rational(epsilon)?, prec)?,
        ),
        Command::Verify {
            params,
            allow_unverified,
        } => {
            let member = params.member()?;
            if !allow_unverified {
                member.ensure_verified()?;
            }
            print(cli.format, &verify_limit(&member, cli.terms, prec, &tol)?);
        }
        Command::ReproducePaper { out } => return reproduce(cli, out),
    }
    Ok(0)
}

fn reproduce(cli: &Cli, out: &PathBuf) -> Result<u8, Failure> {
    let io = |e: std::io::Error| Failure::from(Error::InvalidArgument(format!("{}: {e}", out.display())));
    fs::create_dir_all(out).map_err(io)?;
    let outcomes = suite::run_all(cli.seed);
    let mut summary = Vec::new();
    for o in &outcomes {
        let text = serde_json::to_string_pretty(o).expect("json") + "\n";
        fs::write(out.join(o.file_name()), text).map_err(io)?;
        summary.push(json!({ "criterion": o.criterion, "check": o.label, "verdict": o.verdict }));
    }
    let text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
    fs::write(out.join("summary.json"), text).map_err(io)?;
    print(cli.format, &summary);
    Ok(if outcomes.iter().all(|o| o.verdict == Verdict::Pass) {
        0
    } else {
        3
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({ "error": "Usage", "message": e.to_string().trim_end() });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
