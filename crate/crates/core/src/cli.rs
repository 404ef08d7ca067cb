//! Command-line front end.
//!
//! Exit status is 0 on success, 1 for invalid input (including usage
//! errors) and 2 when an engine reports a broken internal contract.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{format_decimal, format_rational, parse_rational, RatPolynomial};
use crate::error::{Error, Result};
use crate::haar::{self, MCEstimate, RadialHistogram, SamplingPlan};
use crate::modular::{verify_mod_theorem_with, ModReport};
use crate::moments::{self, Method, MomentRequest};
use crate::n2;
use crate::painleve::painleve_coefficients;

#[derive(Parser, Debug)]
#[command(
    name = "cue-moment",
    version,
    about = "Exact and Monte Carlo moments of derivatives of CUE characteristic polynomials"
)]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Print exact values as decimals with this many digits.
    #[arg(long, global = true)]
    pub decimal: Option<usize>,

    /// Worker threads for parallel engines.
    #[arg(long, env = "CUE_MOMENT_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Sumofdets,
    LaguerreK,
    LaguerreN,
    Painleve,
    GeneralX,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Sumofdets => Method::Sumofdets,
            MethodArg::LaguerreK => Method::LaguerreK,
            MethodArg::LaguerreN => Method::LaguerreN,
            MethodArg::Painleve => Method::Painleve,
            MethodArg::GeneralX => Method::GeneralX,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact moment E|Λ'(x)|^{2k} over U(N), with q = |x|^2.
    Moment {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// |x|^2 as a rational, e.g. 4 or 1/4.
        #[arg(long, default_value = "1")]
        q: String,
        /// Defaults to laguerre-k, or general-x when q != 1.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// The ratio polynomial f(N,k), coefficients in ascending degree.
    FPoly {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Painleve)]
        method: MethodArg,
    },
    /// The moment polynomial reduced mod 4k-1 against its product form.
    ModCheck {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Painleve)]
        method: MethodArg,
    },
    /// Coefficients c_j of the series solution of the Painlevé-type ODE.
    Painleve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Number of coefficients; at least 2k.
        #[arg(long)]
        order: Option<usize>,
    },
    /// U(2) closed forms.
    N2 {
        #[command(subcommand)]
        what: N2Command,
    },
    /// Monte Carlo estimates over Haar-random unitaries.
    Mc {
        #[command(subcommand)]
        what: McCommand,
    },
    /// Numeric roots of f(N,k).
    RootsF {
        #[arg(long)]
        k: u64,
        /// Residual bound for each root.
        #[arg(long, default_value_t = 1e-10)]
        precision: f64,
    },
    /// Leading coefficient of the moment polynomial in N.
    #[command(name = "b-k")]
    BK {
        #[arg(long)]
        k: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum N2Command {
    /// Moment of |Λ'(x)|^{2k}: exact for integer k, real-k formula with --x.
    Moment {
        #[arg(long)]
        k: String,
        /// |x|^2 as a rational (exact path).
        #[arg(long, conflicts_with = "x")]
        q: Option<String>,
        /// |x| >= 1 as a real number (real-k path).
        #[arg(long)]
        x: Option<f64>,
    },
    /// Mean of log|Λ'(r)|.
    Logmoment {
        #[arg(long)]
        r: f64,
    },
    /// Mean number of zeros of Λ' in |z| <= u.
    Zerocount {
        #[arg(long)]
        u: f64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Sampling {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = haar::DEFAULT_CHUNK_SIZE)]
    chunk_size: usize,
}

impl From<Sampling> for SamplingPlan {
    fn from(s: Sampling) -> SamplingPlan {
        SamplingPlan { samples: s.samples, seed: s.seed, chunk_size: s.chunk_size }
    }
}

#[derive(Subcommand, Debug)]
pub enum McCommand {
    /// E|Λ'(x)|^{2k}, x = re + i im.
    Moment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x_im: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// E log|Λ'(r)|.
    Logmoment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Histogram of the moduli of the zeros of Λ'.
    Zeros {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
}

/// A computed result, ready for encoding.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Rational(BigRational),
    Real(f64),
    Complex(Complex64),
    Polynomial(RatPolynomial),
    Coefficients { n: u64, k: u64, c: Vec<BigRational> },
    Mod(ModReport),
    Estimate(MCEstimate),
    Histogram(RadialHistogram),
    Roots(Vec<Complex64>),
}

fn real_str(x: f64) -> String {
    // avoid printing "-0"
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn exact_str(r: &BigRational, decimal: Option<usize>) -> String {
    match decimal {
        Some(d) => format_decimal(r, d),
        None => format_rational(r),
    }
}

/// Encodes `out` in the requested format.
pub fn emit(out: &Output, format: Format, decimal: Option<usize>) -> String {
    let ex = |r: &BigRational| exact_str(r, decimal);
    match (out, format) {
        (Output::Rational(r), Format::Json) => json!(ex(r)).to_string() + "\n",
        (Output::Rational(r), Format::Csv) => format!("value\n{}\n", ex(r)),
        (Output::Rational(r), Format::Plain) => ex(r) + "\n",

        (Output::Real(x), Format::Json) => json!(x).to_string() + "\n",
        (Output::Real(x), Format::Csv) => format!("value\n{}\n", real_str(*x)),
        (Output::Real(x), Format::Plain) => real_str(*x) + "\n",

        (Output::Complex(z), Format::Json) => json!({"re": z.re, "im": z.im}).to_string() + "\n",
        (Output::Complex(z), Format::Csv) => format!("re,im\n{},{}\n", real_str(z.re), real_str(z.im)),
        (Output::Complex(z), Format::Plain) => format!("{} {}\n", real_str(z.re), real_str(z.im)),

        (Output::Polynomial(p), Format::Json) => {
            json!(p.coeffs().iter().map(ex).collect::<Vec<_>>()).to_string() + "\n"
        }
        (Output::Polynomial(p), Format::Csv) => {
            let mut s = String::from("degree,coefficient\n");
            for (i, c) in p.coeffs().iter().enumerate() {
                let _ = writeln!(s, "{i},{}", ex(c));
            }
            s
        }
        (Output::Polynomial(p), Format::Plain) => match decimal {
            None => p.to_string() + "\n",
            Some(_) => p.coeffs().iter().map(ex).collect::<Vec<_>>().join(" ") + "\n",
        },

        (Output::Coefficients { n, k, c }, Format::Json) => {
            json!({"n": n, "k": k, "c": c.iter().map(ex).collect::<Vec<_>>()}).to_string() + "\n"
        }
        (Output::Coefficients { c, .. }, Format::Csv) => {
            let mut s = String::from("j,c_j\n");
            for (j, v) in c.iter().enumerate() {
                let _ = writeln!(s, "{},{}", j + 1, ex(v));
            }
            s
        }
        (Output::Coefficients { c, .. }, Format::Plain) => {
            c.iter().enumerate().map(|(j, v)| format!("c_{} = {}\n", j + 1, ex(v))).collect()
        }

        (Output::Mod(r), Format::Json) => serde_json::to_string(r).expect("serializable") + "\n",
        (Output::Mod(r), Format::Csv) => {
            let mut s = String::from("degree,lhs,rhs\n");
            for i in 0..r.lhs.coeffs.len().max(r.rhs.coeffs.len()) {
                let get = |v: &[u64]| v.get(i).copied().unwrap_or(0);
                let _ = writeln!(s, "{i},{},{}", get(&r.lhs.coeffs), get(&r.rhs.coeffs));
            }
            s
        }
        (Output::Mod(r), Format::Plain) => format!(
            "k = {}, p = {}\nholds: {}\np-power in denominators: {}\nlhs: {}\nrhs: {}\n",
            r.k, r.modulus, r.holds, r.denominator_p_power, r.lhs, r.rhs
        ),

        (Output::Estimate(e), Format::Json) => serde_json::to_string(e).expect("serializable") + "\n",
        (Output::Estimate(e), Format::Csv) => format!(
            "mean,std_error,samples,seed,chunk_size\n{},{},{},{},{}\n",
            e.mean, e.std_error, e.samples, e.seed, e.chunk_size
        ),
        (Output::Estimate(e), Format::Plain) => format!(
            "mean = {}\nstd_error = {}\nsamples = {}\nseed = {}\nchunk_size = {}\n",
            e.mean, e.std_error, e.samples, e.seed, e.chunk_size
        ),

        (Output::Histogram(h), Format::Json) => {
            let mut v = serde_json::to_value(h).expect("serializable");
            v["cum_fraction"] = json!(h.cumulative_fraction());
            v.to_string() + "\n"
        }
        (Output::Histogram(h), Format::Csv) => h.to_csv(),
        (Output::Histogram(h), Format::Plain) => format!(
            "# samples = {}, seed = {}, chunk_size = {}, zeros = {}, outside = {}, max modulus = {}\n{}",
            h.samples,
            h.seed,
            h.chunk_size,
            h.total_zeros,
            h.outside,
            h.max_modulus,
            h.to_csv()
        ),

        (Output::Roots(rs), Format::Json) => {
            let v: Vec<Value> = rs.iter().map(|z| json!([z.re, z.im])).collect();
            json!(v).to_string() + "\n"
        }
        (Output::Roots(rs), Format::Csv) => {
            let mut s = String::from("re,im\n");
            for z in rs {
                let _ = writeln!(s, "{},{}", real_str(z.re), real_str(z.im));
            }
            s
        }
        (Output::Roots(rs), Format::Plain) => {
            rs.iter().map(|z| format!("{} {}\n", real_str(z.re), real_str(z.im))).collect()
        }
    }
}

fn parse_k_integer(s: &str) -> Option<u64> {
    s.trim().parse::<u64>().ok()
}

/// Runs the parsed command and returns its result.
pub fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::Moment { n, k, q, method } => {
            let q = parse_rational(q)?;
            let method = method.map(Method::from).unwrap_or(if q == BigRational::from_integer(1.into()) {
                Method::LaguerreK
            } else {
                Method::GeneralX
            });
            let req = MomentRequest { n: *n, k: *k, q, method };
            req.validate()?;
            if method == Method::Sumofdets && *k >= 6 {
                let report = |m: u64, count: usize| eprintln!("sumofdets: m = {m}/{k} done ({count} compositions)");
                return Ok(Output::Rational(moments::deriv_moment_sumofdets_with_progress(*n, *k, Some(&report))));
            }
            Ok(Output::Rational(req.evaluate()?))
        }
        Command::FPoly { k, method } => {
            if *k == 0 {
                return Err(Error::InvalidArgument("f(N,k) needs k >= 1".into()));
            }
            Ok(Output::Polynomial(moments::f_ratio(*k, (*method).into())?))
        }
        Command::ModCheck { k, method } => Ok(Output::Mod(verify_mod_theorem_with(*k, (*method).into())?)),
        Command::Painleve { n, k, order } => {
            let m = order.unwrap_or(2 * *k as usize);
            let s = painleve_coefficients(*n, *k, m)?;
            Ok(Output::Coefficients { n: *n, k: *k, c: s.coefficients })
        }
        Command::N2 { what } => match what {
            N2Command::Moment { k, q, x } => match (x, parse_k_integer(k)) {
                (Some(x), _) => {
                    let kf: f64 =
                        k.trim().parse().map_err(|_| Error::InvalidArgument(format!("not a number: {k:?}")))?;
                    Ok(Output::Real(n2::u2_moment_real_k(kf, *x)?))
                }
                (None, Some(ki)) => {
                    let q = parse_rational(q.as_deref().unwrap_or("1"))?;
                    if q < BigRational::from_integer(0.into()) {
                        return Err(Error::InvalidArgument("q must be non-negative".into()));
                    }
                    Ok(Output::Rational(n2::u2_moment_sum(ki, &q)))
                }
                (None, None) => {
                    Err(Error::InvalidArgument("non-integer k needs --x (real-k formula, |x| >= 1)".into()))
                }
            },
            N2Command::Logmoment { r } => Ok(Output::Real(n2::u2_log_moment(*r)?)),
            N2Command::Zerocount { u } => Ok(Output::Real(n2::u2_mean_zero_count(*u)?)),
        },
        Command::Mc { what } => match what {
            McCommand::Moment { n, k, x, x_im, sampling } => {
                Ok(Output::Estimate(haar::mc_moment(*n, *k, Complex64::new(*x, *x_im), (*sampling).into())?))
            }
            McCommand::Logmoment { n, r, sampling } => {
                Ok(Output::Estimate(haar::mc_log_moment(*n, *r, (*sampling).into())?))
            }
            McCommand::Zeros { n, bins, sampling } => {
                Ok(Output::Histogram(haar::mc_zero_radii(*n, *bins, (*sampling).into())?))
            }
        },
        Command::RootsF { k, precision } => {
            if *k == 0 {
                return Err(Error::InvalidArgument("f(N,k) needs k >= 1".into()));
            }
            Ok(Output::Roots(moments::roots_of_f(*k, *precision)?))
        }
        Command::BK { k } => {
            if *k == 0 {
                return Err(Error::InvalidArgument("b_k needs k >= 1".into()));
            }
            Ok(Output::Rational(moments::b_k_leading(*k)?))
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_contract_violation() {
        2
    } else {
        1
    }
}

/// Full CLI run with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(stderr, "error: --threads must be positive");
            return 1;
        }
        pool = pool.num_threads(t);
    }
    let result = match pool.build() {
        Ok(p) => p.install(|| execute(&cli.command)),
        Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
    };
    let written = result.and_then(|out| {
        let text = emit(&out, cli.format, cli.decimal);
        match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(Error::from),
            None => stdout.write_all(text.as_bytes()).map_err(Error::from),
        }
    });
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
