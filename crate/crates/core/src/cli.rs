//! The `kfree` command line.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rug::Float;

use crate::continuation::{self, InvKForm, Order, Stride};
use crate::counting::{self, Census, Convention};
use crate::laurent;
use crate::limits;
use crate::sieve::{self, cache, SieveConfig};
use crate::zetacore::{self, bits_for_digits, ComplexX, Round};
use crate::{Error, Result};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub digits: u32,
    pub xmax: u64,
    pub cache_dir: Option<PathBuf>,
    pub segment_size: u64,
    pub threads: usize,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            digits: laurent::DEFAULT_DIGITS,
            xmax: 1_000_000,
            cache_dir: None,
            segment_size: SieveConfig::default().segment_size,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.digits < 15 {
            return Err(Error::InvalidArgument(format!("digits = {} is below 15", self.digits)));
        }
        if self.segment_size == 0 || self.segment_size % 64 != 0 {
            return Err(Error::InvalidArgument(format!(
                "segment_size = {} is not a positive multiple of 64",
                self.segment_size
            )));
        }
        if self.threads == 0 {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Applies a flat `key = value` file on top of `self`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::InvalidArgument(format!("config line {}: {what}", i + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "digits" => self.digits = value.parse().map_err(|_| bad("bad digits"))?,
                "xmax" => self.xmax = parse_count(value).map_err(|e| bad(&e))?,
                "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
                "segment_size" => self.segment_size = parse_count(value).map_err(|e| bad(&e))?,
                "threads" => self.threads = value.parse().map_err(|_| bad("bad threads"))?,
                "output" => {
                    self.output = if value == "-" { None } else { Some(PathBuf::from(value)) }
                }
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn sieve_config(&self) -> SieveConfig {
        SieveConfig { segment_size: self.segment_size, ..SieveConfig::default() }
    }

    pub fn census(&self, k: u32, xmax: u64) -> Result<Census> {
        Census::with_config(k, xmax, &self.sieve_config(), self.cache_dir.as_deref())
    }
}

/// Integer argument that may be written as `1e6` or `1000000`.
pub fn parse_count(text: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|_| format!("not a number: {text:?}"))?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("not a nonnegative integer: {text:?}"));
    }
    Ok(v as u64)
}

/// Splits `re`, `re+imi` or `re-imi` into its decimal parts.
pub fn split_complex(text: &str) -> std::result::Result<(String, String), String> {
    let t = text.trim().replace(' ', "");
    let Some(body) = t.strip_suffix('i') else {
        return Ok((t, "0".into()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format!("cannot read {text:?} as re+imi"))?;
    let (re, im) = body.split_at(split);
    let im = match im {
        "+" => "1",
        "-" => "-1",
        other => other.trim_start_matches('+'),
    };
    Ok((re.to_string(), im.to_string()))
}

pub fn parse_complex_x(text: &str, digits: u32) -> Result<ComplexX> {
    let (re, im) = split_complex(text).map_err(Error::InvalidArgument)?;
    let prec = bits_for_digits(digits);
    let read = |part: &str| {
        Float::parse(part)
            .map(|p| Float::with_val(prec, p))
            .map_err(|_| Error::InvalidArgument(format!("not a number: {part:?}")))
    };
    Ok(ComplexX::new(read(&re)?, read(&im)?))
}

pub fn parse_complex64(text: &str) -> Result<Complex64> {
    let (re, im) = split_complex(text).map_err(Error::InvalidArgument)?;
    let read = |part: &str| {
        part.parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {part:?}")))
    };
    Ok(Complex64::new(read(&re)?, read(&im)?))
}

#[derive(Parser, Debug)]
#[command(name = "kfree", version, about = "k-free analogues of Euler's constant and friends")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Flat key = value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Decimal digits for extended-precision work.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub xmax: Option<u64>,
    #[arg(long, global = true, env = "KFREE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub segment_size: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file_text(&fs::read_to_string(path)?)?;
        }
        if let Some(d) = self.digits {
            cfg.digits = d;
        }
        if let Some(x) = self.xmax {
            cfg.xmax = x;
        }
        if let Some(c) = &self.cache_dir {
            cfg.cache_dir = Some(c.clone());
        }
        if let Some(s) = self.segment_size {
            cfg.segment_size = s;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Left,
    Right,
    Average,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConstantsMethod {
    Closed,
    Contour,
    Series,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GammaMethod {
    Wolf,
    Integral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Basic,
    Corrected,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count k-free integers in [lo, hi], storing the block when a cache is set.
    Sieve {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1, value_parser = parse_count)]
        lo: u64,
        /// Defaults to xmax.
        #[arg(long, value_parser = parse_count)]
        hi: Option<u64>,
    },
    /// Q_k(x) and f_k(x); with --stride, a CSV of checkpoints up to x.
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Right)]
        convention: ConventionArg,
        #[arg(long, value_parser = parse_count)]
        stride: Option<u64>,
    },
    /// ζ(s) or its j-th derivative at complex s.
    Zeta {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 0)]
        derivative: usize,
    },
    /// Laurent coefficients γ^{M,k}_0..=n.
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ConstantsMethod::Contour)]
        method: ConstantsMethod,
        #[arg(long, default_value_t = laurent::DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = laurent::DEFAULT_NODES)]
        nodes: usize,
    },
    /// Sum-side estimate of γ^{M,k}_n truncated at x.
    GammaMk {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_enum, default_value_t = GammaMethod::Wolf)]
        method: GammaMethod,
        /// Emit the x,estimate,reference,abs_error CSV on a log grid instead.
        #[arg(long)]
        convergence: bool,
    },
    /// ζ(s)/ζ(ks) from the truncated k-free Dirichlet sum.
    Continue {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_enum, default_value_t = OrderArg::Basic)]
        order: OrderArg,
    },
    /// ζ(1/k) estimate at x.
    ZetaInvK {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// 55 differentiates directly, 56 folds the constant into the sum.
        #[arg(long, default_value_t = 56, value_parser = clap::builder::PossibleValuesParser::new(["55", "56"]).map(|s| s.parse::<u32>().unwrap()))]
        form: u32,
        /// `--emit csv PATH` writes the series along x.
        #[arg(long, num_args = 2, value_names = ["FORMAT", "PATH"])]
        emit: Option<Vec<String>>,
    },
    /// γ^{M,k}_0 for k = 2..=11.
    Table1,
    /// γ^{M,k}_n for n = 0..=10 and k = 2..=5.
    Tables {
        #[arg(long)]
        k: Option<u32>,
    },
    /// fig1.csv..fig4.csv of the ζ(1/k) estimator.
    Figures {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Sieve and checkpoint throughput as JSON lines.
    Bench {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long = "at", value_parser = parse_count, default_values_t = [100_000_000u64, 1_000_000_000])]
        at: Vec<u64>,
    },
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create_csv(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// `k` and `γ^{M,k}_0` for k = 2..=11, cut after 30 decimals, fixed width.
pub fn table1_text(digits: u32) -> Result<String> {
    if digits < 35 {
        return Err(Error::Precision(format!("table1 needs at least 35 digits, got {digits}")));
    }
    let mut out = format!("{:>3}  {:>33}\n", "k", "gamma^{M,k}");
    for k in 2..=11 {
        let g = laurent::closed_form_gamma0(k, digits)?;
        out.push_str(&format!("{k:>3}  {:>33}\n", g.to_fixed_truncated(30)));
    }
    Ok(out)
}

/// Blocks of `n` and `γ^{M,k}_n`, each value cut to 32 characters.
pub fn tables_text(ks: &[u32], digits: u32) -> Result<String> {
    if digits < 50 {
        return Err(Error::Precision(format!("tables need at least 50 digits, got {digits}")));
    }
    let mut out = String::new();
    for (i, &k) in ks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let e = laurent::extract_coeffs(k, 10, digits, laurent::DEFAULT_RADIUS, laurent::DEFAULT_NODES)?;
        out.push_str(&format!("{:>3}  {:>33}\n", "n", format!("gamma_n^{{M,{k}}}")));
        for (n, c) in e.coeffs.iter().enumerate() {
            out.push_str(&format!("{n:>3}  {:>33}\n", c.to_width(32, Round::Zero)));
        }
    }
    Ok(out)
}

fn run_command(cmd: &Command, cfg: &RunConfig) -> Result<()> {
    let mut out = open_output(cfg)?;
    match cmd {
        Command::Sieve { k, lo, hi } => {
            let hi = hi.unwrap_or(cfg.xmax);
            let block = match &cfg.cache_dir {
                Some(dir) => cache::load_or_sieve(*k, *lo, hi, &cfg.sieve_config(), dir)?,
                None => sieve::sieve_kfree_with(*k, *lo, hi, &cfg.sieve_config())?,
            };
            writeln!(out, "k,lo,hi,count")?;
            writeln!(out, "{k},{lo},{hi},{}", block.count_ones())?;
        }
        Command::Count { k, x, convention, stride } => {
            let census = cfg.census(*k, x.ceil().max(1.0) as u64)?;
            match stride {
                Some(s) => counting::write_checkpoints_csv(&census, x.floor() as u64, *s, &mut out)?,
                None => {
                    let conv = match convention {
                        ConventionArg::Left => Convention::Left,
                        ConventionArg::Right => Convention::Right,
                        ConventionArg::Average => Convention::Average,
                    };
                    let cp = counting::count_q(&census, *x, conv)?;
                    writeln!(out, "x,q,f")?;
                    writeln!(out, "{},{},{}", cp.x, cp.q, cp.f.to_f64())?;
                }
            }
        }
        Command::Zeta { s, derivative } => {
            let sx = parse_complex_x(s, cfg.digits)?;
            let v = zetacore::zeta_em_derivative(&sx, *derivative, cfg.digits)?;
            writeln!(out, "{v}")?;
        }
        Command::Constants { k, n, method, radius, nodes } => {
            let values = match method {
                ConstantsMethod::Closed => {
                    if *n > 0 {
                        return Err(Error::InvalidArgument("the closed form only gives n = 0".into()));
                    }
                    vec![laurent::closed_form_gamma0(*k, cfg.digits)?]
                }
                ConstantsMethod::Contour => {
                    laurent::extract_coeffs(*k, *n, cfg.digits, *radius, *nodes)?.coeffs
                }
                ConstantsMethod::Series => laurent::series_product_coeffs(*k, *n, cfg.digits)?.coeffs,
            };
            writeln!(out, "n,value")?;
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{i},{}", v.to_sci(cfg.digits as usize))?;
            }
        }
        Command::GammaMk { k, n, x, method, convergence } => {
            let census = cfg.census(*k, *x)?;
            if *convergence {
                let reference = laurent::extract_coeffs(*k, *n, cfg.digits, 0.5, 256)?.coeffs[*n].to_f64();
                let xs = limits::log_grid(10, *x, 10);
                limits::write_convergence_csv(&census, *n, &xs, reference, &mut out)?;
            } else {
                let est = match method {
                    GammaMethod::Wolf => limits::wolf_limit(&census, *n, *x)?,
                    GammaMethod::Integral => limits::ym_integral(&census, *n, *x)?,
                };
                writeln!(out, "k,n,x,value,predicted_error")?;
                writeln!(out, "{k},{n},{x},{},{}", est.value, est.predicted_error)?;
            }
        }
        Command::Continue { s, k, x, order } => {
            let s = parse_complex64(s)?;
            let census = cfg.census(*k, *x)?;
            let order = match order {
                OrderArg::Basic => Order::Basic,
                OrderArg::Corrected => Order::Corrected,
            };
            let est = continuation::continued_value(&census, s, *x, order)?;
            writeln!(out, "re,im")?;
            writeln!(out, "{},{}", est.value.re, est.value.im)?;
        }
        Command::ZetaInvK { k, x, form, emit } => {
            let census = cfg.census(*k, *x)?;
            let f = if *form == 55 { InvKForm::Derivative } else { InvKForm::Shifted };
            let estimate = continuation::zeta_inv_k(&census, *x, f)?;
            let reference = continuation::zeta_inv_k_reference(*k)?;
            writeln!(out, "k,x,estimate,reference,deviation")?;
            writeln!(out, "{k},{x},{estimate},{reference},{}", estimate - reference)?;
            if let Some(e) = emit {
                if e[0] != "csv" {
                    return Err(Error::InvalidArgument(format!("unknown emit format {:?}", e[0])));
                }
                let stride = if *x > 1_000_000 { Stride::Log(1000) } else { Stride::Every };
                let rows = continuation::figure_series(&census, *x, stride)?;
                let mut file = create_csv(Path::new(&e[1]))?;
                continuation::write_figure_csv(&rows, &mut file)?;
                file.flush()?;
            }
        }
        Command::Table1 => out.write_all(table1_text(cfg.digits)?.as_bytes())?,
        Command::Tables { k } => {
            let ks: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => vec![2, 3, 4, 5],
            };
            out.write_all(tables_text(&ks, cfg.digits)?.as_bytes())?;
        }
        Command::Figures { k, dir } => {
            let ks: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => vec![2, 3, 4, 5],
            };
            let stride = if cfg.xmax > 1_000_000 { Stride::Log(1000) } else { Stride::Every };
            writeln!(out, "file,k,rows,window_mean")?;
            for k in ks {
                let census = cfg.census(k, cfg.xmax)?;
                let rows = continuation::figure_series(&census, cfg.xmax, stride)?;
                let name = continuation::figure_file_name(k);
                let mut file = create_csv(&dir.join(&name))?;
                continuation::write_figure_csv(&rows, &mut file)?;
                file.flush()?;
                let mean = continuation::trailing_window_mean(&rows, 0.1);
                writeln!(out, "{name},{k},{},{mean}", rows.len())?;
            }
        }
        Command::Bench { k, at } => {
            for &xmax in at {
                let t0 = Instant::now();
                let census = cfg.census(*k, xmax)?;
                let sieve_s = t0.elapsed().as_secs_f64();
                let t1 = Instant::now();
                let last = counting::checkpoint_stream(&census, xmax)?.last().unwrap();
                let stream_s = t1.elapsed().as_secs_f64();
                let line = serde_json::json!({
                    "k": k,
                    "xmax": xmax,
                    "threads": cfg.threads,
                    "cached": cfg.cache_dir.is_some(),
                    "sieve_seconds": sieve_s,
                    "sieved_per_second": xmax as f64 / sieve_s,
                    "checkpoint_seconds": stream_s,
                    "checkpoints_per_second": xmax as f64 / stream_s,
                    "q": last.q,
                    "f": last.f.to_f64(),
                });
                writeln!(out, "{line}")?;
                out.flush()?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Runs the parsed command inside a pool of `threads` workers.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.global.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| run_command(&cli.command, &cfg))
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
