//! Command-line front end: zero-file maintenance, coefficient solves with
//! automatic accuracy estimation, zero hunting near chosen targets, formal
//! division, level analysis, and direct evaluation.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::analysis;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigReal, PrecisionContext};
use crate::series::{self, FiniteDirichletSeries};
use crate::solver::{self, DeltaTable, TableMeta};
use crate::zeros::{self, ZetaZero};

pub const OUT_DIR_ENV: &str = "ZETADELTA_OUT";
const HUNT_WINDOW: f64 = 0.5;

#[derive(Parser, Debug)]
#[command(
    name = "zetadelta",
    version,
    about = "Finite Dirichlet series vanishing at the first zeta zeros: \
             coefficients, nearby-zero hunting, and sieve structure"
)]
pub struct Cli {
    /// Line-oriented key=value file supplying defaults for digits,
    /// zeros-file, out, threads
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker thread cap; results are identical at any setting
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Omit timestamps from metadata so reruns are byte-identical
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Output directory (default: $ZETADELTA_OUT, else current directory)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Zero ordinate file: '#' comments, one increasing decimal per line
    #[arg(long, global = true)]
    pub zeros_file: Option<PathBuf>,

    /// Requested decimal precision (minimum 30)
    #[arg(long, global = true)]
    pub digits: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify or refine a zero ordinate file
    Zeros {
        #[command(subcommand)]
        action: ZerosAction,
    },
    /// Solve for the series coefficients and write CSV + metadata
    Delta(DeltaArgs),
    /// Newton-hunt series zeros near chosen targets and report offsets
    Hunt(HuntArgs),
    /// Eratosthenes level/sublevel analysis of a coefficient table
    Levels(LevelsArgs),
    /// Formal division of a table by the all-ones series
    Divide(DivideArgs),
    /// Evaluate zeta, eta, or a table at one point
    Eval(EvalArgs),
}

#[derive(Subcommand, Debug)]
pub enum ZerosAction {
    /// Evaluate |eta(1/2 + i gamma)| for every ordinate and check it against
    /// the digits the file claims
    Verify,
    /// Newton-refine ordinates to --digits and write a new file
    Refine {
        /// Comma-separated 1-based indices (default: all)
        #[arg(long, value_delimiter = ',')]
        indices: Vec<usize>,
        /// Destination (default: refined.txt in the output directory)
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    /// Series length N = 2M + 1 (odd)
    #[arg(long)]
    pub n: Option<usize>,
    /// Harvest every M = 1..m-max from one elimination
    #[arg(long)]
    pub ladder: bool,
    /// Largest zero count for --ladder
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Skip the half-precision companion run (table gets no est_digits)
    #[arg(long)]
    pub no_estimate: bool,
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    /// Coefficient table CSV (with .meta sidecar)
    #[arg(long)]
    pub table: PathBuf,
    /// Targets: rho:K or rho:K-L (nontrivial index), trivial:-2M, eta:K
    /// (zeros 1 + 2 pi i K / ln 2 of the eta factor)
    #[arg(long, value_delimiter = ',', required = true)]
    pub targets: Vec<String>,
}

#[derive(Args, Debug)]
pub struct LevelsArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Band-statistics window: keep n <= window (default N)
    #[arg(long)]
    pub window: Option<u64>,
    /// Also emit the sublevel split of the progression d, 2d, ...
    #[arg(long)]
    pub sublevel: Option<u64>,
    /// Count prime-n points in band statistics (default: excluded)
    #[arg(long)]
    pub include_primes: bool,
}

#[derive(Args, Debug)]
pub struct DivideArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Number of quotient coefficients
    #[arg(long)]
    pub terms: usize,
    /// Verify the convolution round-trip and print the max defect
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// zeta | eta | table
    #[arg(long)]
    pub function: String,
    /// Table CSV, required for --function table
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Evaluation point "re,im"
    #[arg(long)]
    pub s: String,
}

/// Defaults loadable from a key=value file; flags win over file entries.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub digits: Option<u32>,
    pub zeros_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

pub fn parse_config_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = FileConfig::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("{}:{}: expected key = value", path.display(), i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        let bad = |what: &str| Error::InvalidArgument(format!("config key {k}: bad {what} {v:?}"));
        match k {
            "digits" => cfg.digits = Some(v.parse().map_err(|_| bad("integer"))?),
            "zeros-file" => cfg.zeros_file = Some(PathBuf::from(v)),
            "out" => cfg.out = Some(PathBuf::from(v)),
            "threads" => cfg.threads = Some(v.parse().map_err(|_| bad("integer"))?),
            _ => return Err(Error::InvalidArgument(format!("unknown config key {k:?}"))),
        }
    }
    Ok(cfg)
}

/// Fully resolved run settings after flag > config-file > default precedence.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub digits: u32,
    pub zeros_file: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub deterministic: bool,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<RunConfig> {
        let file = match &cli.config {
            Some(p) => parse_config_file(p)?,
            None => FileConfig::default(),
        };
        let digits = cli.digits.or(file.digits).unwrap_or(100);
        if digits < 30 {
            return Err(Error::InvalidArgument(format!(
                "--digits {digits} below the minimum of 30"
            )));
        }
        let out_dir = cli
            .out
            .clone()
            .or(file.out)
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(RunConfig {
            digits,
            zeros_file: cli.zeros_file.clone().or(file.zeros_file),
            out_dir,
            threads: cli.threads.or(file.threads),
            deterministic: cli.deterministic,
        })
    }

    fn zeros_path(&self) -> Result<&Path> {
        self.zeros_file
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--zeros-file is required here".into()))
    }
}

/// Zero-hunting target in the Tables 1-4 pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HuntTarget {
    /// k-th nontrivial zero, 1/2 + i gamma_k.
    Rho(usize),
    /// Trivial zero at a negative even integer.
    Trivial(i64),
    /// k-th zero 1 + 2 pi i k / ln 2 of the eta factor, k != 0.
    EtaFactor(i64),
}

impl std::fmt::Display for HuntTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HuntTarget::Rho(k) => write!(f, "rho_{k}"),
            HuntTarget::Trivial(v) => write!(f, "trivial_{v}"),
            HuntTarget::EtaFactor(k) => write!(f, "eta_{k}"),
        }
    }
}

/// Parse one --targets entry; rho supports K-L ranges.
pub fn parse_targets(spec: &str) -> Result<Vec<HuntTarget>> {
    let bad = || Error::InvalidArgument(format!("unrecognized hunt target {spec:?}"));
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "rho" => {
            let (lo, hi) = match rest.split_once('-') {
                Some((a, b)) => (
                    a.parse::<usize>().map_err(|_| bad())?,
                    b.parse::<usize>().map_err(|_| bad())?,
                ),
                None => {
                    let k = rest.parse::<usize>().map_err(|_| bad())?;
                    (k, k)
                }
            };
            if lo == 0 || hi < lo {
                return Err(bad());
            }
            Ok((lo..=hi).map(HuntTarget::Rho).collect())
        }
        "trivial" => {
            let v = rest.parse::<i64>().map_err(|_| bad())?;
            if v >= 0 || v % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "trivial zeros sit at negative even integers, got {v}"
                )));
            }
            Ok(vec![HuntTarget::Trivial(v)])
        }
        "eta" => {
            let k = rest.parse::<i64>().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::InvalidArgument(
                    "eta-factor zeros need k != 0 (k = 0 is s = 1)".into(),
                ));
            }
            Ok(vec![HuntTarget::EtaFactor(k)])
        }
        _ => Err(bad()),
    }
}

/// The point in s the target names.
pub fn target_point(t: HuntTarget, zeros: &[ZetaZero], ctx: PrecisionContext) -> Result<BigComplex> {
    match t {
        HuntTarget::Rho(k) => {
            if k == 0 || k > zeros.len() {
                return Err(Error::InsufficientZeros {
                    required: k,
                    available: zeros.len(),
                });
            }
            let half = ctx.one() / ctx.from_u64(2);
            Ok(BigComplex::new(half, zeros[k - 1].gamma.to_ctx(ctx)))
        }
        HuntTarget::Trivial(v) => Ok(BigComplex::new(ctx.from_i64(v), ctx.zero())),
        HuntTarget::EtaFactor(k) => {
            let two_pi = &ctx.pi() + &ctx.pi();
            let im = &(&two_pi * &ctx.from_i64(k)) / &ctx.ln_int(2);
            Ok(BigComplex::new(ctx.one(), im))
        }
    }
}

/// One hunted zero with its reported offset.
#[derive(Debug, Clone)]
pub struct HuntRecord {
    pub target: HuntTarget,
    pub target_s: BigComplex,
    pub root: BigComplex,
    /// Reported in the target's natural coordinate: the ordinate offset c
    /// with root = target + i c for critical-line and eta-factor targets,
    /// the plain s-plane difference for trivial targets.
    pub offset: BigComplex,
    pub residual: BigReal,
}

/// Newton-hunt one target; the root must stay within the isolation window of
/// the seed.
pub fn hunt_target(
    f: &FiniteDirichletSeries,
    target: HuntTarget,
    zeros: &[ZetaZero],
    ctx: PrecisionContext,
) -> Result<HuntRecord> {
    let target_s = target_point(target, zeros, ctx)?;
    let tol = ctx.ten_pow(-((ctx.decimal_capacity() / 2) as i64));
    let (root, residual) = series::newton_root(f, &target_s, &tol, 60)?;
    let diff = &root - &target_s;
    if diff.modulus().to_f64() > HUNT_WINDOW {
        return Err(Error::RefinementEscaped);
    }
    let offset = match target {
        // these targets run along the vertical line: report the ordinate
        // offset c, root = target + i c
        HuntTarget::Rho(_) | HuntTarget::EtaFactor(_) => {
            BigComplex::new(diff.im.clone(), -&diff.re)
        }
        HuntTarget::Trivial(_) => diff,
    };
    Ok(HuntRecord {
        target,
        target_s,
        root,
        offset,
        residual,
    })
}

/// Hunt a list of targets; per-target failures are recorded, not fatal.
pub fn hunt_all(
    f: &FiniteDirichletSeries,
    targets: &[HuntTarget],
    zeros: &[ZetaZero],
    ctx: PrecisionContext,
) -> Vec<(HuntTarget, Result<HuntRecord>)> {
    targets
        .iter()
        .map(|&t| (t, hunt_target(f, t, zeros, ctx)))
        .collect()
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut h = Sha256::new();
    h.update(&bytes);
    Ok(format!("{:x}", h.finalize()))
}

fn table_meta(cfg: &RunConfig, zeros_path: &Path) -> Result<TableMeta> {
    Ok(TableMeta {
        zero_file_sha256: Some(sha256_file(zeros_path)?),
        created: if cfg.deterministic {
            None
        } else {
            Some(timestamp())
        },
    })
}

fn timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{now}")
}

fn fmt_signed(v: &BigReal, digits: usize) -> String {
    let s = v.to_decimal_string_digits(digits);
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

fn fmt_offset(c: &BigComplex) -> String {
    format!(
        "{} {} i",
        fmt_signed(&c.re, 6),
        fmt_signed(&c.im, 6)
    )
}

fn fmt_log_height(v: &BigReal) -> String {
    format!("10^{:.1}", v.log10_abs_f64())
}

/// Dispatch a parsed command line. Output goes to `w` (stdout in `main`).
pub fn run(cli: &Cli, w: &mut impl std::io::Write) -> Result<()> {
    let cfg = RunConfig::resolve(cli)?;
    if let Some(k) = cfg.threads {
        // ignore the error when a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    match &cli.command {
        Command::Zeros { action } => cmd_zeros(&cfg, action, w),
        Command::Delta(args) => cmd_delta(&cfg, args, w),
        Command::Hunt(args) => cmd_hunt(&cfg, args, w),
        Command::Levels(args) => cmd_levels(&cfg, args, w),
        Command::Divide(args) => cmd_divide(&cfg, args, w),
        Command::Eval(args) => cmd_eval(&cfg, args, w),
    }
}

fn cmd_zeros(cfg: &RunConfig, action: &ZerosAction, w: &mut impl std::io::Write) -> Result<()> {
    let path = cfg.zeros_path()?;
    match action {
        ZerosAction::Verify => {
            let list = zeros::load_zero_file(path, 1)?;
            let mut failures = 0usize;
            for z in &list {
                let ctx = PrecisionContext::from_digits(z.verified_digits + 10);
                let residual = zeros::verify_zero(z, ctx)?;
                let bound = -(z.verified_digits as f64) + 5.0;
                let ok = residual.log10_abs_f64() < bound;
                if !ok {
                    failures += 1;
                }
                writeln!(
                    w,
                    "zero {:>4}  claimed {:>5} digits  |eta| = {}  {}",
                    z.index,
                    z.verified_digits,
                    fmt_log_height(&residual),
                    if ok { "ok" } else { "FAIL" }
                )
                .map_err(|e| Error::io(path, e))?;
            }
            if failures > 0 {
                return Err(Error::InvalidArgument(format!(
                    "{failures} ordinate(s) fail verification at their claimed digits"
                )));
            }
            Ok(())
        }
        ZerosAction::Refine { indices, out_file } => {
            let mut list = zeros::load_zero_file(path, 1)?;
            let target = cfg.digits;
            let selected: Vec<usize> = if indices.is_empty() {
                (1..=list.len()).collect()
            } else {
                indices.clone()
            };
            for &idx in &selected {
                if idx == 0 || idx > list.len() {
                    return Err(Error::InsufficientZeros {
                        required: idx,
                        available: list.len(),
                    });
                }
                let z = &mut list[idx - 1];
                z.gamma = zeros::refine_zero(&z.gamma, target)?;
                z.verified_digits = target;
                writeln!(w, "zero {idx} refined to {target} digits").map_err(|e| Error::io(path, e))?;
            }
            let dest = out_file
                .clone()
                .unwrap_or_else(|| cfg.out_dir.join("refined.txt"));
            let f = std::fs::File::create(&dest).map_err(|e| Error::io(&dest, e))?;
            let mut bw = std::io::BufWriter::new(f);
            let comment = if cfg.deterministic {
                "refined zero ordinates".to_string()
            } else {
                format!("refined zero ordinates ({})", timestamp())
            };
            zeros::write_zero_file(&mut bw, &list, &comment).map_err(|e| Error::io(&dest, e))?;
            bw.flush().map_err(|e| Error::io(&dest, e))?;
            writeln!(w, "wrote {}", dest.display()).map_err(|e| Error::io(&dest, e))?;
            Ok(())
        }
    }
}

fn cmd_delta(cfg: &RunConfig, args: &DeltaArgs, w: &mut impl std::io::Write) -> Result<()> {
    let zeros_path = cfg.zeros_path()?;
    let zero_list = zeros::load_zero_file(zeros_path, cfg.digits)?;
    let meta = table_meta(cfg, zeros_path)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;

    let tables: Vec<DeltaTable> = if args.ladder {
        let m_max = args
            .m_max
            .ok_or_else(|| Error::InvalidArgument("--ladder requires --m-max".into()))?;
        if m_max == 0 {
            return Err(Error::InvalidArgument("--m-max must be positive".into()));
        }
        if args.no_estimate {
            solver::solve_delta_ladder(&zero_list, m_max, solver::working_context(cfg.digits, m_max))?
        } else {
            solver::solve_delta_ladder_estimated(&zero_list, m_max, cfg.digits)?
        }
    } else {
        let n = args
            .n
            .ok_or_else(|| Error::InvalidArgument("--n is required (or use --ladder)".into()))?;
        if n % 2 == 0 {
            return Err(Error::InvalidArgument(format!("--n must be odd, got {n}")));
        }
        let m = (n - 1) / 2;
        let t = if args.no_estimate {
            solver::solve_delta(&zero_list, m, solver::working_context(cfg.digits, m))?
        } else {
            solver::solve_delta_estimated(&zero_list, m, cfg.digits)?
        };
        vec![t]
    };

    for t in &tables {
        let path = cfg.out_dir.join(format!("delta_{}.csv", t.n));
        solver::write_delta_table(&path, t, &meta)?;
        match t.est_digits {
            Some(est) => writeln!(
                w,
                "N = {:>5}  M = {:>4}  est {est} correct digits  -> {}",
                t.n,
                t.m,
                path.display()
            ),
            None => writeln!(w, "N = {:>5}  M = {:>4}  (no estimate)  -> {}", t.n, t.m, path.display()),
        }
        .map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn cmd_hunt(cfg: &RunConfig, args: &HuntArgs, w: &mut impl std::io::Write) -> Result<()> {
    let table = solver::read_delta_table(&args.table)?;
    let f = table.to_series();
    let ctx = table.context;
    let mut targets = Vec::new();
    for spec in &args.targets {
        targets.extend(parse_targets(spec)?);
    }
    let needs_zeros = targets.iter().any(|t| matches!(t, HuntTarget::Rho(_)));
    let zero_list = if needs_zeros {
        zeros::load_zero_file(cfg.zeros_path()?, 1)?
    } else {
        Vec::new()
    };
    let mut failures = 0usize;
    for (target, outcome) in hunt_all(&f, &targets, &zero_list, ctx) {
        match outcome {
            Ok(rec) => writeln!(
                w,
                "{:<12} offset = {}   |Delta| = {}",
                rec.target.to_string(),
                fmt_offset(&rec.offset),
                fmt_log_height(&rec.residual)
            ),
            Err(e) => {
                failures += 1;
                writeln!(w, "{:<12} failed: {e}", target.to_string())
            }
        }
        .map_err(|e| Error::io(&args.table, e))?;
    }
    if failures == targets.len() && !targets.is_empty() {
        return Err(Error::NewtonNonConvergence { max_iter: 60 });
    }
    Ok(())
}

fn cmd_levels(cfg: &RunConfig, args: &LevelsArgs, w: &mut impl std::io::Write) -> Result<()> {
    let table = solver::read_delta_table(&args.table)?;
    let n_max = table.n as u64;
    let window = args.window.unwrap_or(n_max).min(n_max);
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;

    let points = analysis::level_table(&table, n_max)?;
    let csv = cfg.out_dir.join(format!("levels_{}.csv", table.n));
    analysis::export_plot_data(&points, &csv)?;
    writeln!(w, "wrote {}", csv.display()).map_err(|e| Error::io(&csv, e))?;

    let report = analysis::band_report(&points, window, args.include_primes)?;
    writeln!(
        w,
        "window n <= {window}: {} floored and {} prime points excluded",
        report.excluded_floored, report.excluded_prime
    )
    .map_err(|e| Error::io(&csv, e))?;
    for b in &report.bands {
        writeln!(
            w,
            "level {:>3}  count {:>4}  min {:+10.4}  mean {:+10.4}  max {:+10.4}",
            b.level, b.count, b.min, b.mean, b.max
        )
        .map_err(|e| Error::io(&csv, e))?;
    }
    for (p, q, sep) in &report.separations {
        writeln!(
            w,
            "bands ({p}, {q}): {}",
            if *sep { "separated" } else { "overlapping" }
        )
        .map_err(|e| Error::io(&csv, e))?;
    }

    if let Some(d) = args.sublevel {
        let sub = analysis::sublevel_table(&table, d, n_max)?;
        let sub_csv = cfg.out_dir.join(format!("sublevels_{}_d{}.csv", table.n, d));
        analysis::export_sublevel_plot_data(&sub, &sub_csv)?;
        writeln!(w, "wrote {}", sub_csv.display()).map_err(|e| Error::io(&sub_csv, e))?;
    }
    Ok(())
}

fn cmd_divide(cfg: &RunConfig, args: &DivideArgs, w: &mut impl std::io::Write) -> Result<()> {
    let table = solver::read_delta_table(&args.table)?;
    let f = table.to_series();
    let mu = series::dirichlet_divide(&f, args.terms)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let path = cfg
        .out_dir
        .join(format!("mu_{}_L{}.csv", table.n, args.terms));
    let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut bw = std::io::BufWriter::new(file);
    series::write_coeff_csv(&mut bw, "mu", &mu.mu).map_err(|e| Error::io(&path, e))?;
    bw.flush().map_err(|e| Error::io(&path, e))?;
    writeln!(w, "wrote {}", path.display()).map_err(|e| Error::io(&path, e))?;

    if args.check {
        let ctx = table.context;
        let mut max_defect = ctx.zero();
        for n in 1..=args.terms {
            let mut conv = ctx.zero();
            for d in 1..=n {
                if n % d == 0 {
                    conv += mu.coeff(d);
                }
            }
            let expect = if n <= table.n {
                table.coeff(n).clone()
            } else {
                ctx.zero()
            };
            let defect = (&conv - &expect).abs();
            if defect > max_defect {
                max_defect = defect;
            }
        }
        writeln!(
            w,
            "round-trip max defect over n <= {}: {}",
            args.terms,
            if max_defect.is_zero() {
                "0 (exact)".to_string()
            } else {
                fmt_log_height(&max_defect)
            }
        )
        .map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn parse_point(s: &str, ctx: PrecisionContext) -> Result<BigComplex> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("expected \"re,im\", got {s:?}")))?;
    Ok(BigComplex::new(
        BigReal::parse_decimal(re, ctx)?,
        BigReal::parse_decimal(im, ctx)?,
    ))
}

fn cmd_eval(cfg: &RunConfig, args: &EvalArgs, w: &mut impl std::io::Write) -> Result<()> {
    let ctx = PrecisionContext::from_digits(cfg.digits + 10);
    let s = parse_point(&args.s, ctx)?;
    let v = match args.function.as_str() {
        "zeta" => series::zeta(&s, ctx)?,
        "eta" => series::eta(&s, ctx)?,
        "table" => {
            let path = args
                .table
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--function table needs --table".into()))?;
            let table = solver::read_delta_table(path)?;
            series::evaluate(&table.to_series(), &s.to_ctx(table.context)).to_ctx(ctx)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown function {other:?}; use zeta, eta, or table"
            )))
        }
    };
    let digits = cfg.digits as usize;
    writeln!(
        w,
        "re = {}\nim = {}",
        v.re.to_decimal_string_digits(digits),
        v.im.to_decimal_string_digits(digits)
    )
    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(())
}
