//! Build and solve the interpolation systems defining the series
//! coefficients: per-M Gauss elimination with partial pivoting, the
//! single-elimination ladder harvesting every leading principal subsystem,
//! a small-M complex determinant oracle, and dual-precision accuracy
//! estimation.

use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{agreement_digits, pow_int_neg_s, BigComplex, BigReal, PrecisionContext};
use crate::series::FiniteDirichletSeries;
use crate::zeros::ZetaZero;

/// Solved coefficients of one series, with provenance.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    /// Series length, odd: N = 2M + 1.
    pub n: usize,
    /// Zero count the system was built from.
    pub m: usize,
    coeffs: Vec<BigReal>,
    pub context: PrecisionContext,
    pub est_digits: Option<u32>,
}

impl DeltaTable {
    fn from_solution(m: usize, mut tail: Vec<BigReal>, ctx: PrecisionContext) -> Self {
        let mut coeffs = Vec::with_capacity(2 * m + 1);
        coeffs.push(ctx.one());
        coeffs.append(&mut tail);
        DeltaTable {
            n: 2 * m + 1,
            m,
            coeffs,
            context: ctx,
            est_digits: None,
        }
    }

    /// Assemble a table from raw coefficients: odd length, leading 1.
    pub fn from_coeffs(coeffs: Vec<BigReal>) -> Result<DeltaTable> {
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "coefficient count {} is not odd",
                coeffs.len()
            )));
        }
        let ctx = coeffs[0].ctx();
        if coeffs[0] != ctx.one() {
            return Err(Error::InvalidArgument(
                "leading coefficient must be exactly 1".into(),
            ));
        }
        Ok(DeltaTable {
            n: coeffs.len(),
            m: (coeffs.len() - 1) / 2,
            coeffs,
            context: ctx,
            est_digits: None,
        })
    }

    /// 1-based coefficient access; coeff(1) is exactly 1.
    pub fn coeff(&self, n: usize) -> &BigReal {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn to_series(&self) -> FiniteDirichletSeries {
        FiniteDirichletSeries::new(self.coeffs.clone())
    }
}

/// The 2M x 2M real system whose solution is the coefficient tail.
///
/// Unknowns are ordered n = 2, 3, ...; equations are ordered
/// (cos of gamma_1, sin of gamma_1, cos of gamma_2, ...) so that the leading
/// principal 2M x 2M block is exactly the M-zero system.
#[derive(Debug, Clone)]
pub struct RealSystem {
    pub m: usize,
    pub ctx: PrecisionContext,
    rows: Vec<Vec<BigReal>>,
    rhs: Vec<BigReal>,
}

impl RealSystem {
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigReal {
        &self.rows[row][col]
    }

    pub fn rhs(&self, row: usize) -> &BigReal {
        &self.rhs[row]
    }
}

fn check_zero_inputs(zeros: &[ZetaZero], m: usize, ctx: PrecisionContext) -> Result<()> {
    if zeros.len() < m {
        return Err(Error::InsufficientZeros {
            required: m,
            available: zeros.len(),
        });
    }
    let required = (ctx.decimal_capacity() as f64 * 0.9).ceil() as u32;
    for z in &zeros[..m] {
        if z.verified_digits < required {
            return Err(Error::InsufficientZeroPrecision {
                index: z.index,
                verified: z.verified_digits,
                required,
            });
        }
    }
    Ok(())
}

/// Real cos/sin form of the vanishing conditions, the n = 1 term moved to
/// the right-hand side.
pub fn build_system(zeros: &[ZetaZero], m: usize, ctx: PrecisionContext) -> Result<RealSystem> {
    check_zero_inputs(zeros, m, ctx)?;
    let dim = 2 * m;
    let mut rows = vec![Vec::with_capacity(dim); dim];
    let gammas: Vec<BigReal> = zeros[..m].iter().map(|z| z.gamma.to_ctx(ctx)).collect();
    for col in 0..dim {
        let n = col as u64 + 2;
        let ln_n = ctx.ln_int(n);
        let rsqrt = ctx.from_u64(n).recip_sqrt();
        for (k, gamma) in gammas.iter().enumerate() {
            let (sin, cos) = (gamma * &ln_n).sin_cos();
            rows[2 * k].push(&cos * &rsqrt);
            rows[2 * k + 1].push(&sin * &rsqrt);
        }
    }
    let mut rhs = Vec::with_capacity(dim);
    for _ in 0..m {
        rhs.push(-ctx.one());
        rhs.push(ctx.zero());
    }
    Ok(RealSystem { m, ctx, rows, rhs })
}

fn pivot_threshold(ctx: PrecisionContext) -> BigReal {
    ctx.ten_pow(-(ctx.decimal_capacity() as i64) + 10)
}

/// One elimination step on column `c`: subtract multiples of row `c` from
/// every row below. Row updates are independent, so the parallel schedule
/// cannot change any result bit.
fn eliminate_column(rows: &mut [Vec<BigReal>], rhs: &mut [BigReal], c: usize) {
    let (upper, lower) = rows.split_at_mut(c + 1);
    let (rhs_upper, rhs_lower) = rhs.split_at_mut(c + 1);
    let prow = &upper[c];
    let prhs = &rhs_upper[c];
    let pivot = prow[c].clone();
    lower
        .par_iter_mut()
        .zip(rhs_lower.par_iter_mut())
        .for_each(|(row, r)| {
            if row[c].is_zero() {
                return;
            }
            let factor = &row[c] / &pivot;
            for j in c..row.len() {
                let t = &factor * &prow[j];
                row[j] -= &t;
            }
            let t = &factor * prhs;
            *r -= &t;
        });
}

fn back_substitute(rows: &[Vec<BigReal>], rhs: &[BigReal], dim: usize, ctx: PrecisionContext) -> Vec<BigReal> {
    let mut x = vec![ctx.zero(); dim];
    for r in (0..dim).rev() {
        let mut acc = rhs[r].clone();
        for j in (r + 1)..dim {
            let t = &rows[r][j] * &x[j];
            acc -= &t;
        }
        x[r] = &acc / &rows[r][r];
    }
    x
}

/// Gauss elimination with partial (row) pivoting, then back-substitution.
/// Deterministic: identical bits for identical inputs at any thread count.
pub fn solve_delta(zeros: &[ZetaZero], m: usize, ctx: PrecisionContext) -> Result<DeltaTable> {
    if m == 0 {
        return Ok(DeltaTable::from_solution(0, Vec::new(), ctx));
    }
    let sys = build_system(zeros, m, ctx)?;
    let dim = sys.dim();
    let mut rows = sys.rows;
    let mut rhs = sys.rhs;
    let threshold = pivot_threshold(ctx);
    for c in 0..dim {
        let mut best = c;
        for r in (c + 1)..dim {
            if rows[r][c].abs() > rows[best][c].abs() {
                best = r;
            }
        }
        if rows[best][c].abs() < threshold {
            return Err(Error::SingularSystem {
                capacity: ctx.decimal_capacity(),
            });
        }
        rows.swap(c, best);
        rhs.swap(c, best);
        if c + 1 < dim {
            eliminate_column(&mut rows, &mut rhs, c);
        }
    }
    let x = back_substitute(&rows, &rhs, dim, ctx);
    Ok(DeltaTable::from_solution(m, x, ctx))
}

/// One no-pivot elimination over the largest system, harvesting the solution
/// of every even-sized leading principal block along the way.
pub fn solve_delta_ladder(
    zeros: &[ZetaZero],
    m_max: usize,
    ctx: PrecisionContext,
) -> Result<Vec<DeltaTable>> {
    if m_max == 0 {
        return Ok(vec![DeltaTable::from_solution(0, Vec::new(), ctx)]);
    }
    let sys = build_system(zeros, m_max, ctx)?;
    let dim = sys.dim();
    let mut rows = sys.rows;
    let mut rhs = sys.rhs;
    let threshold = pivot_threshold(ctx);
    for c in 0..dim {
        if rows[c][c].abs() < threshold {
            return Err(Error::LadderBreakdown {
                failing_m: c / 2 + 1,
            });
        }
        if c + 1 < dim {
            eliminate_column(&mut rows, &mut rhs, c);
        }
    }
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let x = back_substitute(&rows, &rhs, 2 * m, ctx);
        out.push(DeltaTable::from_solution(m, x, ctx));
    }
    Ok(out)
}

/// Complex ratios per the bordered-determinant form: entry (i, 2k) is
/// i^(-conj rho_k), entry (i, 2k+1) is i^(-rho_k); coefficient n is
/// (-1)^(n+1) times the determinant with row n deleted, normalized by the
/// n = 1 determinant.
pub fn cramer_delta_ratios(
    zeros: &[ZetaZero],
    m: usize,
    ctx: PrecisionContext,
) -> Result<Vec<BigComplex>> {
    if m > 4 {
        return Err(Error::CramerTooLarge { m });
    }
    check_zero_inputs(zeros, m, ctx)?;
    let n_len = 2 * m + 1;
    if m == 0 {
        return Ok(vec![BigComplex::new(ctx.one(), ctx.zero())]);
    }
    let half = ctx.one() / ctx.from_u64(2);
    let mut grid: Vec<Vec<BigComplex>> = Vec::with_capacity(n_len);
    for i in 1..=n_len as u64 {
        let mut row = Vec::with_capacity(2 * m);
        for z in &zeros[..m] {
            let rho = BigComplex::new(half.clone(), z.gamma.to_ctx(ctx));
            let v = pow_int_neg_s(i, &rho, ctx);
            row.push(v.conj()); // i^(-conj rho)
            row.push(v);
        }
        grid.push(row);
    }
    let mut tilde = Vec::with_capacity(n_len);
    for del in 0..n_len {
        let minor: Vec<&[BigComplex]> = grid
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != del)
            .map(|(_, r)| r.as_slice())
            .collect();
        let mut d = det(&minor, &(0..2 * m).collect::<Vec<_>>(), ctx);
        if del % 2 == 1 {
            // (-1)^(n+1) with n = del + 1
            d = -&d;
        }
        tilde.push(d);
    }
    let lead = tilde[0].clone();
    if lead.modulus() < pivot_threshold(ctx) {
        return Err(Error::CramerBreakdown);
    }
    Ok(tilde.iter().map(|t| t / &lead).collect())
}

/// Independent small-M oracle for `solve_delta`, real parts of the
/// determinant ratios.
pub fn cramer_delta_small(zeros: &[ZetaZero], m: usize, ctx: PrecisionContext) -> Result<DeltaTable> {
    let ratios = cramer_delta_ratios(zeros, m, ctx)?;
    let tail = ratios[1..].iter().map(|r| r.re.clone()).collect();
    Ok(DeltaTable::from_solution(m, tail, ctx))
}

/// Cofactor expansion along the first remaining row.
fn det(rows: &[&[BigComplex]], cols: &[usize], ctx: PrecisionContext) -> BigComplex {
    if cols.len() == 1 {
        return rows[0][cols[0]].clone();
    }
    let mut acc = BigComplex::zero(ctx);
    for (i, &c) in cols.iter().enumerate() {
        let sub_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&cc| cc != c)
            .collect();
        let term = &rows[0][c] * &det(&rows[1..], &sub_cols, ctx);
        if i % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Per-coefficient agreement between two solves of the same system at
/// different precisions.
#[derive(Debug, Clone)]
pub struct AccuracyReport {
    /// Agreement digit count for coefficients n = 1..N.
    pub per_coefficient: Vec<u32>,
    /// Minimum over n; stored into the coarser table.
    pub summary: u32,
}

/// Compare a table against a rerun at no less than twice the precision and
/// store the resulting correct-digit estimate into the coarser table.
pub fn estimate_accuracy(coarse: &mut DeltaTable, fine: &DeltaTable) -> Result<AccuracyReport> {
    if coarse.n != fine.n {
        return Err(Error::MismatchedTables {
            n1: coarse.n,
            n2: fine.n,
        });
    }
    if fine.context.bits() < 2 * coarse.context.bits() {
        return Err(Error::EstimatePrecisionRatio {
            coarse: coarse.context.bits(),
            fine: fine.context.bits(),
        });
    }
    let per_coefficient: Vec<u32> = (1..=coarse.n)
        .map(|n| agreement_digits(coarse.coeff(n), fine.coeff(n)))
        .collect();
    let summary = per_coefficient.iter().copied().min().unwrap();
    coarse.est_digits = Some(summary);
    Ok(AccuracyReport {
        per_coefficient,
        summary,
    })
}

/// Working precision for a requested output precision: guard digits grow
/// with the system size to absorb elimination cancellation.
pub fn working_context(digits: u32, m: usize) -> PrecisionContext {
    PrecisionContext::from_digits(digits + 10 + 2 * m as u32)
}

/// Safety margin subtracted from companion-derived accuracy estimates.
const EST_SAFETY_MARGIN: u32 = 5;

fn apply_companion_estimate(
    main: &mut DeltaTable,
    companion: &mut DeltaTable,
) -> Result<()> {
    let report = estimate_accuracy(companion, main)?;
    // digits lost to cancellation, measured at the companion's precision and
    // assumed precision-independent; a small safety margin absorbs pathway
    // differences (pivoted vs ladder elimination order)
    let loss = companion
        .context
        .decimal_capacity()
        .saturating_sub(report.summary)
        + EST_SAFETY_MARGIN;
    main.est_digits = Some(main.context.decimal_capacity().saturating_sub(loss));
    Ok(())
}

/// Solve at guarded working precision and estimate correct digits via an
/// automatic companion run at half the working precision.
pub fn solve_delta_estimated(zeros: &[ZetaZero], m: usize, digits: u32) -> Result<DeltaTable> {
    let main_ctx = working_context(digits, m);
    let comp_ctx = PrecisionContext::from_bits((main_ctx.bits() / 2).max(64));
    let mut main = solve_delta(zeros, m, main_ctx)?;
    let mut comp = solve_delta(zeros, m, comp_ctx)?;
    apply_companion_estimate(&mut main, &mut comp)?;
    Ok(main)
}

/// Ladder variant of `solve_delta_estimated`: every harvested table gets its
/// own companion-derived estimate.
pub fn solve_delta_ladder_estimated(
    zeros: &[ZetaZero],
    m_max: usize,
    digits: u32,
) -> Result<Vec<DeltaTable>> {
    let main_ctx = working_context(digits, m_max);
    let comp_ctx = PrecisionContext::from_bits((main_ctx.bits() / 2).max(64));
    let mut mains = solve_delta_ladder(zeros, m_max, main_ctx)?;
    let mut comps = solve_delta_ladder(zeros, m_max, comp_ctx)?;
    for (main, comp) in mains.iter_mut().zip(comps.iter_mut()) {
        apply_companion_estimate(main, comp)?;
    }
    Ok(mains)
}

/// Sidecar metadata written next to each table CSV.
#[derive(Debug, Clone, Default)]
pub struct TableMeta {
    pub zero_file_sha256: Option<String>,
    pub created: Option<String>,
}

pub fn write_delta_table(path: &Path, table: &DeltaTable, meta: &TableMeta) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    crate::series::write_coeff_csv(&mut w, "delta", table.coeffs()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))?;

    let meta_path = meta_path_for(path);
    let mut m = String::new();
    m.push_str(&format!("N = {}\n", table.n));
    m.push_str(&format!("M = {}\n", table.m));
    m.push_str(&format!("precision_bits = {}\n", table.context.bits()));
    if let Some(est) = table.est_digits {
        m.push_str(&format!("est_digits = {est}\n"));
    }
    if let Some(d) = &meta.zero_file_sha256 {
        m.push_str(&format!("zero_file_sha256 = {d}\n"));
    }
    if let Some(c) = &meta.created {
        m.push_str(&format!("created = {c}\n"));
    }
    m.push_str(&format!(
        "generator = zetadelta {}\n",
        env!("CARGO_PKG_VERSION")
    ));
    std::fs::write(&meta_path, m).map_err(|e| Error::io(&meta_path, e))?;
    Ok(())
}

pub fn meta_path_for(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".meta");
    os.into()
}

pub fn read_delta_table(path: &Path) -> Result<DeltaTable> {
    let meta_path = meta_path_for(path);
    let meta_text = std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let mut n = None;
    let mut m = None;
    let mut bits = None;
    let mut est = None;
    for line in meta_text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            let (k, v) = (k.trim(), v.trim());
            match k {
                "N" => n = v.parse::<usize>().ok(),
                "M" => m = v.parse::<usize>().ok(),
                "precision_bits" => bits = v.parse::<u32>().ok(),
                "est_digits" => est = v.parse::<u32>().ok(),
                _ => {}
            }
        }
    }
    let (n, m, bits) = match (n, m, bits) {
        (Some(n), Some(m), Some(b)) => (n, m, b),
        _ => {
            return Err(Error::MalformedTable {
                path: path.to_path_buf(),
                reason: "sidecar missing N, M, or precision_bits".into(),
            })
        }
    };
    let ctx = PrecisionContext::from_bits(bits);
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let coeffs = crate::series::read_coeff_csv(std::io::BufReader::new(f), ctx)?;
    if coeffs.len() != n || n != 2 * m + 1 {
        return Err(Error::MalformedTable {
            path: path.to_path_buf(),
            reason: format!("coefficient count {} does not match N = {n}", coeffs.len()),
        });
    }
    if coeffs[0] != ctx.one() {
        return Err(Error::MalformedTable {
            path: path.to_path_buf(),
            reason: "leading coefficient is not 1".into(),
        });
    }
    Ok(DeltaTable {
        n,
        m,
        coeffs,
        context: ctx,
        est_digits: est,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::refine_zero;

    fn test_zeros(count: usize, digits: u32) -> Vec<ZetaZero> {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/gamma_seeds_40.txt");
        let seeds = std::fs::read_to_string(path).unwrap();
        let ctx = PrecisionContext::from_digits(42);
        seeds
            .lines()
            .filter(|l| !l.starts_with('#'))
            .take(count)
            .enumerate()
            .map(|(i, l)| {
                let seed = BigReal::parse_decimal(l.trim(), ctx).unwrap();
                let gamma = refine_zero(&seed, digits).unwrap();
                ZetaZero {
                    index: i + 1,
                    gamma,
                    verified_digits: digits,
                    source: "refined".into(),
                }
            })
            .collect()
    }

    #[test]
    fn build_system_m1_entries() {
        let zeros = test_zeros(1, 50);
        let ctx = PrecisionContext::from_digits(50);
        let sys = build_system(&zeros, 1, ctx).unwrap();
        assert_eq!(sys.dim(), 2);
        let g = zeros[0].gamma.to_ctx(ctx);
        let e00 = (&g * &ctx.ln_int(2)).cos() / ctx.from_u64(2).sqrt();
        let e10 = (&g * &ctx.ln_int(2)).sin() / ctx.from_u64(2).sqrt();
        assert!(agreement_digits(sys.entry(0, 0), &e00) >= 45);
        assert!(agreement_digits(sys.entry(1, 0), &e10) >= 45);
        assert_eq!(sys.rhs(0), &-ctx.one());
        assert!(sys.rhs(1).is_zero());
    }

    #[test]
    fn solve_m0_is_unit_table() {
        let ctx = PrecisionContext::from_digits(40);
        let t = solve_delta(&[], 0, ctx).unwrap();
        assert_eq!(t.n, 1);
        assert_eq!(t.coeff(1), &ctx.one());
    }

    #[test]
    fn solve_m1_matches_cramer() {
        let zeros = test_zeros(1, 60);
        let ctx = PrecisionContext::from_digits(60);
        let a = solve_delta(&zeros, 1, ctx).unwrap();
        let b = cramer_delta_small(&zeros, 1, ctx).unwrap();
        for n in 1..=3 {
            assert!(
                agreement_digits(a.coeff(n), b.coeff(n)) >= 45,
                "n = {n}: {} vs {}",
                a.coeff(n),
                b.coeff(n)
            );
        }
    }

    #[test]
    fn solve_m2_matches_cramer() {
        let zeros = test_zeros(2, 60);
        let ctx = PrecisionContext::from_digits(60);
        let a = solve_delta(&zeros, 2, ctx).unwrap();
        let b = cramer_delta_small(&zeros, 2, ctx).unwrap();
        for n in 1..=5 {
            assert!(agreement_digits(a.coeff(n), b.coeff(n)) >= 48, "n = {n}");
        }
    }

    #[test]
    fn cramer_ratios_are_real() {
        let zeros = test_zeros(2, 60);
        let ctx = PrecisionContext::from_digits(60);
        let ratios = cramer_delta_ratios(&zeros, 2, ctx).unwrap();
        for (i, r) in ratios.iter().enumerate() {
            let rel = r.im.abs().log10_abs_f64() - r.re.abs().log10_abs_f64();
            assert!(
                r.im.is_zero() || rel < -(ctx.decimal_capacity() as f64) + 12.0,
                "ratio {i} imaginary part too large: 10^{rel}"
            );
        }
    }

    #[test]
    fn ladder_matches_standalone() {
        let zeros = test_zeros(4, 70);
        let ctx = PrecisionContext::from_digits(70);
        let ladder = solve_delta_ladder(&zeros, 4, ctx).unwrap();
        assert_eq!(ladder.len(), 4);
        for (i, t) in ladder.iter().enumerate() {
            let m = i + 1;
            let standalone = solve_delta(&zeros, m, ctx).unwrap();
            assert_eq!(t.n, 2 * m + 1);
            for n in 1..=t.n {
                assert!(
                    agreement_digits(t.coeff(n), standalone.coeff(n))
                        >= ctx.decimal_capacity() - 15,
                    "M = {m}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn ladder_m1_equals_solve() {
        let zeros = test_zeros(1, 60);
        let ctx = PrecisionContext::from_digits(60);
        let ladder = solve_delta_ladder(&zeros, 1, ctx).unwrap();
        let standalone = solve_delta(&zeros, 1, ctx).unwrap();
        for n in 1..=3 {
            assert!(agreement_digits(ladder[0].coeff(n), standalone.coeff(n)) >= 55);
        }
    }

    #[test]
    fn zero_order_does_not_change_solution() {
        let mut zeros = test_zeros(3, 70);
        let ctx = PrecisionContext::from_digits(70);
        let a = solve_delta(&zeros, 3, ctx).unwrap();
        zeros.swap(0, 2);
        zeros.swap(1, 2);
        let b = solve_delta(&zeros, 3, ctx).unwrap();
        for n in 1..=7 {
            assert!(agreement_digits(a.coeff(n), b.coeff(n)) >= 50, "n = {n}");
        }
    }

    #[test]
    fn estimate_accuracy_identical_tables() {
        let zeros = test_zeros(1, 120);
        let coarse_ctx = PrecisionContext::from_digits(50);
        let fine_ctx = PrecisionContext::from_bits(coarse_ctx.bits() * 2);
        let mut a = solve_delta(&zeros, 1, coarse_ctx).unwrap();
        let b = solve_delta(&zeros, 1, fine_ctx).unwrap();
        let report = estimate_accuracy(&mut a, &b).unwrap();
        assert!(report.summary >= 40, "summary {}", report.summary);
        assert_eq!(a.est_digits, Some(report.summary));
        // n = 1 always agrees in full
        assert_eq!(report.per_coefficient[0], coarse_ctx.decimal_capacity());
    }

    #[test]
    fn estimate_accuracy_rejects_close_precisions() {
        let ctx = PrecisionContext::from_digits(50);
        let mut a = solve_delta(&[], 0, ctx).unwrap();
        let b = solve_delta(&[], 0, ctx).unwrap();
        assert!(matches!(
            estimate_accuracy(&mut a, &b),
            Err(Error::EstimatePrecisionRatio { .. })
        ));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let zeros = test_zeros(3, 70);
        let ctx = PrecisionContext::from_digits(70);
        let solve_with = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| solve_delta(&zeros, 3, ctx).unwrap())
        };
        let a = solve_with(1);
        let b = solve_with(4);
        for n in 1..=7 {
            assert_eq!(a.coeff(n), b.coeff(n), "n = {n}");
        }
    }

    #[test]
    fn table_csv_round_trip() {
        let zeros = test_zeros(2, 60);
        let ctx = PrecisionContext::from_digits(60);
        let mut t = solve_delta(&zeros, 2, ctx).unwrap();
        t.est_digits = Some(44);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("delta_5.csv");
        write_delta_table(&path, &t, &TableMeta::default()).unwrap();
        let back = read_delta_table(&path).unwrap();
        assert_eq!(back.n, 5);
        assert_eq!(back.m, 2);
        assert_eq!(back.est_digits, Some(44));
        for n in 1..=5 {
            assert_eq!(back.coeff(n), t.coeff(n), "n = {n}");
        }
    }
}
