//! Finite Dirichlet series algebra: evaluation, differentiation, Newton
//! root-finding, reference evaluation of the alternating zeta function, and
//! formal division by the all-ones series.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numerics::{pow_int_neg_s, BigComplex, BigReal, PrecisionContext};

/// Maximum |Im s| the alternating-series acceleration is budgeted for.
pub const ETA_HEIGHT_BUDGET: f64 = 400.0;

/// Sum a_n n^(-s), n = 1..N, real coefficients.
#[derive(Debug, Clone)]
pub struct FiniteDirichletSeries {
    coeffs: Vec<BigReal>,
}

impl FiniteDirichletSeries {
    pub fn new(coeffs: Vec<BigReal>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        FiniteDirichletSeries { coeffs }
    }

    /// The truncated zeta series: all coefficients 1.
    pub fn all_ones(n: usize, ctx: PrecisionContext) -> Self {
        Self::new(vec![ctx.one(); n])
    }

    /// Exact alternating coefficients (1, -1, 1, ...).
    pub fn alternating(n: usize, ctx: PrecisionContext) -> Self {
        Self::new(
            (1..=n)
                .map(|k| if k % 2 == 1 { ctx.one() } else { -ctx.one() })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based coefficient access.
    pub fn coeff(&self, n: usize) -> &BigReal {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }
}

/// Coefficients of the formal quotient of a series by the all-ones series.
#[derive(Debug, Clone)]
pub struct MuTable {
    /// N of the series the table derives from.
    pub source_n: usize,
    pub mu: Vec<BigReal>,
}

impl MuTable {
    pub fn terms(&self) -> usize {
        self.mu.len()
    }

    /// 1-based access.
    pub fn coeff(&self, n: usize) -> &BigReal {
        &self.mu[n - 1]
    }
}

/// Sum over n of a_n n^(-s), in increasing n, at the precision of `s`.
pub fn evaluate(f: &FiniteDirichletSeries, s: &BigComplex) -> BigComplex {
    let ctx = s.ctx();
    let mut acc = BigComplex::zero(ctx);
    for (i, a) in f.coeffs.iter().enumerate() {
        let term = pow_int_neg_s(i as u64 + 1, s, ctx).scale(&a.to_ctx(ctx));
        acc = &acc + &term;
    }
    acc
}

/// d/ds of `evaluate`: -sum a_n ln(n) n^(-s).
pub fn evaluate_derivative(f: &FiniteDirichletSeries, s: &BigComplex) -> BigComplex {
    let ctx = s.ctx();
    let mut acc = BigComplex::zero(ctx);
    for (i, a) in f.coeffs.iter().enumerate().skip(1) {
        let n = i as u64 + 1;
        let w = -&(&a.to_ctx(ctx) * &ctx.ln_int(n));
        let term = pow_int_neg_s(n, s, ctx).scale(&w);
        acc = &acc + &term;
    }
    acc
}

fn ln_acceleration_base() -> f64 {
    // 3 + sqrt(8)
    (3.0 + 8.0_f64.sqrt()).ln()
}

fn eta_term_count(cap: u32, t_abs: f64) -> usize {
    let target = ((cap as f64) - 5.0).max(1.0) * std::f64::consts::LN_10;
    let inflation = t_abs * std::f64::consts::FRAC_PI_2 + (1.0 + 2.0 * t_abs).ln();
    ((target + inflation) / ln_acceleration_base()).ceil() as usize + 10
}

/// Alternating zeta function via Chebyshev-coefficient series acceleration,
/// with the per-term bound 3/(3+sqrt 8)^M inflated by exp(|Im s| pi/2) growth.
pub fn eta(s: &BigComplex, ctx: PrecisionContext) -> Result<BigComplex> {
    eta_kernel(s, ctx, false, ETA_HEIGHT_BUDGET).map(|(v, _)| v)
}

/// Eta and its derivative in one pass over the accelerated sum.
pub fn eta_with_derivative(s: &BigComplex, ctx: PrecisionContext) -> Result<(BigComplex, BigComplex)> {
    eta_with_derivative_budget(s, ctx, ETA_HEIGHT_BUDGET)
}

/// `eta_with_derivative` with an explicit height budget. The acceleration's
/// error bound holds at any height (the term count grows with |Im s| to
/// compensate); the budget only caps runaway cost, and callers that know
/// their target ordinate may raise it.
pub fn eta_with_derivative_budget(
    s: &BigComplex,
    ctx: PrecisionContext,
    budget: f64,
) -> Result<(BigComplex, BigComplex)> {
    let (v, d) = eta_kernel(s, ctx, true, budget)?;
    Ok((v, d.expect("derivative requested")))
}

fn eta_kernel(
    s: &BigComplex,
    ctx: PrecisionContext,
    want_derivative: bool,
    budget: f64,
) -> Result<(BigComplex, Option<BigComplex>)> {
    let t_abs = s.im.to_f64().abs();
    if t_abs > budget {
        return Err(Error::EtaBudgetExceeded {
            height: t_abs,
            budget,
        });
    }
    let terms = eta_term_count(ctx.decimal_capacity(), t_abs);
    let wbits = ctx.bits() + 32 + (terms as f64).log2().ceil() as u32;
    let wctx = PrecisionContext::from_bits(wbits);
    let s_w = s.to_ctx(wctx);

    // d = ((3+sqrt 8)^n + (3+sqrt 8)^(-n)) / 2
    let base = wctx.from_u64(3) + wctx.from_u64(8).sqrt();
    let mut d = wctx.one();
    let mut p = base.clone();
    let mut e = terms;
    while e > 0 {
        if e & 1 == 1 {
            d = &d * &p;
        }
        p = p.square();
        e >>= 1;
    }
    let d = (&d + &(wctx.one() / &d)) / wctx.from_u64(2);

    let mut b = -wctx.one();
    let mut c = -&d;
    let mut sum = BigComplex::zero(wctx);
    let mut dsum = BigComplex::zero(wctx);
    let half = wctx.one() / wctx.from_u64(2);
    for k in 0..terms as u64 {
        c = &b - &c;
        let a_k = pow_int_neg_s(k + 1, &s_w, wctx);
        sum = &sum + &a_k.scale(&c);
        if want_derivative && k > 0 {
            let w = -&(&c * &wctx.ln_int(k + 1));
            dsum = &dsum + &a_k.scale(&w);
        }
        let num = &wctx.from_u64(k + terms as u64) * &(wctx.from_u64(k) - wctx.from_u64(terms as u64));
        let den = &(wctx.from_u64(k) + half.clone()) * &wctx.from_u64(k + 1);
        b = &(&b * &num) / &den;
    }
    let inv_d = wctx.one() / &d;
    let value = sum.scale(&inv_d).to_ctx(ctx);
    let deriv = if want_derivative {
        Some(dsum.scale(&inv_d).to_ctx(ctx))
    } else {
        None
    };
    Ok((value, deriv))
}

/// zeta(s) = eta(s) / (1 - 2*2^(-s)).
pub fn zeta(s: &BigComplex, ctx: PrecisionContext) -> Result<BigComplex> {
    let near = |x: f64, y: f64| (x - y).abs() < 1e-10;
    if near(s.re.to_f64(), 1.0) && near(s.im.to_f64(), 0.0) {
        return Err(Error::ZetaPole);
    }
    let wctx = PrecisionContext::from_bits(ctx.bits() + 32);
    let s_w = s.to_ctx(wctx);
    let two_pow = pow_int_neg_s(2, &s_w, wctx).scale(&wctx.from_u64(2));
    let denom = &BigComplex::new(wctx.one(), wctx.zero()) - &two_pow;
    if denom.modulus().to_f64() < 1e-10 {
        return Err(Error::NearEtaFactorZero);
    }
    let num = eta(&s_w, wctx)?;
    Ok((&num / &denom).to_ctx(ctx))
}

/// Newton iteration on a finite Dirichlet series from the seed `s0`.
///
/// Returns the first iterate whose step is below `tol` together with the
/// modulus of the series there. Convergence to the root nearest the seed is
/// not guaranteed; the caller validates proximity.
pub fn newton_root(
    f: &FiniteDirichletSeries,
    s0: &BigComplex,
    tol: &BigReal,
    max_iter: usize,
) -> Result<(BigComplex, BigReal)> {
    let ctx = s0.ctx();
    let breakdown = ctx.ten_pow(-(ctx.decimal_capacity() as i64) + 10);
    let mut s = s0.clone();
    for _ in 0..max_iter {
        let fp = evaluate_derivative(f, &s);
        if fp.modulus() < breakdown {
            return Err(Error::DerivativeBreakdown);
        }
        let step = &evaluate(f, &s) / &fp;
        s = &s - &step;
        if step.modulus() < tol.to_ctx(ctx) {
            let residual = evaluate(f, &s).modulus();
            return Ok((s, residual));
        }
    }
    Err(Error::NewtonNonConvergence { max_iter })
}

/// Formal division by the all-ones series: the recursion inverting
/// sum over d|n of mu_d = delta_n, with delta_n = 0 beyond the series length.
pub fn dirichlet_divide(delta: &FiniteDirichletSeries, terms: usize) -> Result<MuTable> {
    if terms == 0 {
        return Err(Error::InvalidArgument("term count must be positive".into()));
    }
    let ctx = delta.coeff(1).ctx();
    if delta.coeff(1) != &ctx.one() {
        return Err(Error::InvalidArgument(
            "leading coefficient must be exactly 1".into(),
        ));
    }
    let mut mu: Vec<BigReal> = Vec::with_capacity(terms);
    mu.push(ctx.one());
    for n in 2..=terms {
        let mut v = if n <= delta.len() {
            delta.coeff(n).clone()
        } else {
            ctx.zero()
        };
        for d in 1..n {
            if n % d == 0 {
                v -= &mu[d - 1];
            }
        }
        mu.push(v);
    }
    Ok(MuTable {
        source_n: delta.len(),
        mu,
    })
}

/// Rational approximation: evaluate(delta, s) / sum_{n<=L} mu_n n^(-s).
pub fn rational_eval(
    delta: &FiniteDirichletSeries,
    mu: &MuTable,
    terms: usize,
    s: &BigComplex,
) -> Result<BigComplex> {
    if terms == 0 || terms > mu.terms() {
        return Err(Error::InvalidArgument(format!(
            "denominator term count {terms} outside 1..={}",
            mu.terms()
        )));
    }
    let ctx = s.ctx();
    let mut denom = BigComplex::zero(ctx);
    for n in 1..=terms {
        denom = &denom + &pow_int_neg_s(n as u64, s, ctx).scale(&mu.coeff(n).to_ctx(ctx));
    }
    let threshold = ctx.ten_pow(-(ctx.decimal_capacity() as i64) + 10);
    if denom.modulus() < threshold {
        return Err(Error::RationalDenominatorVanishes);
    }
    Ok(&evaluate(delta, s) / &denom)
}

/// CSV: header line, then "n,coefficient" rows with full-precision decimals.
pub fn write_coeff_csv(w: &mut impl Write, header: &str, coeffs: &[BigReal]) -> std::io::Result<()> {
    writeln!(w, "n,{header}")?;
    for (i, c) in coeffs.iter().enumerate() {
        writeln!(w, "{},{}", i + 1, c.to_decimal_string())?;
    }
    Ok(())
}

pub fn read_coeff_csv(r: impl BufRead, ctx: PrecisionContext) -> Result<Vec<BigReal>> {
    let mut out = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::MalformedNumber(e.to_string()))?;
        let line = line.trim();
        if idx == 0 || line.is_empty() {
            continue; // header
        }
        let (n_str, v_str) = line
            .split_once(',')
            .ok_or_else(|| Error::MalformedNumber(line.to_string()))?;
        let n: usize = n_str
            .trim()
            .parse()
            .map_err(|_| Error::MalformedNumber(line.to_string()))?;
        if n != out.len() + 1 {
            return Err(Error::MalformedNumber(format!(
                "row index {n} out of order"
            )));
        }
        out.push(BigReal::parse_decimal(v_str, ctx)?);
    }
    Ok(out)
}
