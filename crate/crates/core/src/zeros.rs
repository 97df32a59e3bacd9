//! Ingestion, verification, and Newton refinement of high-precision
//! ordinates of nontrivial zeta zeros.
//!
//! Refinement runs on the alternating zeta function rather than zeta itself:
//! the two share nontrivial zeros and the alternating series is amenable to
//! acceleration everywhere in the strip.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigReal, PrecisionContext};
use crate::series::{eta_with_derivative_budget, ETA_HEIGHT_BUDGET};

/// Height allowance covering a known target ordinate: the default budget,
/// or the ordinate plus slack when it sits higher.
fn budget_for(gamma: f64) -> f64 {
    ETA_HEIGHT_BUDGET.max(gamma.abs() + 10.0)
}

/// Largest excursion from the starting ordinate before refinement is
/// declared lost (the first 260 zero gaps all exceed this).
const ISOLATION_WINDOW: f64 = 0.5;

/// One nontrivial zero ordinate with provenance.
#[derive(Debug, Clone)]
pub struct ZetaZero {
    pub index: usize,
    pub gamma: BigReal,
    pub verified_digits: u32,
    pub source: String,
}

/// Count of significant decimal digits in a numeric literal.
fn significant_digits(s: &str) -> u32 {
    let mantissa = s
        .split(['e', 'E'])
        .next()
        .unwrap_or("");
    let mut seen_nonzero = false;
    let mut count = 0u32;
    for ch in mantissa.chars() {
        if ch.is_ascii_digit() {
            if ch != '0' {
                seen_nonzero = true;
            }
            if seen_nonzero {
                count += 1;
            }
        }
    }
    count
}

/// Parse the plain-text zero file format: '#' comment lines, one strictly
/// increasing decimal ordinate per remaining line, indexed from 1.
pub fn parse_zero_file(r: impl BufRead, min_digits: u32, source: &str) -> Result<Vec<ZetaZero>> {
    let mut zeros = Vec::new();
    let mut prev: Option<BigReal> = None;
    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::MalformedZeroLine {
            line: lineno,
            reason: e.to_string(),
        })?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let digits = significant_digits(text);
        if digits == 0 {
            return Err(Error::MalformedZeroLine {
                line: lineno,
                reason: "no digits found".into(),
            });
        }
        if digits < min_digits {
            return Err(Error::InsufficientZeroDigits {
                line: lineno,
                found: digits,
                required: min_digits,
            });
        }
        let ctx = PrecisionContext::from_digits(digits + 4);
        let gamma = BigReal::parse_decimal(text, ctx).map_err(|_| Error::MalformedZeroLine {
            line: lineno,
            reason: format!("unparseable ordinate {text:?}"),
        })?;
        if gamma.sign() != std::cmp::Ordering::Greater {
            return Err(Error::MalformedZeroLine {
                line: lineno,
                reason: "ordinate must be positive".into(),
            });
        }
        if let Some(p) = &prev {
            if p.as_float() >= gamma.as_float() {
                return Err(Error::NonIncreasingZeros { line: lineno });
            }
        }
        prev = Some(gamma.clone());
        zeros.push(ZetaZero {
            index: zeros.len() + 1,
            gamma,
            verified_digits: digits,
            source: source.to_string(),
        });
    }
    Ok(zeros)
}

pub fn load_zero_file(path: &Path, min_digits: u32) -> Result<Vec<ZetaZero>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_zero_file(std::io::BufReader::new(f), min_digits, &path.display().to_string())
}

pub fn write_zero_file(w: &mut impl Write, zeros: &[ZetaZero], comment: &str) -> std::io::Result<()> {
    if !comment.is_empty() {
        for line in comment.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    for z in zeros {
        writeln!(w, "{}", z.gamma.to_plain_decimal_string_digits(z.verified_digits as usize))?;
    }
    Ok(())
}

/// |eta(1/2 + i gamma)| at the given context; small iff gamma is (close to)
/// a true ordinate.
pub fn verify_zero(z: &ZetaZero, ctx: PrecisionContext) -> Result<BigReal> {
    if ctx.decimal_capacity() < z.verified_digits {
        return Err(Error::InsufficientPrecision {
            capacity: ctx.decimal_capacity(),
            required: z.verified_digits,
        });
    }
    let s = BigComplex::new(
        ctx.one() / ctx.from_u64(2),
        z.gamma.to_ctx(ctx),
    );
    let (v, _) = eta_with_derivative_budget(&s, ctx, budget_for(z.gamma.to_f64()))?;
    Ok(v.modulus())
}

/// Newton refinement of an approximate ordinate, doubling precision per
/// stage until the update falls below 10^(-target_digits).
///
/// The seed must lie within 10^-3 of a true ordinate and the zero must be
/// isolated in that window.
pub fn refine_zero(gamma0: &BigReal, target_digits: u32) -> Result<BigReal> {
    let gamma0_f64 = gamma0.to_f64();
    let mut stage_digits: Vec<u32> = Vec::new();
    let mut d = 30u32;
    while d < target_digits {
        stage_digits.push(d);
        d *= 2;
    }
    stage_digits.push(target_digits);

    let mut ctx = PrecisionContext::from_digits(stage_digits[0] + 10);
    let mut s = BigComplex::new(ctx.one() / ctx.from_u64(2), gamma0.to_ctx(ctx));
    for (si, &digits) in stage_digits.iter().enumerate() {
        ctx = PrecisionContext::from_digits(digits + 10);
        s = s.to_ctx(ctx);
        let goal = ctx.ten_pow(-(digits as i64));
        let breakdown = ctx.ten_pow(-(ctx.decimal_capacity() as i64) + 10);
        let max_iter = if si == 0 { 25 } else { 6 };
        let mut converged = false;
        for _ in 0..max_iter {
            let (v, dv) = eta_with_derivative_budget(&s, ctx, budget_for(gamma0_f64))?;
            if dv.modulus() < breakdown {
                return Err(Error::DerivativeBreakdown);
            }
            let step = &v / &dv;
            s = &s - &step;
            if (s.im.to_f64() - gamma0_f64).abs() > ISOLATION_WINDOW {
                return Err(Error::RefinementEscaped);
            }
            if step.modulus() < goal {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NewtonNonConvergence { max_iter });
        }
    }

    let half = ctx.one() / ctx.from_u64(2);
    let drift = (&s.re - &half).abs();
    if drift >= ctx.ten_pow(-(target_digits as i64) + 2) {
        return Err(Error::CriticalLineDrift {
            drift: drift.to_f64(),
        });
    }
    Ok(s.im.to_ctx(PrecisionContext::from_digits(target_digits)))
}
