//! Multiprecision scalar kernel.
//!
//! Every value carries its working precision; mixing values from different
//! precision contexts in one arithmetic operation is a programming error and
//! panics. Rounding is round-to-nearest throughout.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;
use rug::float::Round;
use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};

pub const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Working mantissa precision, in bits. Minimum 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub fn from_bits(bits: u32) -> Self {
        assert!(bits >= 64, "precision below 64 bits");
        PrecisionContext { bits }
    }

    /// Smallest context whose decimal capacity covers `digits`.
    pub fn from_digits(digits: u32) -> Self {
        let bits = ((digits as f64 + 1.0) / LOG10_2).ceil() as u32;
        Self::from_bits(bits.max(64))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Equivalent decimal digits: floor(bits * log10(2)).
    pub fn decimal_capacity(self) -> u32 {
        (self.bits as f64 * LOG10_2).floor() as u32
    }

    pub fn doubled(self) -> Self {
        PrecisionContext { bits: self.bits * 2 }
    }

    pub fn zero(self) -> BigReal {
        BigReal::raw(Float::new(self.bits))
    }

    pub fn one(self) -> BigReal {
        self.from_u64(1)
    }

    pub fn from_u64(self, v: u64) -> BigReal {
        BigReal::raw(Float::with_val(self.bits, v))
    }

    pub fn from_i64(self, v: i64) -> BigReal {
        BigReal::raw(Float::with_val(self.bits, v))
    }

    pub fn from_f64(self, v: f64) -> BigReal {
        BigReal::raw(Float::with_val(self.bits, v))
    }

    pub fn pi(self) -> BigReal {
        BigReal::raw(Float::with_val(self.bits, rug::float::Constant::Pi))
    }

    /// 10^e at this precision.
    pub fn ten_pow(self, e: i64) -> BigReal {
        let ten = Float::with_val(self.bits, 10);
        BigReal::raw(Float::with_val(self.bits, ten.pow(e)))
    }

    /// Natural log of a positive integer, memoized per (n, context).
    pub fn ln_int(self, n: u64) -> BigReal {
        BigReal::raw(ln_int_memo(n, self.bits))
    }
}

use rug::ops::Pow;

static LN_MEMO: Lazy<RwLock<HashMap<(u64, u32), Float>>> = Lazy::new(|| RwLock::new(HashMap::new()));

fn ln_int_memo(n: u64, bits: u32) -> Float {
    assert!(n >= 1);
    if let Some(v) = LN_MEMO.read().unwrap().get(&(n, bits)) {
        return v.clone();
    }
    let v = Float::with_val(bits, n).ln();
    LN_MEMO
        .write()
        .unwrap()
        .entry((n, bits))
        .or_insert_with(|| v.clone());
    v
}

/// Arbitrary-precision real, always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct BigReal {
    x: Float,
}

impl BigReal {
    fn raw(x: Float) -> Self {
        assert!(x.is_finite(), "non-finite value stored in BigReal");
        BigReal { x }
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext { bits: self.x.prec() }
    }

    pub fn bits(&self) -> u32 {
        self.x.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.x
    }

    pub fn from_float(x: Float) -> Self {
        Self::raw(x)
    }

    /// Round (or extend) to another context.
    pub fn to_ctx(&self, ctx: PrecisionContext) -> BigReal {
        BigReal::raw(Float::with_val(ctx.bits, &self.x))
    }

    /// Parse a decimal string (scientific notation accepted).
    pub fn parse_decimal(s: &str, ctx: PrecisionContext) -> Result<BigReal> {
        let p = Float::parse(s.trim()).map_err(|_| Error::MalformedNumber(s.to_string()))?;
        let v = Float::with_val(ctx.bits, p);
        if !v.is_finite() {
            return Err(Error::MalformedNumber(s.to_string()));
        }
        Ok(BigReal::raw(v))
    }

    /// Decimal string carrying every stored digit; parsing it back in the
    /// same context reproduces the value exactly.
    pub fn to_decimal_string(&self) -> String {
        let digits = (self.bits() as f64 * LOG10_2).ceil() as usize + 2;
        let (sign, mantissa, exp) = self.x.to_sign_string_exp(10, Some(digits));
        format_sign_string(sign, &mantissa, exp)
    }

    /// Decimal string rounded to `digits` significant digits.
    pub fn to_decimal_string_digits(&self, digits: usize) -> String {
        let (sign, mantissa, exp) = self.x.to_sign_string_exp(10, Some(digits.max(1)));
        format_sign_string(sign, &mantissa, exp)
    }

    /// Like `to_decimal_string_digits` but in plain (pointed) notation when
    /// the decimal point lands inside the digit string.
    pub fn to_plain_decimal_string_digits(&self, digits: usize) -> String {
        let (neg, mantissa, exp) = self.x.to_sign_string_exp(10, Some(digits.max(1)));
        let exp = exp.unwrap_or(0);
        if mantissa.chars().all(|c| c == '0') {
            return "0".to_string();
        }
        if exp < 1 || exp as usize >= mantissa.len() {
            return format_sign_string(neg, &mantissa, Some(exp));
        }
        let (int_part, frac_part) = mantissa.split_at(exp as usize);
        let sign = if neg { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        self.x.cmp0().unwrap_or(Ordering::Equal)
    }

    pub fn abs(&self) -> BigReal {
        BigReal::raw(self.x.clone().abs())
    }

    pub fn sqrt(&self) -> BigReal {
        BigReal::raw(self.x.clone().sqrt())
    }

    pub fn recip_sqrt(&self) -> BigReal {
        BigReal::raw(self.x.clone().recip_sqrt())
    }

    pub fn exp(&self) -> BigReal {
        BigReal::raw(self.x.clone().exp())
    }

    pub fn ln(&self) -> BigReal {
        BigReal::raw(self.x.clone().ln())
    }

    pub fn log10(&self) -> BigReal {
        BigReal::raw(self.x.clone().log10())
    }

    pub fn sin(&self) -> BigReal {
        BigReal::raw(self.x.clone().sin())
    }

    pub fn cos(&self) -> BigReal {
        BigReal::raw(self.x.clone().cos())
    }

    pub fn sin_cos(&self) -> (BigReal, BigReal) {
        let (s, c) = self.x.clone().sin_cos(Float::new(self.bits()));
        (BigReal::raw(s), BigReal::raw(c))
    }

    pub fn atan2(&self, x: &BigReal) -> BigReal {
        self.check_ctx(x);
        BigReal::raw(self.x.clone().atan2(&x.x))
    }

    pub fn square(&self) -> BigReal {
        BigReal::raw(self.x.clone().square())
    }

    pub fn to_f64(&self) -> f64 {
        self.x.to_f64()
    }

    /// Binary exponent of the value, None for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.x.get_exp()
    }

    /// log10(|x|) as f64; -inf for zero. Robust far outside f64 range.
    pub fn log10_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        // mantissa in [0.5, 1): |x| = m * 2^e
        let e = self.x.get_exp().unwrap() as f64;
        let mut m = self.x.clone().abs();
        m >>= self.x.get_exp().unwrap();
        e * LOG10_2 + m.to_f64().log10()
    }

    fn check_ctx(&self, other: &BigReal) {
        assert_eq!(
            self.bits(),
            other.bits(),
            "mixed-context arithmetic: {} vs {} bits",
            self.bits(),
            other.bits()
        );
    }
}

fn format_sign_string(neg: bool, mantissa: &str, exp: Option<i32>) -> String {
    if mantissa.is_empty() || mantissa.chars().all(|c| c == '0') {
        return "0".to_string();
    }
    let exp = exp.unwrap_or(0);
    // mantissa is digits only; value = 0.mantissa * 10^exp
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&mantissa[..1]);
    out.push('.');
    if mantissa.len() > 1 {
        out.push_str(&mantissa[1..]);
    } else {
        out.push('0');
    }
    let sci_exp = exp - 1;
    if sci_exp != 0 {
        out.push('e');
        out.push_str(&sci_exp.to_string());
    }
    out
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string_digits(12))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.x.partial_cmp(&other.x)
    }
}

macro_rules! binop {
    ($trait:ident, $meth:ident, $op:tt) => {
        impl std::ops::$trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $meth(self, rhs: &BigReal) -> BigReal {
                self.check_ctx(rhs);
                BigReal::raw((&self.x $op &rhs.x).complete(self.bits()))
            }
        }
        impl std::ops::$trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $meth(self, rhs: BigReal) -> BigReal {
                (&self).$meth(&rhs)
            }
        }
        impl std::ops::$trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $meth(self, rhs: &BigReal) -> BigReal {
                (&self).$meth(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl std::ops::Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::raw((-&self.x).complete(self.bits()))
    }
}

impl std::ops::Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl std::ops::AddAssign<&BigReal> for BigReal {
    fn add_assign(&mut self, rhs: &BigReal) {
        self.check_ctx(rhs);
        self.x.add_assign_round(&rhs.x, Round::Nearest);
        assert!(self.x.is_finite());
    }
}

impl std::ops::SubAssign<&BigReal> for BigReal {
    fn sub_assign(&mut self, rhs: &BigReal) {
        self.check_ctx(rhs);
        self.x.sub_assign_round(&rhs.x, Round::Nearest);
        assert!(self.x.is_finite());
    }
}

use rug::ops::{AddAssignRound, SubAssignRound};

/// Complex value as a pair of same-context reals.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        re.check_ctx(&im);
        BigComplex { re, im }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        BigComplex::new(ctx.zero(), ctx.zero())
    }

    pub fn from_f64(re: f64, im: f64, ctx: PrecisionContext) -> Self {
        BigComplex::new(ctx.from_f64(re), ctx.from_f64(im))
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.re.ctx()
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn to_ctx(&self, ctx: PrecisionContext) -> BigComplex {
        BigComplex::new(self.re.to_ctx(ctx), self.im.to_ctx(ctx))
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn modulus(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &BigReal) -> BigComplex {
        BigComplex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> BigComplex {
        let n = self.norm_sqr();
        BigComplex::new(&self.re / &n, -&(&self.im / &n))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl std::ops::Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl std::ops::Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl std::ops::Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        BigComplex::new(re, im)
    }
}

impl std::ops::Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let n = rhs.norm_sqr();
        let re = &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &n;
        let im = &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &n;
        BigComplex::new(re, im)
    }
}

impl std::ops::Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i", self.re, self.im.to_f64())
    }
}

const POW_GUARD_BITS: u32 = 32;

/// n^(-s) = exp(-s ln n), rounded to `ctx`.
pub fn pow_int_neg_s(n: u64, s: &BigComplex, ctx: PrecisionContext) -> BigComplex {
    assert!(n >= 1);
    if n == 1 {
        return BigComplex::new(ctx.one(), ctx.zero());
    }
    let wctx = PrecisionContext::from_bits(ctx.bits() + POW_GUARD_BITS);
    let ln_n = wctx.ln_int(n);
    let s_w = s.to_ctx(wctx);
    let t_re = -&(&s_w.re * &ln_n);
    let t_im = -&(&s_w.im * &ln_n);
    let mag = t_re.exp();
    let (sin, cos) = t_im.sin_cos();
    BigComplex::new((&mag * &cos).to_ctx(ctx), (&mag * &sin).to_ctx(ctx))
}

/// Count of leading decimal digits on which a and b agree.
///
/// Exact equality yields the decimal capacity of the coarser context; a sign
/// or order-of-magnitude mismatch yields 0.
pub fn agreement_digits(a: &BigReal, b: &BigReal) -> u32 {
    let coarse = a.bits().min(b.bits());
    let cap = PrecisionContext::from_bits(coarse).decimal_capacity();
    if a.as_float() == b.as_float() {
        return cap;
    }
    if a.sign() != b.sign() && !a.is_zero() && !b.is_zero() {
        return 0;
    }
    let wctx = PrecisionContext::from_bits(a.bits().max(b.bits()));
    let aa = a.to_ctx(wctx);
    let bb = b.to_ctx(wctx);
    let diff = (&aa - &bb).abs();
    let denom = if aa.abs() >= bb.abs() { aa.abs() } else { bb.abs() };
    if denom.is_zero() {
        return cap;
    }
    let rel = diff.log10_abs_f64() - denom.log10_abs_f64();
    let d = (-rel).round();
    if d <= 0.0 {
        0
    } else {
        (d as u32).min(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::from_bits(bits)
    }

    #[test]
    fn decimal_capacity_matches_log() {
        assert_eq!(ctx(100).decimal_capacity(), 30);
        assert!(PrecisionContext::from_digits(50).decimal_capacity() >= 50);
    }

    #[test]
    fn pow_n1_is_one() {
        let c = ctx(128);
        let s = BigComplex::from_f64(3.7, -11.2, c);
        let v = pow_int_neg_s(1, &s, c);
        assert!(v.re == c.one() && v.im.is_zero());
    }

    #[test]
    fn pow_n2_s1_is_half() {
        let c = ctx(128);
        let s = BigComplex::from_f64(1.0, 0.0, c);
        let v = pow_int_neg_s(2, &s, c);
        assert_eq!(v.re.to_f64(), 0.5);
        assert!(v.im.abs().to_f64() < 1e-37);
    }

    #[test]
    fn pow_agrees_with_doubled_precision() {
        let c = PrecisionContext::from_digits(60);
        let s = BigComplex::new(
            c.from_f64(0.5),
            BigReal::parse_decimal("14.1347251417", c).unwrap(),
        );
        let v = pow_int_neg_s(2, &s, c);
        let c2 = c.doubled();
        let v2 = pow_int_neg_s(2, &s.to_ctx(c2), c2);
        // agree to all but the last 3 digits
        assert!(agreement_digits(&v.re, &v2.re.to_ctx(c)) >= c.decimal_capacity() - 3);
        assert!(agreement_digits(&v.im, &v2.im.to_ctx(c)) >= c.decimal_capacity() - 3);
    }

    #[test]
    fn pow_conjugate_symmetry() {
        let c = PrecisionContext::from_digits(50);
        for (n, re, im) in [(2u64, 0.5, 14.1), (7, 1.25, -3.0), (101, -2.0, 88.8)] {
            let s = BigComplex::from_f64(re, im, c);
            let a = pow_int_neg_s(n, &s.conj(), c);
            let b = pow_int_neg_s(n, &s, c).conj();
            assert!(agreement_digits(&a.re, &b.re) >= c.decimal_capacity() - 2);
            assert!(agreement_digits(&a.im, &b.im) >= c.decimal_capacity() - 2);
        }
    }

    #[test]
    fn pow_additivity() {
        let c = PrecisionContext::from_digits(50);
        let s1 = BigComplex::from_f64(0.25, 3.5, c);
        let s2 = BigComplex::from_f64(1.5, -2.25, c);
        let sum = &s1 + &s2;
        for n in [2u64, 3, 10, 97] {
            let lhs = pow_int_neg_s(n, &sum, c);
            let rhs = &pow_int_neg_s(n, &s1, c) * &pow_int_neg_s(n, &s2, c);
            let diff = (&lhs - &rhs).modulus();
            let scale = lhs.modulus();
            // within 8 ulps
            let bound = &scale * &c.ten_pow(-(c.decimal_capacity() as i64) + 1);
            assert!(diff <= bound, "n={n} diff {} bound {}", diff, bound);
        }
    }

    #[test]
    fn agreement_full() {
        let c = ctx(100);
        let a = c.from_f64(1.0);
        let b = c.from_f64(1.0);
        assert_eq!(agreement_digits(&a, &b), 30);
    }

    #[test]
    fn agreement_partial() {
        let c = ctx(100);
        let a = BigReal::parse_decimal("1.234567", c).unwrap();
        let b = BigReal::parse_decimal("1.234599", c).unwrap();
        assert_eq!(agreement_digits(&a, &b), 5);
    }

    #[test]
    fn agreement_sign_mismatch() {
        let c = ctx(100);
        let a = c.from_f64(1.0);
        let b = c.from_f64(-1.0);
        assert_eq!(agreement_digits(&a, &b), 0);
    }

    #[test]
    fn agreement_magnitude_mismatch() {
        let c = ctx(100);
        let a = c.from_f64(1.0);
        let b = c.from_f64(1000.0);
        assert_eq!(agreement_digits(&a, &b), 0);
    }

    #[test]
    fn decimal_round_trip() {
        let c = PrecisionContext::from_digits(80);
        for v in ["14.134725141734693790457251983562", "-0.001234", "1e-40", "271828.1828"] {
            let a = BigReal::parse_decimal(v, c).unwrap();
            let s = a.to_decimal_string();
            let b = BigReal::parse_decimal(&s, c).unwrap();
            assert_eq!(a, b, "round trip failed for {v}: {s}");
        }
        let z = c.zero();
        assert_eq!(BigReal::parse_decimal(&z.to_decimal_string(), c).unwrap(), z);
    }

    #[test]
    fn ln_memo_consistent() {
        let c = ctx(256);
        let a = c.ln_int(7);
        let b = c.ln_int(7);
        assert_eq!(a, b);
        let direct = c.from_u64(7).ln();
        assert_eq!(a, direct);
    }

    #[test]
    fn log10_abs_far_outside_f64() {
        let c = PrecisionContext::from_digits(50);
        let tiny = c.ten_pow(-7000);
        let h = tiny.log10_abs_f64();
        assert!((h + 7000.0).abs() < 1e-6, "h = {h}");
    }

    #[test]
    #[should_panic(expected = "mixed-context")]
    fn mixed_context_panics() {
        let a = ctx(100).from_f64(1.0);
        let b = ctx(128).from_f64(1.0);
        let _ = &a + &b;
    }

    proptest::proptest! {
        #[test]
        fn decimal_string_round_trips(v in -1e300f64..1e300) {
            let c = PrecisionContext::from_digits(60);
            let a = c.from_f64(v);
            let s = a.to_decimal_string();
            let b = BigReal::parse_decimal(&s, c).unwrap();
            proptest::prop_assert_eq!(a, b);
        }

        #[test]
        fn agreement_is_symmetric_and_full_on_self(v in -1e30f64..1e30, w in -1e30f64..1e30) {
            let c = PrecisionContext::from_digits(40);
            let a = c.from_f64(v);
            let b = c.from_f64(w);
            proptest::prop_assert_eq!(agreement_digits(&a, &b), agreement_digits(&b, &a));
            proptest::prop_assert_eq!(agreement_digits(&a, &a), c.decimal_capacity());
        }
    }
}
