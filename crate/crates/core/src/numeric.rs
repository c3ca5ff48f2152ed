//! Arbitrary-precision real arithmetic and fundamental constants.
//!
//! Everything numeric in this crate flows through [`BigReal`]: an MPFR float
//! paired with an explicit [`Precision`] (requested decimal digits plus guard
//! digits). Arithmetic results carry the minimum precision of their operands.

use std::collections::HashMap;
use std::sync::Mutex;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

const LOG2_10: f64 = 3.321928094887362;

/// Requested output digits plus extra working digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    decimal_digits: u32,
    guard_digits: u32,
}

impl Precision {
    /// Precision with the default guard: max(15, ceil(decimal/4)).
    ///
    /// Double series and acceleration lose digits; a proportional guard
    /// absorbs that.
    pub fn new(decimal_digits: u32) -> Self {
        let decimal_digits = decimal_digits.max(1);
        let guard = 15.max(decimal_digits.div_ceil(4));
        Precision {
            decimal_digits,
            guard_digits: guard,
        }
    }

    /// Precision with an explicit guard (must be at least 10 digits).
    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < 1 {
            return Err(Error::Unsupported("decimal_digits must be >= 1".into()));
        }
        if guard_digits < 10 {
            return Err(Error::Unsupported("guard_digits must be >= 10".into()));
        }
        Ok(Precision {
            decimal_digits,
            guard_digits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Total working digits (decimal + guard).
    pub fn working_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// Same guard policy, `extra` more requested digits (d+10 re-runs).
    pub fn bump(&self, extra: u32) -> Self {
        Precision::new(self.decimal_digits + extra)
    }

    /// Same requested digits, `extra` more guard digits (internal elevation).
    pub fn with_extra_guard(&self, extra: u32) -> Self {
        Precision {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits + extra,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(30)
    }
}

/// An arbitrary-precision real number with explicit working precision.
///
/// Immutable after construction; safe to share across threads. Equality and
/// order compare the numeric value only.
#[derive(Debug, Clone)]
pub struct BigReal {
    pub(crate) f: Float,
    pub(crate) prec: Precision,
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.f.partial_cmp(&other.f)
    }
}

impl BigReal {
    pub(crate) fn raw(f: Float, prec: Precision) -> Self {
        debug_assert_eq!(f.prec(), prec.bits());
        BigReal { f, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), 0), prec)
    }

    pub fn one(prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), 1), prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), v), prec)
    }

    pub fn from_f64(v: f64, prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), v), prec)
    }

    pub fn from_integer(v: &Integer, prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), v), prec)
    }

    pub fn from_rational(v: &Rational, prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), v), prec)
    }

    /// Parse a decimal string at the given precision.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let inc = Float::parse(s)
            .map_err(|e| Error::Parse { pos: 0, msg: format!("bad number {s:?}: {e}") })?;
        Ok(BigReal::raw(Float::with_val(prec.bits(), inc), prec))
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Borrow the underlying MPFR float.
    pub fn float(&self) -> &Float {
        &self.f
    }

    pub fn to_f64(&self) -> f64 {
        self.f.to_f64()
    }

    /// Round to a (possibly different) precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        BigReal::raw(Float::with_val(prec.bits(), &self.f), prec)
    }

    /// Decimal string with exactly `digits` significant digits,
    /// round-to-nearest, in scientific notation.
    pub fn to_string_digits(&self, digits: u32) -> String {
        if self.f.is_zero() {
            return "0".to_string();
        }
        if !self.f.is_finite() {
            return self.f.to_string();
        }
        // MPFR's string conversion rounds to nearest at the requested length.
        let (sign, mantissa, exp) = split_radix10(&self.f, digits.max(1));
        let exp10 = exp - 1; // exponent of the leading digit
        let mut out = String::new();
        if sign {
            out.push('-');
        }
        out.push(mantissa.as_bytes()[0] as char);
        if mantissa.len() > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        if exp10 != 0 {
            out.push('e');
            out.push_str(&exp10.to_string());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.f.is_sign_negative() && !self.f.is_zero()
    }

    fn out_prec(&self, other: &BigReal) -> Precision {
        if self.prec.working_digits() <= other.prec.working_digits() {
            self.prec
        } else {
            other.prec
        }
    }

    pub fn abs(&self) -> Self {
        BigReal::raw(Float::with_val(self.prec.bits(), self.f.abs_ref()), self.prec)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_sign_negative() {
            return Err(Error::Domain("sqrt of a negative value".into()));
        }
        Ok(BigReal::raw(Float::with_val(self.prec.bits(), self.f.sqrt_ref()), self.prec))
    }

    pub fn ln(&self) -> Result<Self> {
        if self.f.is_zero() || self.f.is_sign_negative() {
            return Err(Error::Domain("log of a non-positive value".into()));
        }
        Ok(BigReal::raw(Float::with_val(self.prec.bits(), self.f.ln_ref()), self.prec))
    }

    pub fn exp(&self) -> Self {
        BigReal::raw(Float::with_val(self.prec.bits(), self.f.exp_ref()), self.prec)
    }

    pub fn sin(&self) -> Self {
        BigReal::raw(Float::with_val(self.prec.bits(), self.f.sin_ref()), self.prec)
    }

    pub fn cos(&self) -> Self {
        BigReal::raw(Float::with_val(self.prec.bits(), self.f.cos_ref()), self.prec)
    }

    pub fn asin(&self) -> Result<Self> {
        let one = Float::with_val(8, 1);
        if self.f.clone().abs() > one {
            return Err(Error::Domain("asin of a value outside [-1, 1]".into()));
        }
        Ok(BigReal::raw(Float::with_val(self.prec.bits(), self.f.asin_ref()), self.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.f.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(BigReal::raw(Float::with_val(self.prec.bits(), self.f.recip_ref()), self.prec))
    }

    /// Integer power (handles negative bases and negative exponents).
    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if self.f.is_zero() && e <= 0 {
            return Err(Error::Domain("zero raised to a non-positive power".into()));
        }
        let ef = Float::with_val(64, e);
        Ok(BigReal::raw(
            Float::with_val(self.prec.bits(), (&self.f).pow(&ef)),
            self.prec,
        ))
    }

    /// Real power for a positive base.
    pub fn pow_real(&self, e: &BigReal) -> Result<Self> {
        if self.f.is_zero() || self.f.is_sign_negative() {
            return Err(Error::Domain("pow_real requires a positive base".into()));
        }
        let prec = self.out_prec(e);
        Ok(BigReal::raw(
            Float::with_val(prec.bits(), (&self.f).pow(&e.f)),
            prec,
        ))
    }

    /// Rational power; negative bases only with integer exponents.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        if e.is_integer() {
            let ei = e.numer().to_i64().ok_or_else(|| {
                Error::Unsupported("integer exponent too large".into())
            })?;
            return self.pow_i64(ei);
        }
        if self.f.is_sign_negative() && !self.f.is_zero() {
            return Err(Error::Domain(
                "negative base with non-integer exponent".into(),
            ));
        }
        if self.f.is_zero() {
            return if e.cmp0() == std::cmp::Ordering::Greater {
                Ok(BigReal::zero(self.prec))
            } else {
                Err(Error::Domain("zero raised to a non-positive power".into()))
            };
        }
        let ef = Float::with_val(self.prec.bits(), e);
        Ok(BigReal::raw(Float::with_val(self.prec.bits(), (&self.f).pow(&ef)), self.prec))
    }
}

impl std::fmt::Display for BigReal {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{}", self.to_string_digits(self.prec.decimal_digits))
    }
}

/// (sign, mantissa digits, decimal exponent) with round-to-nearest.
fn split_radix10(f: &Float, digits: u32) -> (bool, String, i64) {
    let s = f.to_string_radix(10, Some(digits as usize));
    // Format is like "-1.234e-5", "1.234", "5.000e2"
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, &s[..]),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0) + 1),
        None => (body, {
            let intpart = body.split('.').next().unwrap_or("0");
            intpart.trim_start_matches('0').len() as i64
        }),
    };
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits_only.trim_start_matches('0');
    if trimmed.is_empty() {
        (neg, "0".to_string(), 1)
    } else {
        (neg, trimmed.to_string(), exp)
    }
}

macro_rules! bigreal_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.out_prec(rhs);
                BigReal::raw(Float::with_val(prec.bits(), &self.f $op &rhs.f), prec)
            }
        }
        impl std::ops::$trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self) $op (&rhs)
            }
        }
        impl std::ops::$trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self) $op rhs
            }
        }
        impl std::ops::$trait<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self $op (&rhs)
            }
        }
        impl std::ops::$trait<i64> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                BigReal::raw(Float::with_val(self.prec.bits(), &self.f $op rhs), self.prec)
            }
        }
        impl std::ops::$trait<i64> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                (&self) $op rhs
            }
        }
    };
}

bigreal_binop!(Add, add, +);
bigreal_binop!(Sub, sub, -);
bigreal_binop!(Mul, mul, *);
bigreal_binop!(Div, div, /);

impl std::ops::Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::raw(Float::with_val(self.prec.bits(), -&self.f), self.prec)
    }
}

impl std::ops::Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

/// Supported fundamental constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantName {
    Pi,
    EulerGamma,
    Log2,
    Log3,
}

impl std::str::FromStr for ConstantName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(ConstantName::Pi),
            "euler_gamma" | "gamma" => Ok(ConstantName::EulerGamma),
            "log2" => Ok(ConstantName::Log2),
            "log3" => Ok(ConstantName::Log3),
            other => Err(Error::Unsupported(format!("unknown constant {other:?}"))),
        }
    }
}

static CONSTANT_CACHE: Mutex<Option<HashMap<(ConstantName, u32), Float>>> = Mutex::new(None);

/// A fundamental constant correct to `prec.decimal_digits()`.
///
/// Values are cached per (constant, bit precision); the cache is safe for
/// concurrent access.
pub fn fundamental_constant(name: ConstantName, prec: Precision) -> BigReal {
    let bits = prec.bits();
    let mut guard = CONSTANT_CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    let f = cache
        .entry((name, bits))
        .or_insert_with(|| match name {
            ConstantName::Pi => Float::with_val(bits, Constant::Pi),
            ConstantName::EulerGamma => Float::with_val(bits, Constant::Euler),
            ConstantName::Log2 => Float::with_val(bits, Constant::Log2),
            ConstantName::Log3 => Float::with_val(bits, 3).ln(),
        })
        .clone();
    BigReal::raw(f, prec)
}

pub fn pi(prec: Precision) -> BigReal {
    fundamental_constant(ConstantName::Pi, prec)
}

/// 10^(-d) at modest precision, for tolerance thresholds.
pub(crate) fn pow10(exp: i64) -> Float {
    Float::with_val(64, 10).pow(Float::with_val(64, exp))
}

/// True iff |a - b| <= 10^(-d).
///
/// Both operands must carry at least d + 5 working digits.
pub fn approx_equal(a: &BigReal, b: &BigReal, d: u32) -> Result<bool> {
    for (side, v) in [("left", a), ("right", b)] {
        if v.prec.working_digits() < d + 5 {
            return Err(Error::InsufficientPrecision(format!(
                "{side} operand carries {} working digits, need at least {}",
                v.prec.working_digits(),
                d + 5
            )));
        }
    }
    let diff = Float::with_val(a.prec.bits().max(b.prec.bits()), &a.f - &b.f).abs();
    Ok(diff <= pow10(-(d as i64)))
}

/// Number of decimal digits to which two values agree (absolute scale),
/// capped at `cap`.
pub fn digits_agreed(a: &BigReal, b: &BigReal, cap: i64) -> i64 {
    let bits = a.prec.bits().max(b.prec.bits());
    let diff = Float::with_val(bits, &a.f - &b.f).abs();
    if diff.is_zero() {
        return cap;
    }
    let lg = -diff.log10().to_f64();
    if !lg.is_finite() {
        return cap;
    }
    (lg.floor() as i64).clamp(-99, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG2_30: &str = "0.693147180559945309417232121458";

    #[test]
    fn euler_gamma_five_digits() {
        let g = fundamental_constant(ConstantName::EulerGamma, Precision::new(5));
        assert!((g.to_f64() - 0.57721).abs() < 1e-5);
        assert!(g.to_string_digits(6).starts_with("5.7721"));
    }

    #[test]
    fn pi_self_consistent_across_precisions() {
        let d = Precision::new(30);
        let a = pi(d);
        let b = pi(d.bump(10));
        assert_eq!(a.to_string_digits(30), b.to_string_digits(30));
    }

    #[test]
    fn log2_matches_oracle_30_digits() {
        // Reference computed with an independent high-precision oracle
        // (mpmath) before the build.
        let d = Precision::new(30);
        let v = fundamental_constant(ConstantName::Log2, d);
        let r = BigReal::parse(LOG2_30, d).unwrap();
        assert!(approx_equal(&v, &r, 30).unwrap());
    }

    #[test]
    fn constant_stability_under_precision_increase() {
        for name in [
            ConstantName::Pi,
            ConstantName::EulerGamma,
            ConstantName::Log2,
            ConstantName::Log3,
        ] {
            let d = Precision::new(25);
            let lo = fundamental_constant(name, d);
            let hi = fundamental_constant(name, d.bump(20));
            assert_eq!(lo.to_string_digits(25), hi.to_string_digits(25));
        }
    }

    #[test]
    fn approx_equal_cases() {
        let d = Precision::new(20);
        let x = BigReal::from_i64(7, d);
        assert!(approx_equal(&x, &x, 15).unwrap());

        let zero = BigReal::zero(d);
        let small = BigReal::parse("1e-16", d).unwrap();
        assert!(approx_equal(&zero, &small, 15).unwrap());
        let big = BigReal::parse("1e-14", d).unwrap();
        assert!(!approx_equal(&zero, &big, 15).unwrap());
    }

    #[test]
    fn approx_equal_rejects_low_precision() {
        let d = Precision::with_guard(10, 10).unwrap();
        let x = BigReal::one(d);
        let err = approx_equal(&x, &x, 30).unwrap_err();
        assert!(matches!(err, Error::InsufficientPrecision(_)));
    }

    #[test]
    fn arithmetic_exact_on_small_integers() {
        let d = Precision::new(30);
        let cases = [(999_983i64, 999_979i64), (123_456, 654_321), (-31415, 27)];
        for (a, b) in cases {
            let x = BigReal::from_i64(a, d);
            let y = BigReal::from_i64(b, d);
            assert_eq!((&x + &y).to_f64(), (a + b) as f64);
            assert_eq!((&x * &y).to_f64(), (a * b) as f64);
        }
    }

    #[test]
    fn min_precision_propagation() {
        let hi = BigReal::one(Precision::new(50));
        let lo = BigReal::one(Precision::new(20));
        let sum = &hi + &lo;
        assert_eq!(sum.precision().decimal_digits(), 20);
    }

    #[test]
    fn guard_digit_policy() {
        assert_eq!(Precision::new(30).guard_digits(), 15);
        assert_eq!(Precision::new(100).guard_digits(), 25);
        assert!(Precision::with_guard(30, 5).is_err());
    }

    #[test]
    fn concurrent_constant_reads() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| pi(Precision::new(40)).to_string_digits(40)))
            .collect();
        let mut values: Vec<String> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        values.dedup();
        assert_eq!(values.len(), 1);
    }

    #[test]
    fn display_round_to_nearest() {
        let d = Precision::new(20);
        let x = BigReal::parse("0.199999999999999999999999", d).unwrap();
        assert_eq!(x.to_string_digits(3), "2.00e-1");
    }
}
