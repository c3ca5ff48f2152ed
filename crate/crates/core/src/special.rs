//! Special functions: Gamma, digamma, trigamma at positive arguments,
//! Catalan's constant, the Clausen function Cl2, and the real dilogarithm.
//!
//! Gamma, digamma (general real), and Li2 sit on MPFR's correctly rounded
//! implementations. Trigamma is an Euler-Maclaurin tail on the defining
//! series (works for every denominator the registry needs), digamma at
//! rationals is the Gauss digamma theorem plus the recurrence (an
//! independent route from MPFR, cross-checked in tests), and Cl2 is the
//! log-singular zeta/Bernoulli expansion on the reduced range (0, pi].

use std::collections::HashMap;
use std::sync::Mutex;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{BigReal, Precision};

const LOG2_10: f64 = 3.321928094887362;

fn float_digits(bits: u32) -> f64 {
    bits as f64 / LOG2_10
}

// ---------------------------------------------------------------------------
// Bernoulli numbers (exact rationals, cached)
// ---------------------------------------------------------------------------

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// B_n as an exact rational (B_1 = -1/2 convention). Cached.
pub(crate) fn bernoulli(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n {
        let m = cache.len();
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            if b.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += (b * &c).complete();
        }
        acc /= -Rational::from(m as u32 + 1);
        cache.push(acc);
    }
    cache[n].clone()
}

// ---------------------------------------------------------------------------
// Gamma and digamma
// ---------------------------------------------------------------------------

/// Gamma(x) for x > 0.
pub fn gamma(x: &BigReal, prec: Precision) -> Result<BigReal> {
    if !x.float().is_finite() || x.float().is_sign_negative() || x.float().is_zero() {
        return Err(Error::Domain("gamma requires a positive argument".into()));
    }
    Ok(BigReal::raw(gamma_float(x.float(), prec.bits()), prec))
}

pub(crate) fn gamma_float(x: &Float, bits: u32) -> Float {
    Float::with_val(bits, x.gamma_ref())
}

/// psi(x) for x > 0 (general positive real).
pub fn digamma(x: &BigReal, prec: Precision) -> Result<BigReal> {
    if !x.float().is_finite() || x.float().is_sign_negative() || x.float().is_zero() {
        return Err(Error::Domain("digamma requires a positive argument".into()));
    }
    Ok(BigReal::raw(digamma_float(x.float(), prec.bits()), prec))
}

pub(crate) fn digamma_float(x: &Float, bits: u32) -> Float {
    Float::with_val(bits, x.digamma_ref())
}

/// psi(r) for a positive rational r, by the Gauss digamma theorem on the
/// fractional part and the recurrence psi(x+1) = psi(x) + 1/x.
pub fn digamma_rational(r: &Rational, prec: Precision) -> Result<BigReal> {
    if r.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Domain("digamma requires a positive argument".into()));
    }
    let bits = prec.bits() + 32;
    let whole = r.clone().floor();
    let frac = (r - &whole).complete();
    let n = whole
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("argument too large".into()))?;

    let mut shift = Rational::new();
    if frac.cmp0() != std::cmp::Ordering::Equal {
        for j in 0..n {
            shift += (&frac + Rational::from(j)).recip();
        }
    }

    let base = if frac.cmp0() == std::cmp::Ordering::Equal {
        // psi(n) = -gamma + H_{n-1}
        let mut h = Rational::new();
        for k in 1..n {
            h += Rational::from((1u32, k));
        }
        Float::with_val(bits, &h) - Float::with_val(bits, Constant::Euler)
    } else {
        let p = frac.numer().to_u64().unwrap();
        let q = frac.denom().to_u64().unwrap();
        gauss_digamma(p, q, bits)
    };

    let v = base + Float::with_val(bits, &shift);
    Ok(BigReal::raw(Float::with_val(prec.bits(), v), prec))
}

/// Gauss digamma theorem for 0 < p < q:
/// psi(p/q) = -gamma - ln(2q) - (pi/2) cot(pi p/q)
///            + 2 sum_{v=1}^{floor((q-1)/2)} cos(2 pi v p / q) ln sin(pi v / q)
fn gauss_digamma(p: u64, q: u64, bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    let mut out = -Float::with_val(bits, Constant::Euler);
    out -= Float::with_val(bits, 2 * q).ln();
    let angle = Float::with_val(bits, &pi * p as f64) / q as f64;
    // cot = cos/sin
    let cot = angle.clone().cos() / angle.sin();
    out -= pi.clone() / 2 * cot;
    for v in 1..=(q - 1) / 2 {
        let a = Float::with_val(bits, &pi * (2 * v * p) as f64) / q as f64;
        let b = Float::with_val(bits, &pi * v as f64) / q as f64;
        out += 2 * a.cos() * b.sin().ln();
    }
    out
}

// ---------------------------------------------------------------------------
// Trigamma
// ---------------------------------------------------------------------------

/// psi'(x) for x > 0 (general positive real), by Euler-Maclaurin.
pub fn trigamma(x: &BigReal, prec: Precision) -> Result<BigReal> {
    if !x.float().is_finite() || x.float().is_sign_negative() || x.float().is_zero() {
        return Err(Error::Domain("trigamma requires a positive argument".into()));
    }
    Ok(BigReal::raw(trigamma_float(x.float(), prec.bits()), prec))
}

/// psi'(r) for a positive rational r.
pub fn trigamma_rational(r: &Rational, prec: Precision) -> Result<BigReal> {
    if r.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Domain("trigamma requires a positive argument".into()));
    }
    let x = Float::with_val(prec.bits() + 32, r);
    Ok(BigReal::raw(trigamma_float(&x, prec.bits()), prec))
}

pub(crate) fn trigamma_float(x: &Float, bits: u32) -> Float {
    let wb = bits + 32;
    let wd = float_digits(wb);
    let mut shift = (0.40 * wd).ceil() as i64 + 2 - x.to_f64().floor() as i64;
    if shift < 0 {
        shift = 0;
    }
    loop {
        match trigamma_em(x, wb, shift as u64) {
            Some(v) => return Float::with_val(bits, v),
            None => shift = shift.max(8) * 2,
        }
    }
}

/// Euler-Maclaurin: psi'(x) = sum_{n<N} (x+n)^-2 + 1/t + 1/(2t^2)
/// + sum_j B_{2j} t^-(2j+1), t = x+N.
/// The remainder is bounded by the first omitted term; returns None if the
/// term sequence starts growing before it reaches the target threshold.
fn trigamma_em(x: &Float, wb: u32, n: u64) -> Option<Float> {
    let mut head = Float::with_val(wb, 0);
    for k in 0..n {
        let d = Float::with_val(wb, x + Float::with_val(wb, k));
        head += d.square().recip();
    }
    let t = Float::with_val(wb, x + Float::with_val(wb, n));
    let inv_t = t.clone().recip();
    let inv_t2 = inv_t.clone().square();
    let mut tail = inv_t.clone() + inv_t2.clone() / 2;

    let eps = Float::with_val(wb, 2).pow(-(wb as i64 - 6));
    let mut p = inv_t2.clone() * &inv_t; // t^-3
    let mut last: Option<Float> = None;
    for j in 1..10_000u32 {
        let b = bernoulli(2 * j as usize);
        let term = Float::with_val(wb, &b * &p);
        let mag = term.clone().abs();
        if mag < eps {
            tail += term;
            return Some(head + tail);
        }
        if let Some(prev) = &last {
            if mag > *prev {
                return None; // diverging before threshold: shift too small
            }
        }
        last = Some(mag);
        tail += term;
        p *= &inv_t2;
    }
    None
}

// ---------------------------------------------------------------------------
// Catalan's constant
// ---------------------------------------------------------------------------

static CATALAN_CACHE: Mutex<Option<HashMap<u32, Float>>> = Mutex::new(None);

/// Catalan's constant G.
pub fn catalan(prec: Precision) -> BigReal {
    BigReal::raw(catalan_float(prec.bits()), prec)
}

pub(crate) fn catalan_float(bits: u32) -> Float {
    let mut guard = CATALAN_CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    cache
        .entry(bits)
        .or_insert_with(|| Float::with_val(bits, Constant::Catalan))
        .clone()
}

// ---------------------------------------------------------------------------
// Clausen function Cl2
// ---------------------------------------------------------------------------

/// Cl2(theta) = sum_{n>=1} sin(n theta)/n^2, any real theta.
pub fn clausen2(theta: &BigReal, prec: Precision) -> Result<BigReal> {
    if !theta.float().is_finite() {
        return Err(Error::Domain("clausen2 requires a finite argument".into()));
    }
    Ok(BigReal::raw(clausen2_float(theta.float(), prec.bits()), prec))
}

pub(crate) fn clausen2_float(theta: &Float, bits: u32) -> Float {
    let wb = bits + 32;
    let two_pi = Float::with_val(wb, Constant::Pi) * 2;
    // reduce into [0, 2pi)
    let mut t = Float::with_val(wb, theta);
    let k = Float::with_val(wb, &t / &two_pi).floor();
    t -= k * &two_pi;
    if t.is_sign_negative() {
        t += &two_pi; // guard against rounding just below zero
    }
    let pi = Float::with_val(wb, Constant::Pi);
    let v = if t <= pi {
        clausen2_core(&t, wb)
    } else {
        -clausen2_core(&Float::with_val(wb, &two_pi - &t), wb)
    };
    Float::with_val(bits, v)
}

/// Cl2 on [0, pi] via
/// Cl2(t) = t - t ln t + sum_{n>=1} |B_2n| t^(2n+1) / (2n (2n+1) (2n)!),
/// geometric tail ratio <= (t/2pi)^2 <= 1/4.
fn clausen2_core(t: &Float, wb: u32) -> Float {
    if t.is_zero() {
        return Float::with_val(wb, 0);
    }
    let pi = Float::with_val(wb, Constant::Pi);
    if *t == pi {
        return Float::with_val(wb, 0);
    }
    let mut acc = t.clone() - Float::with_val(wb, t * t.clone().ln());
    let t2 = t.clone().square();
    let eps = Float::with_val(wb, 2).pow(-(wb as i64 - 6));
    // p_n = t^(2n+1)/(2n)!; term_n = |B_2n| p_n / (2n(2n+1))
    let mut p = Float::with_val(wb, &t2 * t) / 2;
    for n in 1..100_000u64 {
        let b = bernoulli(2 * n as usize);
        let term = Float::with_val(wb, &b * &p).abs() / (2 * n * (2 * n + 1)) as f64;
        acc += &term;
        if term < eps {
            break;
        }
        p = p * &t2 / ((2 * n + 1) * (2 * n + 2)) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Dilogarithm
// ---------------------------------------------------------------------------

/// Li2(x) for x <= 1 (real branch).
pub fn dilog(x: &BigReal, prec: Precision) -> Result<BigReal> {
    let one = Float::with_val(8, 1);
    if !x.float().is_finite() || *x.float() > one {
        return Err(Error::Domain("dilog requires an argument <= 1".into()));
    }
    Ok(BigReal::raw(dilog_float(x.float(), prec.bits()), prec))
}

pub(crate) fn dilog_float(x: &Float, bits: u32) -> Float {
    Float::with_val(bits, x.li2_ref())
}
