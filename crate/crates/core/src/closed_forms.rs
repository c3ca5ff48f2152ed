//! Closed-form builders for the right-hand sides of the theorem families,
//! the A/B/C decomposition, and the central-binomial generating functions
//! used inside the proofs.
//!
//! All series here are eventually dominated by a geometric: truncation stops
//! once `term * r / (1 - r) < eps`, where r is the supremum of observed
//! consecutive-term ratios past a 10-term burn-in, inflated by 1.05.

use rug::float::Constant;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numeric::{BigReal, Precision};
use crate::special;

/// Builders support m up to this cap: beyond it the inner series ratio
/// (1 + cos(pi/m))/2 approaches 1 and term counts blow up.
pub const MAX_M: u32 = 64;

const EXTRA_BITS: u32 = 32;

fn check_m(m: u32) -> Result<()> {
    if m < 1 || m > MAX_M {
        return Err(Error::Unsupported(format!("m = {m} outside supported range 1..={MAX_M}")));
    }
    Ok(())
}

/// Number of phi_k values for either parity: floor(m/2).
pub(crate) fn k_count(m: u32) -> u32 {
    m / 2
}

pub(crate) fn phi_float(m: u32, k: u32, bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    (pi * (2 * k + 1) / m).cos()
}

/// phi_k = cos((2k+1) pi / m) at working precision.
pub fn phi(m: u32, k: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    if k >= k_count(m) {
        return Err(Error::Unsupported(format!(
            "k = {k} out of range for m = {m} (expect k < {})",
            k_count(m)
        )));
    }
    Ok(BigReal::raw(phi_float(m, k, prec.bits()), prec))
}

// ---------------------------------------------------------------------------
// Certified geometric-tail truncation
// ---------------------------------------------------------------------------

pub(crate) struct TailGuard {
    eps: Float,
    burn_in: u32,
    count: u32,
    prev: Option<Float>,
    ratio_sup: f64,
    cap: u32,
}

impl TailGuard {
    pub(crate) fn new(bits: u32) -> Self {
        use rug::ops::Pow;
        TailGuard {
            eps: Float::with_val(32, 2f64).pow(-((bits as i64) + 4)),
            burn_in: 10,
            count: 0,
            prev: None,
            ratio_sup: 0.0,
            cap: 10_000_000,
        }
    }

    /// Feed the magnitude of the next term. Returns true when the certified
    /// tail bound drops below eps.
    pub(crate) fn push(&mut self, mag: &Float) -> Result<bool> {
        self.count += 1;
        if self.count > self.cap {
            return Err(Error::TailBound(format!(
                "no certified truncation after {} terms",
                self.cap
            )));
        }
        if let Some(prev) = &self.prev {
            if !prev.is_zero() {
                let ratio = (mag.clone() / prev).to_f64();
                if self.count > self.burn_in && ratio.is_finite() {
                    self.ratio_sup = self.ratio_sup.max(ratio);
                }
            }
        }
        self.prev = Some(mag.clone());
        if self.count <= self.burn_in + 1 {
            return Ok(false);
        }
        let r = self.ratio_sup * 1.05;
        if r >= 1.0 {
            // not geometric yet; keep summing, fail only at the cap
            return Ok(false);
        }
        let bound = mag.clone() * r / (1.0 - r);
        Ok(bound < self.eps)
    }
}

// ---------------------------------------------------------------------------
// Lemma 1
// ---------------------------------------------------------------------------

/// Right-hand side of the Lemma-1 factorization:
/// sum_k log(1 - 2x(1-x)(phi_k + 1)) - m log x, for x in (0,1).
pub fn lemma1_rhs(m: u32, x: &BigReal, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let zero = Float::with_val(8, 0);
    let one = Float::with_val(8, 1);
    if !(*x.float() > zero && *x.float() < one) {
        return Err(Error::Domain("x must lie in the open interval (0, 1)".into()));
    }
    let bits = prec.bits() + EXTRA_BITS;
    let xf = Float::with_val(bits, x.float());
    let x1x2 = Float::with_val(bits, &xf * (Float::with_val(bits, 1) - &xf)) * 2;
    let mut acc = -Float::with_val(bits, xf.ln_ref()) * m;
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        let arg = Float::with_val(bits, 1) - Float::with_val(bits, &x1x2 * (ph + 1f64));
        if arg <= 0 {
            return Err(Error::Domain("log argument vanished in lemma factorization".into()));
        }
        acc += arg.ln();
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

// ---------------------------------------------------------------------------
// Theorem 1 and the A/B/C decomposition
// ---------------------------------------------------------------------------

fn require_q_above(q: &BigReal, lo: f64, what: &str) -> Result<()> {
    if !(q.float().is_finite() && q.to_f64() > lo) {
        return Err(Error::Domain(format!("{what} requires q > {lo}")));
    }
    Ok(())
}

/// sum_{p>=1} 2^p (phi+1)^p / p * Gamma(p + 1/q) Gamma(p + 1 - 1/q) / (2p)!
fn inner_series(q: &Float, ph: &Float, bits: u32) -> Result<Float> {
    let inv_q = Float::with_val(bits, q.recip_ref());
    let c = Float::with_val(bits, ph + Float::with_val(bits, 1));
    // t_1 = (phi+1) Gamma(1 + 1/q) Gamma(2 - 1/q)
    let g1 = special::gamma_float(&Float::with_val(bits, &inv_q + Float::with_val(bits, 1)), bits);
    let g2 = special::gamma_float(&(Float::with_val(bits, 2) - &inv_q), bits);
    let mut t = Float::with_val(bits, &g1 * &g2) * &c;
    let mut acc = Float::with_val(bits, 0);
    let mut guard = TailGuard::new(bits);
    let mut p = 1u64;
    loop {
        let term = Float::with_val(bits, &t / Float::with_val(bits, p));
        acc += &term;
        if guard.push(&term.abs())? {
            break;
        }
        // t_{p+1}/t_p = 2(phi+1)(p + 1/q)(p + 1 - 1/q)/((2p+1)(2p+2))
        let a = Float::with_val(bits, &inv_q + Float::with_val(bits, p));
        let b = Float::with_val(bits, Float::with_val(bits, p + 1) - &inv_q);
        t = t * 2 * &c * a * b / Float::with_val(bits, 2 * p + 1) / Float::with_val(bits, 2 * p + 2);
        p += 1;
    }
    Ok(acc)
}

struct QParts {
    bits: u32,
    q: Float,
    pi: Float,
    sin_pi_q: Float,
    psi_one: Float, // psi(1) = -euler_gamma
}

impl QParts {
    fn new(q: &BigReal, prec: Precision) -> Self {
        let bits = prec.bits() + EXTRA_BITS;
        let qf = Float::with_val(bits, q.float());
        let pi = Float::with_val(bits, Constant::Pi);
        let sin_pi_q = Float::with_val(bits, &pi / &qf).sin();
        let psi_one = -Float::with_val(bits, Constant::Euler);
        QParts { bits, q: qf, pi, sin_pi_q, psi_one }
    }

    /// psi'((2q-1)/(2q)) - psi'((q-1)/(2q))
    fn trigamma_pair(&self) -> Float {
        let two_q = Float::with_val(self.bits, &self.q * 2i32);
        let hi = Float::with_val(self.bits, &two_q - Float::with_val(self.bits, 1)) / &two_q;
        let lo = Float::with_val(self.bits, &self.q - Float::with_val(self.bits, 1)) / &two_q;
        special::trigamma_float(&hi, self.bits) - special::trigamma_float(&lo, self.bits)
    }

    /// psi(1 - 1/q) - psi(1)
    fn digamma_tail(&self) -> Float {
        let arg = Float::with_val(self.bits, 1) - Float::with_val(self.bits, self.q.recip_ref());
        special::digamma_float(&arg, self.bits) - &self.psi_one
    }
}

/// Unified Theorem-1 right-hand side (both parities; empty sum at m = 1,
/// which is Corollary 1).
pub fn theorem1_rhs(m: u32, q: &BigReal, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    require_q_above(q, 1.0, "theorem1_rhs")?;
    let parts = QParts::new(q, prec);
    let bits = parts.bits;
    let mut acc = Float::with_val(bits, parts.trigamma_pair()) * m / 4 / &parts.q;
    acc -= Float::with_val(bits, parts.digamma_tail() * m) * &parts.pi / &parts.sin_pi_q / &parts.q;
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        acc -= inner_series(&parts.q, &ph, bits)? / &parts.q;
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// A of the decomposition: the half-line integral
/// int_0^inf u^{q-2} log(u^{mq}+1)/(u^q+1) du in closed/series form.
pub fn aux_a_rhs(m: u32, q: &BigReal, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    require_q_above(q, 1.0, "aux_a_rhs")?;
    let parts = QParts::new(q, prec);
    let bits = parts.bits;
    let inv_q = Float::with_val(bits, parts.q.recip_ref());
    let psi_inv_q = special::digamma_float(&inv_q, bits);
    let mut acc = -Float::with_val(bits, psi_inv_q - &parts.psi_one) * m * &parts.pi
        / &parts.sin_pi_q
        / &parts.q;
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        acc -= inner_series(&parts.q, &ph, bits)? / &parts.q;
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// B of the decomposition: pi/(q^2 sin(pi/q)) [psi(1-1/q) - psi(1/q)].
pub fn aux_b_rhs(q: &BigReal, prec: Precision) -> Result<BigReal> {
    require_q_above(q, 1.0, "aux_b_rhs")?;
    let parts = QParts::new(q, prec);
    let bits = parts.bits;
    let inv_q = Float::with_val(bits, parts.q.recip_ref());
    let one_minus = Float::with_val(bits, 1) - &inv_q;
    let diff = special::digamma_float(&one_minus, bits) - special::digamma_float(&inv_q, bits);
    let v = Float::with_val(bits, &parts.pi * &diff)
        / Float::with_val(bits, parts.q.square_ref())
        / &parts.sin_pi_q;
    Ok(BigReal::raw(Float::with_val(prec.bits(), v), prec))
}

/// C of the decomposition: [psi'((2q-1)/(2q)) - psi'((q-1)/(2q))] / (4 q^2).
pub fn aux_c_rhs(q: &BigReal, prec: Precision) -> Result<BigReal> {
    require_q_above(q, 1.0, "aux_c_rhs")?;
    let parts = QParts::new(q, prec);
    let bits = parts.bits;
    let v = Float::with_val(bits, parts.trigamma_pair())
        / Float::with_val(bits, parts.q.square_ref())
        / 4;
    Ok(BigReal::raw(Float::with_val(prec.bits(), v), prec))
}

// ---------------------------------------------------------------------------
// Theorem specializations q = 2, 3, 4 (closed forms, no series)
// ---------------------------------------------------------------------------

/// int_0^1 log(x^{2m}+1)/(x^2+1) dx.
pub fn theorem24_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let g = special::catalan_float(bits);
    let coef = if m % 2 == 0 { m } else { m + 1 };
    let mut acc = Float::with_val(bits, &pi * &log2) * coef / 4 - Float::with_val(bits, &g * m);
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        let r = (Float::with_val(bits, Float::with_val(bits, 1) - ph) / 2i32).sqrt();
        acc += Float::with_val(bits, &pi * (r + 1f64).ln()) / 2;
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// Shared sum for the q = 3 families:
/// sum_k [2 log sin(a/3) - log(2 cos(2a/3) + 1) - log(phi_k+1)],
/// a = asin(sqrt((1+phi_k)/2)).
fn q3_log_sum(m: u32, bits: u32) -> Float {
    let mut s = Float::with_val(bits, 0);
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        let c = Float::with_val(bits, &ph + Float::with_val(bits, 1));
        let a = (Float::with_val(bits, &c / Float::with_val(bits, 2)).sqrt()).asin();
        let sin_part = Float::with_val(bits, &a / Float::with_val(bits, 3)).sin().ln();
        let cos_part = (Float::with_val(bits, &a * Float::with_val(bits, 2))
            / Float::with_val(bits, 3))
        .cos();
        s += sin_part * 2;
        s -= (cos_part * 2i32 + 1f64).ln();
        s -= c.ln();
    }
    s
}

/// int_0^1 (x+1) log(x^{3m}+1)/(x^3+1) dx.
pub fn theorem25_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let sqrt3 = Float::with_val(bits, 3).sqrt();
    let dpsi = special::trigamma_float(&Float::with_val(bits, Rational::from((5, 6))), bits)
        - special::trigamma_float(&Float::with_val(bits, Rational::from((1, 3))), bits);
    let mut acc = Float::with_val(bits, &dpsi * m as f64) / 12;
    acc -= Float::with_val(bits, pi.square_ref()) * m / 9;
    if m % 2 == 0 {
        acc -= Float::with_val(bits, &pi * &sqrt3) * m * &log2 / 9;
    } else {
        let log3 = Float::with_val(bits, 3).ln();
        acc += Float::with_val(bits, &pi * &sqrt3) * &log3 / 3;
        acc -= Float::with_val(bits, &pi * &sqrt3) * (m - 1) * &log2 / 9;
    }
    acc -= Float::with_val(bits, &pi * &sqrt3) * q3_log_sum(m, bits) * 2 / 9;
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^1 (x^2+1) log(x^{4m}+1)/(x^4+1) dx.
pub fn theorem26_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let sqrt2 = Float::with_val(bits, 2).sqrt();
    let dpsi = special::trigamma_float(&Float::with_val(bits, Rational::from((7, 8))), bits)
        - special::trigamma_float(&Float::with_val(bits, Rational::from((3, 8))), bits);
    let coef = if m % 2 == 0 { m } else { m + 2 };
    let mut acc = Float::with_val(bits, &dpsi * m as f64) / 16;
    acc -= Float::with_val(bits, pi.square_ref()) * m * &sqrt2 / 8;
    acc += Float::with_val(bits, &pi * &sqrt2) * coef * &log2 / 4;
    let mut s = Float::with_val(bits, 0);
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        let r = (Float::with_val(bits, Float::with_val(bits, 1) - ph) / 2i32).sqrt();
        s += Float::with_val(bits, &r + Float::with_val(bits, 1)).ln();
        let inner = (Float::with_val(bits, &r + Float::with_val(bits, 1)).sqrt() + &sqrt2).ln();
        s += inner * 2;
    }
    acc += Float::with_val(bits, &pi * &sqrt2) * s / 4;
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^1 (x^{2q-2}+1) log(x^q+1)/(x^{2q}+1) dx for q > 1/2.
pub fn theorem27_rhs(q: &BigReal, prec: Precision) -> Result<BigReal> {
    require_q_above(q, 0.5, "theorem27_rhs")?;
    let bits = prec.bits() + EXTRA_BITS;
    let qf = Float::with_val(bits, q.float());
    let inv_q = Float::with_val(bits, qf.recip_ref());
    let four_q = Float::with_val(bits, &qf * 4i32);
    let hi = Float::with_val(bits, &four_q - Float::with_val(bits, 1)) / &four_q;
    let lo = (Float::with_val(bits, &qf * 2i32) - 1f64) / &four_q;
    let mut acc = (special::trigamma_float(&hi, bits) - special::trigamma_float(&lo, bits))
        / Float::with_val(bits, &qf * 16i32);

    // sum_{n>=0} 2^n G(n+2-1/q) G(n+1/q) / (2n+1)! [psi(n+2-1/q) - psi(2n+2)]
    let a0 = Float::with_val(bits, 2) - &inv_q;
    let mut t = Float::with_val(
        bits,
        special::gamma_float(&a0, bits) * special::gamma_float(&inv_q, bits),
    );
    let mut psi_a = special::digamma_float(&a0, bits);
    let mut psi_b = special::digamma_float(&Float::with_val(bits, 2), bits);
    let mut s = Float::with_val(bits, 0);
    let mut guard = TailGuard::new(bits);
    let mut n = 0u64;
    loop {
        let term = Float::with_val(bits, &t * Float::with_val(bits, &psi_a - &psi_b));
        s += &term;
        if guard.push(&term.abs())? {
            break;
        }
        let fa = Float::with_val(bits, &a0 + Float::with_val(bits, n));
        let fb = Float::with_val(bits, &inv_q + Float::with_val(bits, n));
        t = t * 2 * fa * fb / Float::with_val(bits, 2 * n + 2) / Float::with_val(bits, 2 * n + 3);
        psi_a += Float::with_val(bits, &a0 + Float::with_val(bits, n)).recip();
        psi_b += Float::with_val(bits, 2 * n + 2).recip() + Float::with_val(bits, 2 * n + 3).recip();
        n += 1;
    }
    acc -= s / &qf;
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^1 (x^{3q-2}+1) log(x^q+1)/(x^{3q}+1) dx for q > 1/2.
pub fn theorem28_rhs(q: &BigReal, prec: Precision) -> Result<BigReal> {
    require_q_above(q, 0.5, "theorem28_rhs")?;
    let bits = prec.bits() + EXTRA_BITS;
    let qf = Float::with_val(bits, q.float());
    let inv_q = Float::with_val(bits, qf.recip_ref());
    let six_q = Float::with_val(bits, &qf * 6i32);
    let hi = Float::with_val(bits, &six_q - Float::with_val(bits, 1)) / &six_q;
    let lo = (Float::with_val(bits, &qf * 3i32) - 1f64) / &six_q;
    let mut acc = (special::trigamma_float(&hi, bits) - special::trigamma_float(&lo, bits))
        / Float::with_val(bits, &qf * 36i32);

    // sum_{n>=0} 3^n G(n+3-1/q) G(n+1/q)/(2n+2)! [psi(2n+3) - psi(n+3-1/q)]
    let a0 = Float::with_val(bits, 3) - &inv_q;
    let mut t = Float::with_val(
        bits,
        special::gamma_float(&a0, bits) * special::gamma_float(&inv_q, bits),
    ) / 2;
    let mut psi_a = special::digamma_float(&Float::with_val(bits, 3), bits);
    let mut psi_b = special::digamma_float(&a0, bits);
    let mut s = Float::with_val(bits, 0);
    let mut guard = TailGuard::new(bits);
    let mut n = 0u64;
    loop {
        let term = Float::with_val(bits, &t * Float::with_val(bits, &psi_a - &psi_b));
        s += &term;
        if guard.push(&term.abs())? {
            break;
        }
        let fa = Float::with_val(bits, &a0 + Float::with_val(bits, n));
        let fb = Float::with_val(bits, &inv_q + Float::with_val(bits, n));
        t = t * 3 * fa * fb / Float::with_val(bits, 2 * n + 3) / Float::with_val(bits, 2 * n + 4);
        psi_a += Float::with_val(bits, 2 * n + 3).recip() + Float::with_val(bits, 2 * n + 4).recip();
        psi_b += Float::with_val(bits, &a0 + Float::with_val(bits, n)).recip();
        n += 1;
    }
    acc += s / &qf;
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^1 log(x^m+1)/(x^2+1) dx for odd m:
/// (pi m/8) log 2 - (1/2) sum_k sum_n 2^n sigma_n / ((2n+1) C(2n,n)),
/// sigma_n = sum_{p=1}^n (phi_k+1)^p / p.
pub fn theorem29_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    if m % 2 == 0 {
        return Err(Error::Unsupported("theorem29_rhs requires odd m".into()));
    }
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let mut acc = Float::with_val(bits, &pi * &log2) * m / 8;
    for k in 0..k_count(m) {
        let c = Float::with_val(bits, phi_float(m, k, bits) + 1f64);
        // coef_n = 2^n / ((2n+1) C(2n,n)); coef_0 = 1; ratio (n+1)/(2n+3)
        let mut coef = Float::with_val(bits, 1);
        let mut cpow = Float::with_val(bits, 1); // (phi+1)^n
        let mut sigma = Float::with_val(bits, 0);
        let mut s = Float::with_val(bits, 0);
        let mut guard = TailGuard::new(bits);
        let mut n = 0u64;
        loop {
            if n > 0 {
                cpow *= &c;
                sigma += Float::with_val(bits, &cpow / Float::with_val(bits, n));
            }
            let term = Float::with_val(bits, &coef * &sigma);
            s += &term;
            if n > 0 && guard.push(&term.abs())? {
                break;
            }
            coef = coef * Float::with_val(bits, n + 1) / Float::with_val(bits, 2 * n + 3);
            n += 1;
        }
        acc -= s / 2;
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^inf log(x^{2m}+1)/(x^2+1) dx.
pub fn theorem210_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let coef = if m % 2 == 0 { m } else { m + 1 };
    let mut acc = Float::with_val(bits, &pi * &log2) * coef / 2;
    for k in 0..k_count(m) {
        let ph = phi_float(m, k, bits);
        let r = (Float::with_val(bits, Float::with_val(bits, 1) - ph) / 2i32).sqrt();
        acc += Float::with_val(bits, &pi * (r + 1f64).ln());
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// int_0^inf x log(x^{3m}+1)/(x^3+1) dx.
///
/// Same skeleton as the q=3 unit-interval family; the pi^2 and log-sum terms
/// flip sign relative to Theorem 2.5.
pub fn theorem211_rhs(m: u32, prec: Precision) -> Result<BigReal> {
    check_m(m)?;
    let bits = prec.bits() + EXTRA_BITS;
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let sqrt3 = Float::with_val(bits, 3).sqrt();
    let mut acc = Float::with_val(bits, pi.square_ref()) * m / 9;
    if m % 2 == 0 {
        acc -= Float::with_val(bits, &pi * &sqrt3) * m * &log2 / 9;
    } else {
        let log3 = Float::with_val(bits, 3).ln();
        acc += Float::with_val(bits, &pi * &sqrt3) * &log3 / 3;
        acc -= Float::with_val(bits, &pi * &sqrt3) * (m - 1) * &log2 / 9;
    }
    acc -= Float::with_val(bits, &pi * &sqrt3) * q3_log_sum(m, bits) * 2 / 9;
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

// ---------------------------------------------------------------------------
// Central-binomial generating functions
// ---------------------------------------------------------------------------

/// The binomial-series kinds used in the proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomKind {
    /// sum C(2p,p) x^p / p = -2 log((1 + sqrt(1-4x))/2), |x| < 1/4
    C2Log,
    /// sum C(3p,p) x^p / p, 0 <= x < 4/27
    C3Log,
    /// sum C(4n,2n) x^n / n, |x| <= 1/16 (direct mode needs |x| < 1/16)
    C42Log,
    /// sum C(2k,k) (H_2k - H_k) x^k = -(1-4x)^{-1/2} log((1+sqrt(1-4x))/2), |x| < 1/4
    GfH2nHn,
    /// sum C(2n,n) x^n / (n+1) = (1 - sqrt(1-4x))/(2x), |x| < 1/4 (x=0 -> 1)
    GfCatalan,
    /// sum_{k>=1} t^k / ((2k+1) C(2k,k)) = 4 asin(sqrt(t)/2)/sqrt(t(4-t)) - 1, 0 <= t < 4
    GfOddRecip,
}

impl std::str::FromStr for BinomKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c2_log" => Ok(BinomKind::C2Log),
            "c3_log" => Ok(BinomKind::C3Log),
            "c42_log" => Ok(BinomKind::C42Log),
            "gf_h2n_hn" => Ok(BinomKind::GfH2nHn),
            "gf_catalan" => Ok(BinomKind::GfCatalan),
            "gf_odd_recip" => Ok(BinomKind::GfOddRecip),
            other => Err(Error::Unsupported(format!("unknown binomial series kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomMode {
    /// Sum the defining series with a certified geometric tail.
    Direct,
    /// Evaluate the closed form.
    Closed,
}

fn binom_domain_check(kind: BinomKind, x: f64) -> Result<()> {
    let ok = match kind {
        BinomKind::C2Log | BinomKind::GfH2nHn | BinomKind::GfCatalan => x.abs() < 0.25,
        BinomKind::C3Log => (0.0..4.0 / 27.0).contains(&x),
        BinomKind::C42Log => x.abs() <= 1.0 / 16.0,
        BinomKind::GfOddRecip => (0.0..4.0).contains(&x),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument {x} outside the domain of {kind:?}")))
    }
}

/// Evaluate one of the binomial-series kinds in `Direct` or `Closed` mode.
pub fn binom_series(
    kind: BinomKind,
    x: &BigReal,
    prec: Precision,
    mode: BinomMode,
) -> Result<BigReal> {
    binom_domain_check(kind, x.to_f64())?;
    let bits = prec.bits() + EXTRA_BITS;
    let xf = Float::with_val(bits, x.float());
    let v = match mode {
        BinomMode::Direct => binom_direct(kind, &xf, bits)?,
        BinomMode::Closed => binom_closed(kind, &xf, bits)?,
    };
    Ok(BigReal::raw(Float::with_val(prec.bits(), v), prec))
}

fn binom_direct(kind: BinomKind, x: &Float, bits: u32) -> Result<Float> {
    if x.is_zero() {
        return Ok(match kind {
            BinomKind::GfCatalan => Float::with_val(bits, 1),
            _ => Float::with_val(bits, 0),
        });
    }
    if kind == BinomKind::C42Log && x.clone().abs().to_f64() >= 1.0 / 16.0 {
        return Err(Error::TailBound(
            "C42Log direct mode needs |x| < 1/16 for a geometric tail".into(),
        ));
    }
    let mut acc = Float::with_val(bits, 0);
    let mut guard = TailGuard::new(bits);
    match kind {
        BinomKind::C2Log => {
            // u_p = C(2p,p) x^p; term = u_p / p
            let mut u = Float::with_val(bits, x * 2i32);
            let mut p = 1u64;
            loop {
                let term = Float::with_val(bits, &u / Float::with_val(bits, p));
                acc += &term;
                if guard.push(&term.abs())? {
                    break;
                }
                u = u * x * Float::with_val(bits, 2 * p + 1) * Float::with_val(bits, 2 * p + 2)
                    / Float::with_val(bits, (p + 1) * (p + 1));
                p += 1;
            }
        }
        BinomKind::C3Log => {
            let mut u = Float::with_val(bits, x * 3i32);
            let mut p = 1u64;
            loop {
                let term = Float::with_val(bits, &u / Float::with_val(bits, p));
                acc += &term;
                if guard.push(&term.abs())? {
                    break;
                }
                u = u * x
                    * Float::with_val(bits, 3 * p + 1)
                    * Float::with_val(bits, 3 * p + 2)
                    * Float::with_val(bits, 3 * p + 3)
                    / Float::with_val(bits, p + 1)
                    / Float::with_val(bits, 2 * p + 1)
                    / Float::with_val(bits, 2 * p + 2);
                p += 1;
            }
        }
        BinomKind::C42Log => {
            let mut u = Float::with_val(bits, x * 6i32);
            let mut n = 1u64;
            loop {
                let term = Float::with_val(bits, &u / Float::with_val(bits, n));
                acc += &term;
                if guard.push(&term.abs())? {
                    break;
                }
                u = u * x
                    * Float::with_val(bits, 4 * n + 1)
                    * Float::with_val(bits, 4 * n + 2)
                    * Float::with_val(bits, 4 * n + 3)
                    * Float::with_val(bits, 4 * n + 4)
                    / Float::with_val(bits, (2 * n + 1) * (2 * n + 1))
                    / Float::with_val(bits, (2 * n + 2) * (2 * n + 2));
                n += 1;
            }
        }
        BinomKind::GfH2nHn => {
            // u_k = C(2k,k) x^k; h_k = H_2k - H_k
            let mut u = Float::with_val(bits, x * 2i32);
            let mut h = Float::with_val(bits, Rational::from((1, 2))); // H_2 - H_1
            let mut k = 1u64;
            loop {
                let term = Float::with_val(bits, &u * &h);
                acc += &term;
                if guard.push(&term.abs())? {
                    break;
                }
                u = u * x * Float::with_val(bits, 2 * k + 1) * Float::with_val(bits, 2 * k + 2)
                    / Float::with_val(bits, (k + 1) * (k + 1));
                h += Float::with_val(bits, 2 * k + 1).recip()
                    + Float::with_val(bits, 2 * k + 2).recip()
                    - Float::with_val(bits, k + 1).recip();
                k += 1;
            }
        }
        BinomKind::GfCatalan => {
            // u_n = C(2n,n) x^n / (n+1), n from 0
            let mut u = Float::with_val(bits, 1);
            let mut n = 0u64;
            loop {
                acc += &u;
                if n > 0 && guard.push(&u.clone().abs())? {
                    break;
                }
                u = u * x * Float::with_val(bits, 2 * n + 1) * Float::with_val(bits, 2 * n + 2)
                    / Float::with_val(bits, (n + 1) * (n + 1))
                    * Float::with_val(bits, n + 1)
                    / Float::with_val(bits, n + 2);
                n += 1;
            }
        }
        BinomKind::GfOddRecip => {
            // u_k = t^k / ((2k+1) C(2k,k)), k from 1
            let mut u = Float::with_val(bits, x / 6i32);
            let mut k = 1u64;
            loop {
                acc += &u;
                if guard.push(&u.clone().abs())? {
                    break;
                }
                u = u * x * Float::with_val(bits, (k + 1) * (k + 1))
                    / Float::with_val(bits, 2 * k + 3)
                    / Float::with_val(bits, 2 * k + 2);
                k += 1;
            }
        }
    }
    Ok(acc)
}

fn binom_closed(kind: BinomKind, x: &Float, bits: u32) -> Result<Float> {
    let one = Float::with_val(bits, 1);
    Ok(match kind {
        BinomKind::C2Log => {
            let s = Float::with_val(bits, &one - Float::with_val(bits, x * 4i32)).sqrt();
            -Float::with_val(bits, (s + 1f64) / 2).ln() * 2
        }
        BinomKind::C3Log => {
            if x.is_zero() {
                return Ok(Float::with_val(bits, 0));
            }
            // a = asin(3 sqrt(3x)/2); F(x) + 2 log 2 with
            // F = -log x + 2 log sin(a/3) - log(2 cos(2a/3) + 1)
            let a = (Float::with_val(bits, x * 3i32).sqrt() * 3i32 / 2i32).asin();
            let sin_t = Float::with_val(bits, &a / Float::with_val(bits, 3)).sin();
            let cos_t = (Float::with_val(bits, &a * Float::with_val(bits, 2))
                / Float::with_val(bits, 3))
            .cos();
            -Float::with_val(bits, x.ln_ref()) + sin_t.ln() * 2 - (cos_t * 2i32 + 1f64).ln()
                + Float::with_val(bits, Constant::Log2) * 2
        }
        BinomKind::C42Log => {
            let s = Float::with_val(bits, &one - Float::with_val(bits, x * 16i32)).sqrt();
            let sqrt2 = Float::with_val(bits, 2).sqrt();
            let t1 = Float::with_val(bits, &s + &one).ln();
            let t2 = (Float::with_val(bits, &s + &one).sqrt() + sqrt2).ln();
            Float::with_val(bits, Constant::Log2) * 4 - t1 - t2 * 2
        }
        BinomKind::GfH2nHn => {
            let s = Float::with_val(bits, &one - Float::with_val(bits, x * 4i32)).sqrt();
            -Float::with_val(bits, Float::with_val(bits, &s + &one) / 2).ln() / s
        }
        BinomKind::GfCatalan => {
            if x.is_zero() {
                one
            } else {
                let s = Float::with_val(bits, &one - Float::with_val(bits, x * 4i32)).sqrt();
                Float::with_val(bits, &one - &s) / Float::with_val(bits, x * 2i32)
            }
        }
        BinomKind::GfOddRecip => {
            if x.is_zero() {
                return Ok(Float::with_val(bits, 0));
            }
            let half_sqrt = Float::with_val(bits, x.sqrt_ref()) / 2i32;
            let den = Float::with_val(bits, x * (Float::with_val(bits, 4) - x)).sqrt();
            half_sqrt.asin() * 4 / den - 1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, parse};
    use crate::numeric::approx_equal;

    fn p(d: u32) -> Precision {
        Precision::new(d)
    }

    fn ev(s: &str, d: u32) -> BigReal {
        evaluate(&parse(s).unwrap(), None, p(d)).unwrap()
    }

    fn q(v: &str, d: u32) -> BigReal {
        let r: Rational = v.parse().unwrap();
        BigReal::from_rational(&r, p(d))
    }

    fn assert_agree(a: &BigReal, b: &BigReal, d: u32) {
        assert!(
            approx_equal(a, b, d).unwrap(),
            "disagree at {d} digits:\n  {a}\n  {b}"
        );
    }

    #[test]
    fn phi_values() {
        let d = p(30);
        assert!(phi(2, 0, d).unwrap().abs().to_f64() < 1e-30);
        assert_agree(&phi(3, 0, d).unwrap(), &q("1/2", 30), 30);
        assert_agree(&phi(5, 0, d).unwrap(), &ev("(sqrt(5)+1)/4", 30), 30);
        assert!(phi(2, 1, d).is_err());
        assert!(phi(1, 0, d).is_err());
    }

    #[test]
    fn lemma1_cases() {
        let d = p(30);
        let half = q("1/2", 30);
        let log2 = ev("log(2)", 30);
        assert_agree(&lemma1_rhs(1, &half, d).unwrap(), &log2, 30);
        assert_agree(&lemma1_rhs(2, &half, d).unwrap(), &log2, 30);

        // frozen oracle: log((7/3)^7 + 1) at x = 3/10
        let x = q("3/10", 30);
        let v = lemma1_rhs(7, &x, d).unwrap();
        let expect =
            BigReal::parse("5.93373710187725769037839765952797812444255222", p(30)).unwrap();
        assert_agree(&v, &expect, 29);

        assert!(lemma1_rhs(3, &BigReal::from_i64(1, d), d).is_err());
    }

    #[test]
    fn lemma1_direct_equivalence_sample() {
        let d = p(30);
        for (m, xs) in [(1u32, "7/100"), (4, "33/100"), (9, "61/100"), (12, "94/100")] {
            let x = q(xs, 30);
            let lhs = lemma1_rhs(m, &x, d).unwrap();
            // direct evaluation of log(((1-x)/x)^m + 1)
            let ratio = &(&BigReal::one(p(30)) - &x) / &x;
            let direct = (ratio.pow_i64(m as i64).unwrap() + BigReal::one(p(30)))
                .ln()
                .unwrap();
            assert_agree(&lhs, &direct, 27);
        }
    }

    #[test]
    fn theorem1_specializations() {
        let d = p(30);
        // family equivalence: theorem1(2,2) integrand carries (x^0+1) = 2
        let t1 = theorem1_rhs(2, &BigReal::from_i64(2, d), d).unwrap();
        let t24 = theorem24_rhs(2, d).unwrap();
        assert_agree(&t1, &(&t24 * 2), 28);

        // frozen quadrature oracle for (m,q) = (3,3)
        let t33 = theorem1_rhs(3, &BigReal::from_i64(3, d), d).unwrap();
        let expect =
            BigReal::parse("0.0890720253026925704370831375941357215645363", p(30)).unwrap();
        assert_agree(&t33, &expect, 28);

        assert!(theorem1_rhs(2, &BigReal::one(d), d).is_err());
    }

    #[test]
    fn aux_decomposition_values() {
        let d = p(30);
        let two = BigReal::from_i64(2, d);
        assert!(aux_b_rhs(&two, d).unwrap().abs().to_f64() < 1e-28);
        let g = special::catalan(d);
        assert_agree(&aux_c_rhs(&two, d).unwrap(), &(-&g), 29);
        assert_agree(&aux_a_rhs(2, &two, d).unwrap(), &ev("pi*log(2+sqrt(2))", 30), 28);
    }

    #[test]
    fn theorem24_examples() {
        let d = p(30);
        assert_agree(&theorem24_rhs(1, d).unwrap(), &ev("pi/2*log(2) - G", 30), 29);
        assert_agree(&theorem24_rhs(3, d).unwrap(), &ev("pi/2*log(6) - 3*G", 30), 29);
        // Eq 3, Sofo form (log2 term and -5G restored) against the family form
        let m5 = theorem24_rhs(5, d).unwrap();
        assert_agree(
            &m5,
            &ev("-pi/4*log((72-32*sqrt(5))/5) + 5*pi/4*log(2) - 5*G", 30),
            29,
        );
        assert_agree(&m5, &ev("pi/2*log(10+4*sqrt(5)) - 5*G", 30), 29);
    }

    #[test]
    fn theorem25_examples() {
        let d = p(30);
        assert_agree(
            &theorem25_rhs(1, d).unwrap(),
            &ev("pi*sqrt(3)*log(3)/3 - pi^2/9 + 1/12*(psi1(5/6) - psi1(1/3))", 30),
            28,
        );
        // Example 6 with the sign-corrected log argument
        assert_agree(
            &theorem25_rhs(2, d).unwrap(),
            &ev(
                "1/6*(psi1(5/6) - psi1(1/3)) - 2*pi^2/9 - 2*pi*sqrt(3)/9*log((3*sqrt(3)-5)/4)",
                30,
            ),
            28,
        );
        assert_agree(
            &theorem25_rhs(3, d).unwrap(),
            &ev(
                "5*pi*sqrt(3)*log(3)/9 + 1/4*(psi1(5/6) - psi1(1/3)) - pi^2/3 \
                 - 4*pi*sqrt(3)/9*log(2) - 2*pi*sqrt(3)/9*(2*log(sin(pi/9)) - log(1+2*cos(2*pi/9)))",
                30,
            ),
            28,
        );
    }

    #[test]
    fn theorem26_examples() {
        let d = p(30);
        assert_agree(
            &theorem26_rhs(1, d).unwrap(),
            &ev("1/16*(psi1(7/8) - psi1(3/8)) - pi^2*sqrt(2)/8 + 3*pi*sqrt(2)*log(2)/4", 30),
            28,
        );
        assert_agree(
            &theorem26_rhs(2, d).unwrap(),
            &ev(
                "1/8*(psi1(7/8) - psi1(3/8)) - pi^2*sqrt(2)/4 \
                 + pi*sqrt(2)/4*log(14+8*sqrt(2)+4*sqrt(20+14*sqrt(2)))",
                30,
            ),
            28,
        );
        assert_agree(
            &theorem26_rhs(3, d).unwrap(),
            &ev(
                "3/16*(psi1(7/8) - psi1(3/8)) - 3*pi^2*sqrt(2)/8 + pi*sqrt(2)/4*log(24) \
                 + pi*sqrt(2)/2*log(2+sqrt(3))",
                30,
            ),
            28,
        );
    }

    #[test]
    fn theorem27_examples() {
        let d = p(30);
        assert_agree(
            &theorem27_rhs(&BigReal::from_i64(2, d), d).unwrap(),
            &ev(
                "1/32*(psi1(7/8) - psi1(3/8)) - pi^2*sqrt(2)/16 + pi*sqrt(2)/4*log(2+sqrt(2))",
                30,
            ),
            28,
        );
        // q = 1: integral is 2 int log(x+1)/(x^2+1) = (pi/4) log 2
        assert_agree(
            &theorem27_rhs(&BigReal::one(d), d).unwrap(),
            &ev("pi/4*log(2)", 30),
            28,
        );
        // frozen quadrature oracle at q = 5/2
        assert_agree(
            &theorem27_rhs(&q("5/2", 30), d).unwrap(),
            &BigReal::parse("0.249906760221758864318243985516397286468143", p(30)).unwrap(),
            28,
        );
        assert!(theorem27_rhs(&q("1/2", 30), d).is_err());
    }

    #[test]
    fn theorem28_examples() {
        let d = p(30);
        assert_agree(
            &theorem28_rhs(&BigReal::one(d), d).unwrap(),
            &ev(
                "1/36*(psi1(5/6) - psi1(1/3)) + sqrt(3)/3*(cl2(2*pi/3) + pi*log(3)/3) - pi^2/27",
                30,
            ),
            28,
        );
        // q = 2/3 equals 6 * Example 14
        assert_agree(
            &theorem28_rhs(&q("2/3", 30), d).unwrap(),
            &ev("pi*(log(3)-log(2)) - 2*G/3", 30),
            28,
        );
        // frozen quadrature oracle at q = 2
        assert_agree(
            &theorem28_rhs(&BigReal::from_i64(2, d), d).unwrap(),
            &BigReal::parse("0.283354530219268914789640269012903244666949", p(30)).unwrap(),
            28,
        );
    }

    #[test]
    fn theorem29_examples() {
        let d = p(30);
        assert_agree(&theorem29_rhs(1, d).unwrap(), &ev("pi/8*log(2)", 30), 29);
        assert_agree(
            &theorem29_rhs(3, d).unwrap(),
            &ev("-5/3*G + pi/8*log(2) + pi/3*log(sqrt(3)+2)", 30),
            28,
        );
        // frozen quadrature oracle at m = 5
        assert_agree(
            &theorem29_rhs(5, d).unwrap(),
            &BigReal::parse("0.0790218179791433262170395376485987836707078", p(30)).unwrap(),
            28,
        );
        assert!(theorem29_rhs(2, d).is_err());
    }

    #[test]
    fn theorem210_211_examples() {
        let d = p(30);
        assert_agree(&theorem210_rhs(1, d).unwrap(), &ev("pi*log(2)", 30), 29);
        assert_agree(&theorem210_rhs(2, d).unwrap(), &ev("pi*log(2+sqrt(2))", 30), 29);
        assert_agree(
            &theorem210_rhs(4, d).unwrap(),
            &ev("pi*(log(2+sqrt(2-sqrt(2))) + log(2+sqrt(2+sqrt(2))))", 30),
            29,
        );
        assert_agree(
            &theorem211_rhs(2, d).unwrap(),
            &ev(
                "2*pi^2/9 - 2*pi*sqrt(3)/9*log(2) \
                 + 2*pi*sqrt(3)/9*(log(sqrt(3)+1) - 2*log(sin(pi/12)))",
                30,
            ),
            28,
        );
        assert_agree(
            &theorem211_rhs(3, d).unwrap(),
            &ev(
                "pi^2/3 - 4*pi*sqrt(3)/9*log(2) + 5*pi*sqrt(3)/9*log(3) \
                 - 2*pi*sqrt(3)/9*(2*log(sin(pi/9)) - log(1+2*cos(2*pi/9)))",
                30,
            ),
            28,
        );
        assert_agree(
            &theorem211_rhs(4, d).unwrap(),
            &ev(
                "4*pi^2/9 - 2*pi*sqrt(3)/3*log(2) + 2*pi*sqrt(3)/9*(log(sqrt(2)+1) \
                 - 2*log(sin(pi/8)) - 2*log(sin(pi/24)) + log(1+2*cos(pi/12)))",
                30,
            ),
            28,
        );
    }

    #[test]
    fn binom_examples() {
        let d = p(30);
        let v = binom_series(BinomKind::GfH2nHn, &q("1/8", 30), d, BinomMode::Closed).unwrap();
        assert_agree(&v, &ev("-sqrt(2)*log((2+sqrt(2))/4)", 30), 29);
        let v = binom_series(BinomKind::GfH2nHn, &q("3/16", 30), d, BinomMode::Closed).unwrap();
        assert_agree(&v, &ev("4*log(2) - 2*log(3)", 30), 29);
        let v = binom_series(BinomKind::GfCatalan, &BigReal::zero(p(30)), d, BinomMode::Closed)
            .unwrap();
        assert_agree(&v, &BigReal::one(p(30)), 29);
        let v = binom_series(BinomKind::C2Log, &q("1/8", 30), d, BinomMode::Closed).unwrap();
        assert_agree(&v, &ev("2*log(2) - 2*log(1+sqrt(1/2))", 30), 29);
        assert!(binom_series(BinomKind::C2Log, &q("1/3", 30), d, BinomMode::Closed).is_err());
    }

    #[test]
    fn binom_direct_equals_closed_sample() {
        let d = p(30);
        for (kind, xs) in [
            (BinomKind::C2Log, "1/5"),
            (BinomKind::C3Log, "1/8"),
            (BinomKind::C42Log, "1/20"),
            (BinomKind::GfH2nHn, "1/6"),
            (BinomKind::GfCatalan, "-1/5"),
            (BinomKind::GfOddRecip, "3"),
        ] {
            let x = q(xs, 30);
            let a = binom_series(kind, &x, d, BinomMode::Direct).unwrap();
            let b = binom_series(kind, &x, d, BinomMode::Closed).unwrap();
            assert_agree(&a, &b, 27);
        }
    }

    #[test]
    fn inner_series_matches_binom_routes() {
        // Gamma-product reductions: q=2 -> pi*C2Log((1+phi)/8),
        // q=3 -> (2 pi sqrt3/3) C3Log(2(1+phi)/27), q=4 -> pi sqrt2 C42Log((1+phi)/32)
        let d = p(30);
        let bits = d.bits() + EXTRA_BITS;
        let pi = Float::with_val(bits, Constant::Pi);
        for m in [3u32, 5] {
            let ph = phi_float(m, 0, bits);
            let phb = BigReal::raw(Float::with_val(d.bits(), &ph), d);

            let s2 = inner_series(&Float::with_val(bits, 2), &ph, bits).unwrap();
            let x2 = &(&phb + 1) / 8;
            let c2 = binom_series(BinomKind::C2Log, &x2, d, BinomMode::Closed).unwrap();
            let lhs = BigReal::raw(Float::with_val(d.bits(), s2), d);
            let rhs = BigReal::raw(Float::with_val(d.bits(), &pi * c2.float()), d);
            assert_agree(&lhs, &rhs, 27);

            let s3 = inner_series(&Float::with_val(bits, 3), &ph, bits).unwrap();
            let x3 = &(&(&phb + 1) * 2) / 27;
            let c3 = binom_series(BinomKind::C3Log, &x3, d, BinomMode::Closed).unwrap();
            let factor = Float::with_val(bits, 3).sqrt() * &pi * 2 / 3;
            let lhs = BigReal::raw(Float::with_val(d.bits(), s3), d);
            let rhs = BigReal::raw(Float::with_val(d.bits(), factor * c3.float()), d);
            assert_agree(&lhs, &rhs, 27);

            let s4 = inner_series(&Float::with_val(bits, 4), &ph, bits).unwrap();
            let x4 = &(&phb + 1) / 32;
            let c4 = binom_series(BinomKind::C42Log, &x4, d, BinomMode::Closed).unwrap();
            let factor = Float::with_val(bits, 2).sqrt() * &pi;
            let lhs = BigReal::raw(Float::with_val(d.bits(), s4), d);
            let rhs = BigReal::raw(Float::with_val(d.bits(), factor * c4.float()), d);
            assert_agree(&lhs, &rhs, 27);
        }
    }
}
