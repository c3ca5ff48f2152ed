//! High-precision numerical integration over (0,1), [0,inf), and finite
//! intervals, tolerant of endpoint singularities.
//!
//! The primary scheme is tanh-sinh (double-exponential) quadrature with
//! level-doubling: successive levels must agree to d+2 digits twice in a row.
//! Gauss-Legendre is kept as a cross-check on singularity-free integrands.
//! Node tables are cached per (level, working precision).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::expr::{eval_float, Expr};
use crate::numeric::{BigReal, Precision};

const LOG2_10: f64 = 3.321928094887362;

/// Integration domain of a registry integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// (0, 1)
    Unit,
    /// [0, inf)
    HalfLine,
}

/// A parametrized description of an integral left-hand side.
#[derive(Debug, Clone)]
pub struct IntegralSpec {
    pub integrand: Expr,
    pub domain: Domain,
    /// Family parameters recorded for provenance (free-form).
    pub params: Option<String>,
}

impl IntegralSpec {
    pub fn unit(integrand: Expr) -> Self {
        IntegralSpec { integrand, domain: Domain::Unit, params: None }
    }

    pub fn halfline(integrand: Expr) -> Self {
        IntegralSpec { integrand, domain: Domain::HalfLine, params: None }
    }
}

// ---------------------------------------------------------------------------
// Tanh-sinh nodes
// ---------------------------------------------------------------------------

/// One abscissa/weight pair on (0, 1). `x` and `1 - x` are both computed
/// directly from the sigmoid form so each carries full relative precision.
#[derive(Clone)]
struct Node {
    x: Float,
    w: Float,
}

struct NodeTable {
    /// nodes[level] holds the new nodes introduced at that level
    /// (level 0: all integer multiples of h0; level L: odd multiples of h_L).
    levels: Vec<Arc<Vec<Node>>>,
    t_max: f64,
}

static NODE_CACHE: Mutex<Option<HashMap<u32, Arc<Mutex<NodeTable>>>>> = Mutex::new(None);

fn node_table(bits: u32) -> Arc<Mutex<NodeTable>> {
    let mut guard = NODE_CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(bits)
        .or_insert_with(|| {
            // abscissas approach the endpoints like exp(-pi sinh t); stop once
            // 1-x drops below 10^-(digits+12)
            let digits = bits as f64 / LOG2_10;
            let target = (digits + 12.0) * std::f64::consts::LN_10;
            let t_max = (target / std::f64::consts::PI).asinh();
            Arc::new(Mutex::new(NodeTable { levels: Vec::new(), t_max }))
        })
        .clone()
}

/// x(t) = sigmoid(pi sinh t), w(t) = pi cosh(t) x (1-x).
fn make_node(t: &Float, bits: u32) -> Node {
    let pi = Float::with_val(bits, Constant::Pi);
    let u = Float::with_val(bits, &pi * Float::with_val(bits, t.sinh_ref()));
    let exp_neg = Float::with_val(bits, (-u.clone()).exp());
    let exp_pos = Float::with_val(bits, u.exp_ref());
    let x = Float::with_val(bits, 1) / (Float::with_val(bits, &exp_neg + Float::with_val(bits, 1)));
    let xc = Float::with_val(bits, 1) / (Float::with_val(bits, &exp_pos + Float::with_val(bits, 1)));
    let w = Float::with_val(bits, &pi * Float::with_val(bits, t.cosh_ref())) * &x * &xc;
    Node { x, w }
}

fn ensure_level(table: &mut NodeTable, level: u32, bits: u32) {
    while table.levels.len() <= level as usize {
        let l = table.levels.len() as u32;
        let h = 0.5f64.powi(l as i32);
        let mut nodes = Vec::new();
        if l == 0 {
            let mut k = 0u64;
            loop {
                let t = Float::with_val(bits, k);
                if t.to_f64() > table.t_max {
                    break;
                }
                if k == 0 {
                    nodes.push(make_node(&t, bits));
                } else {
                    nodes.push(make_node(&t, bits));
                    nodes.push(make_node(&(-t), bits));
                }
                k += 1;
            }
        } else {
            // odd multiples of h only
            let mut k = 1u64;
            loop {
                let tv = k as f64 * h;
                if tv > table.t_max {
                    break;
                }
                let t = Float::with_val(bits, Rational::from((k, 1u64 << l)));
                nodes.push(make_node(&t, bits));
                nodes.push(make_node(&(-t), bits));
                k += 2;
            }
        }
        table.levels.push(Arc::new(nodes));
    }
}

// ---------------------------------------------------------------------------
// Core engine on (0, 1)
// ---------------------------------------------------------------------------

/// Integrand callback: full-precision abscissa in (0,1) -> value.
pub type Integrand<'a> = dyn Fn(&Float, u32) -> Result<Float> + Sync + 'a;

const MAX_LEVEL: u32 = 14;

/// Tanh-sinh integration of `f` over (0,1) with absolute error target
/// 10^(-d); certified by successive-level agreement to d+2 digits twice.
pub fn integrate_unit_fn(f: &Integrand, prec: Precision) -> Result<BigReal> {
    let digits = prec.working_digits() + 15;
    let bits = ((digits as f64) * LOG2_10).ceil() as u32 + 8;
    let table_arc = node_table(bits);
    let mut table = table_arc.lock().unwrap();

    let tiny = Float::with_val(32, 10f64).pow(-((prec.working_digits() + 10) as i64));
    let tol = Float::with_val(32, 10f64).pow(-((prec.decimal_digits() + 2) as i64));

    let mut partial = Float::with_val(bits, 0); // sum of w*f over all nodes seen
    let mut prev: Option<Float> = None;
    let mut agreements = 0u32;
    let mut achieved: i64 = 0;

    for level in 0..=MAX_LEVEL {
        ensure_level(&mut table, level, bits);
        let nodes = table.levels[level as usize].clone();
        for node in nodes.iter() {
            let fx = match f(&node.x, bits) {
                Ok(v) if v.is_finite() => v,
                bad => {
                    // extreme abscissa: if the DE weight already underflows the
                    // target, the contribution is treated as the endpoint limit 0
                    if node.w < tiny {
                        continue;
                    }
                    match bad {
                        Ok(_) => {
                            return Err(Error::Domain(
                                "integrand evaluated to a non-finite value".into(),
                            ))
                        }
                        Err(e) => return Err(e),
                    }
                }
            };
            let contrib = Float::with_val(bits, &node.w * &fx);
            partial += contrib;
        }
        let h = Float::with_val(bits, Rational::from((1u64, 1u64 << level)));
        let estimate = Float::with_val(bits, &partial * &h);

        if let Some(p) = &prev {
            let diff = Float::with_val(bits, &estimate - p).abs();
            let scale = Float::with_val(bits, estimate.clone().abs()).max(&Float::with_val(bits, 1));
            achieved = if diff.is_zero() {
                (prec.working_digits() + 10) as i64
            } else {
                (-Float::with_val(bits, &diff / &scale).log10().to_f64()).floor() as i64
            };
            if diff <= Float::with_val(bits, &scale * &tol) {
                agreements += 1;
                if agreements >= 2 {
                    return Ok(BigReal::raw(Float::with_val(prec.bits(), estimate), prec));
                }
            } else {
                agreements = 0;
            }
        }
        prev = Some(estimate);
    }
    Err(Error::QuadratureNonConvergence { achieved_digits: achieved, levels: MAX_LEVEL })
}

fn expr_integrand(e: &Expr) -> impl Fn(&Float, u32) -> Result<Float> + Sync + '_ {
    move |x: &Float, bits: u32| eval_float(e, Some(x), bits)
}

/// Integrate an expression integrand over (0, 1).
pub fn integrate_unit(spec: &IntegralSpec, prec: Precision) -> Result<BigReal> {
    integrate_unit_fn(&expr_integrand(&spec.integrand), prec)
}

/// Integrate an expression integrand over [0, inf): split at 1 and map
/// [1, inf) back to (0, 1] via x -> 1/u (the substitution the proofs use).
pub fn integrate_halfline(spec: &IntegralSpec, prec: Precision) -> Result<BigReal> {
    let e = &spec.integrand;
    let head = integrate_unit_fn(&expr_integrand(e), prec)?;
    let mapped = move |u: &Float, bits: u32| -> Result<Float> {
        let x = Float::with_val(bits, u.recip_ref());
        let fx = eval_float(e, Some(&x), bits)?;
        Ok(fx * Float::with_val(bits, u.square_ref()).recip())
    };
    let tail = integrate_unit_fn(&mapped, prec)?;
    Ok(&head + &tail)
}

/// Integrate an expression over the finite interval (a, b) by affine
/// rescaling onto (0, 1).
pub fn integrate_finite(
    integrand: &Expr,
    a: &BigReal,
    b: &BigReal,
    prec: Precision,
) -> Result<BigReal> {
    if !(a < b) {
        return Err(Error::Domain("integrate_finite requires a < b".into()));
    }
    let af = a.float().clone();
    let len = Float::with_val(a.float().prec().max(b.float().prec()), b.float() - &af);
    let f = move |u: &Float, bits: u32| -> Result<Float> {
        let x = Float::with_val(bits, &af) + Float::with_val(bits, &len * u);
        let fx = eval_float(integrand, Some(&x), bits)?;
        Ok(fx * Float::with_val(bits, &len))
    };
    integrate_unit_fn(&f, prec)
}

/// Integrate an expression over [a, inf): shift to [0, inf) and split at 1.
pub fn integrate_to_inf(integrand: &Expr, a: &BigReal, prec: Precision) -> Result<BigReal> {
    let af = a.float().clone();
    let near = move |u: &Float, bits: u32| -> Result<Float> {
        let x = Float::with_val(bits, &af) + Float::with_val(bits, u);
        eval_float(integrand, Some(&x), bits)
    };
    let head = integrate_unit_fn(&near, prec)?;
    let af2 = a.float().clone();
    let far = move |u: &Float, bits: u32| -> Result<Float> {
        // x = a + 1/u
        let x = Float::with_val(bits, &af2) + Float::with_val(bits, u.recip_ref());
        let fx = eval_float(integrand, Some(&x), bits)?;
        Ok(fx * Float::with_val(bits, u.square_ref()).recip())
    };
    let tail = integrate_unit_fn(&far, prec)?;
    Ok(&head + &tail)
}

// ---------------------------------------------------------------------------
// Gauss-Legendre cross-check
// ---------------------------------------------------------------------------

/// Legendre polynomial value and derivative at r via the three-term
/// recurrence.
fn legendre_pd(n: u32, r: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = Float::with_val(bits, r);
    for k in 2..=n {
        let pk = (Float::with_val(bits, r * &p1) * (2 * k - 1) - Float::with_val(bits, &p0 * (k - 1)))
            / Float::with_val(bits, k);
        p0 = p1;
        p1 = pk;
    }
    // P'_n(r) = n (r P_n - P_{n-1}) / (r^2 - 1)
    let num = Float::with_val(bits, r * &p1) - &p0;
    let den = Float::with_val(bits, r.square_ref()) - Float::with_val(bits, 1);
    let d = Float::with_val(bits, num * n) / den;
    (p1, d)
}

/// Fixed-order Gauss-Legendre on (0, 1): retained as a second, methodically
/// independent scheme for singularity-free integrands.
pub fn gauss_legendre_unit(f: &Integrand, n: u32, prec: Precision) -> Result<BigReal> {
    let bits = prec.bits() + 32;
    let pi = std::f64::consts::PI;
    let mut acc = Float::with_val(bits, 0);
    for i in 1..=n {
        // Newton from the Chebyshev-like initial guess
        let mut r = Float::with_val(bits, (pi * (i as f64 - 0.25) / (n as f64 + 0.5)).cos());
        for _ in 0..200 {
            let (p, dp) = legendre_pd(n, &r, bits);
            let step = Float::with_val(bits, &p / &dp);
            r -= &step;
            if step.clone().abs() < Float::with_val(32, 2f64).pow(-(bits as i64 - 8)) {
                break;
            }
        }
        let (_, dp) = legendre_pd(n, &r, bits);
        let r2 = Float::with_val(bits, r.square_ref());
        let w = Float::with_val(bits, 2)
            / (Float::with_val(bits, Float::with_val(bits, 1) - &r2)
                * Float::with_val(bits, dp.square_ref()));
        // map to (0,1)
        let x = Float::with_val(bits, &r + Float::with_val(bits, 1)) / 2;
        let fx = f(&x, bits)?;
        acc += Float::with_val(bits, &w * &fx) / 2;
    }
    Ok(BigReal::raw(Float::with_val(prec.bits(), acc), prec))
}

/// Gauss-Legendre for an expression integrand over (0,1).
pub fn gauss_legendre_expr(e: &Expr, n: u32, prec: Precision) -> Result<BigReal> {
    gauss_legendre_unit(&expr_integrand(e), n, prec)
}
