//! The machine-readable identity registry and the verification harness.
//!
//! The registry is a checked-in, line-oriented text file
//! (`id | kind | lhs | rhs | ref | status`); identities are data, reviewable
//! line by line. `verify` evaluates both sides independently - integrals by
//! quadrature, sums through the validated accelerator pair, right-hand sides
//! through the expression evaluator or the closed-form builders - at the
//! requested digits d and again at d+10, and certifies digit-level agreement.

use std::time::Instant;

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::closed_forms;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::numeric::{digits_agreed, BigReal, Precision};
use crate::quadrature::{self, IntegralSpec};
use crate::series::{self, SeriesSpec};

/// The registry file shipped with the crate.
pub const BUNDLED_REGISTRY: &str = include_str!("identities.txt");

/// Margin below the requested digits that still counts as a pass: quadrature
/// and acceleration each certify to about d digits but share guard loss;
/// 5 digits of slack avoids flaky failures while still catching real typos
/// (which miss in the first few digits).
pub const PASS_SLACK: u32 = 5;

// ---------------------------------------------------------------------------
// Identity model
// ---------------------------------------------------------------------------

/// Left-hand side of an identity.
#[derive(Debug, Clone)]
pub enum Lhs {
    /// A closed scalar expression.
    Value(Expr),
    /// Integral over (0,1).
    IntegralUnit(Expr),
    /// Integral over [0,inf).
    IntegralHalfline(Expr),
    /// Integral over (a,b); b = None means +inf.
    IntegralFinite(Expr, Rational, Option<Rational>),
    /// An infinite sum.
    Series(SeriesSpec),
}

/// Right-hand side: a closed-form expression, or one of the theorem builders
/// (used where the theorem's closed form contains an infinite series).
#[derive(Debug, Clone)]
pub enum Rhs {
    Expression(Expr),
    Builder(BuilderCall),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuilderCall {
    pub name: String,
    pub m: Option<u32>,
    pub q: Option<Rational>,
}

/// One registry record.
#[derive(Debug, Clone)]
pub struct Identity {
    pub id: String,
    pub kind: String,
    pub lhs: Lhs,
    pub lhs_text: String,
    pub rhs: Rhs,
    pub rhs_text: String,
    pub reference: String,
    pub suspect: bool,
    pub note: Option<String>,
}

/// Per-identity verification outcome.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_diff: String,
    pub digits_agreed: i64,
    pub pass: bool,
    pub suspect: bool,
    pub unconfirmed: bool,
    pub note: Option<String>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub unconfirmed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub digits: u32,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

// ---------------------------------------------------------------------------
// Registry parsing
// ---------------------------------------------------------------------------

fn parse_builder(text: &str, line: usize) -> Result<BuilderCall> {
    let body = text.strip_prefix('@').unwrap_or(text);
    let (name, args) = body
        .split_once('(')
        .ok_or(Error::Registry { line, msg: format!("bad builder call {text:?}") })?;
    let args = args.strip_suffix(')').ok_or(Error::Registry {
        line,
        msg: format!("unclosed builder call {text:?}"),
    })?;
    let mut call = BuilderCall { name: name.trim().to_string(), m: None, q: None };
    for item in args.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (k, v) = item.split_once('=').ok_or(Error::Registry {
            line,
            msg: format!("bad builder argument {item:?}"),
        })?;
        match k.trim() {
            "m" => {
                call.m = Some(v.trim().parse().map_err(|_| Error::Registry {
                    line,
                    msg: format!("bad m value {v:?}"),
                })?)
            }
            "q" => {
                call.q = Some(v.trim().parse().map_err(|_| Error::Registry {
                    line,
                    msg: format!("bad q value {v:?}"),
                })?)
            }
            other => {
                return Err(Error::Registry {
                    line,
                    msg: format!("unknown builder argument {other:?}"),
                })
            }
        }
    }
    validate_builder(&call, line)?;
    Ok(call)
}

fn validate_builder(call: &BuilderCall, line: usize) -> Result<()> {
    let need_m = |c: &BuilderCall| {
        c.m.filter(|m| (1..=closed_forms::MAX_M).contains(m))
            .ok_or(Error::Registry { line, msg: format!("builder {} needs m in 1..=64", c.name) })
    };
    let need_q = |c: &BuilderCall, lo: f64| match &c.q {
        Some(q) if q.to_f64() > lo => Ok(()),
        _ => Err(Error::Registry { line, msg: format!("builder {} needs q > {lo}", c.name) }),
    };
    match call.name.as_str() {
        "thm1" => {
            need_m(call)?;
            need_q(call, 1.0)
        }
        "cor1" => need_q(call, 1.0),
        "thm24" | "thm25" | "thm26" | "thm210" | "thm211" => need_m(call).map(|_| ()),
        "thm29" => {
            let m = need_m(call)?;
            if m % 2 == 0 {
                return Err(Error::Registry { line, msg: "thm29 needs odd m".into() });
            }
            Ok(())
        }
        "thm27" | "thm28" => need_q(call, 0.5),
        other => Err(Error::Registry { line, msg: format!("unknown builder {other:?}") }),
    }
}

fn parse_line(line_no: usize, line: &str) -> Result<Option<Identity>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
    if fields.len() != 6 {
        return Err(Error::Registry {
            line: line_no,
            msg: format!("expected 6 pipe-separated fields, found {}", fields.len()),
        });
    }
    let (id, kind, lhs_text, rhs_text, reference, status) =
        (fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]);

    let wrap = |e: Error| match e {
        Error::Registry { .. } => e,
        other => Error::Registry { line: line_no, msg: other.to_string() },
    };

    let lhs = if kind == "value" {
        Lhs::Value(expr::parse(lhs_text).map_err(wrap)?)
    } else if kind == "integral_unit" {
        Lhs::IntegralUnit(expr::parse(lhs_text).map_err(wrap)?)
    } else if kind == "integral_halfline" {
        Lhs::IntegralHalfline(expr::parse(lhs_text).map_err(wrap)?)
    } else if let Some(rest) = kind.strip_prefix("integral_finite(") {
        let args = rest.strip_suffix(')').ok_or(Error::Registry {
            line: line_no,
            msg: format!("bad kind {kind:?}"),
        })?;
        let (a_s, b_s) = args.split_once(',').ok_or(Error::Registry {
            line: line_no,
            msg: "integral_finite needs two endpoints".into(),
        })?;
        let a: Rational = a_s.trim().parse().map_err(|_| Error::Registry {
            line: line_no,
            msg: format!("bad endpoint {a_s:?}"),
        })?;
        let b = match b_s.trim() {
            "inf" => None,
            s => Some(s.parse::<Rational>().map_err(|_| Error::Registry {
                line: line_no,
                msg: format!("bad endpoint {s:?}"),
            })?),
        };
        if let Some(bv) = &b {
            if *bv <= a {
                return Err(Error::Registry { line: line_no, msg: "need a < b".into() });
            }
        }
        Lhs::IntegralFinite(expr::parse(lhs_text).map_err(wrap)?, a, b)
    } else if kind == "series_euler_bbp" {
        Lhs::Series(SeriesSpec::parse_spec("euler_bbp", lhs_text).map_err(wrap)?)
    } else if kind == "series_direct" {
        Lhs::Series(SeriesSpec::parse_spec("direct", lhs_text).map_err(wrap)?)
    } else {
        return Err(Error::Registry { line: line_no, msg: format!("unknown kind {kind:?}") });
    };

    let rhs = if rhs_text.starts_with('@') {
        Rhs::Builder(parse_builder(rhs_text, line_no)?)
    } else {
        Rhs::Expression(expr::parse(rhs_text).map_err(wrap)?)
    };
    if let Rhs::Expression(e) = &rhs {
        if e.has_free_var() {
            return Err(Error::Registry {
                line: line_no,
                msg: "rhs must not contain the free variable".into(),
            });
        }
    }

    let (suspect, note) = match status.split_once(':') {
        Some((s, n)) => (parse_status(s.trim(), line_no)?, Some(n.trim().to_string())),
        None => (parse_status(status, line_no)?, None),
    };
    if suspect && note.as_deref().map_or(true, |n| n.is_empty()) {
        return Err(Error::Registry {
            line: line_no,
            msg: "suspect entries must carry a discrepancy note".into(),
        });
    }

    Ok(Some(Identity {
        id: id.to_string(),
        kind: kind.to_string(),
        lhs,
        lhs_text: lhs_text.to_string(),
        rhs,
        rhs_text: rhs_text.to_string(),
        reference: reference.to_string(),
        suspect,
        note,
    }))
}

fn parse_status(s: &str, line: usize) -> Result<bool> {
    match s {
        "pass" => Ok(false),
        "suspect" => Ok(true),
        other => Err(Error::Registry { line, msg: format!("unknown status {other:?}") }),
    }
}

/// Parse a registry from text. Fails on syntax errors, duplicate ids, and
/// out-of-range builder parameters.
pub fn load_registry_str(text: &str) -> Result<Vec<Identity>> {
    let mut out: Vec<Identity> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(ident) = parse_line(i + 1, line)? {
            if out.iter().any(|x| x.id == ident.id) {
                return Err(Error::Registry {
                    line: i + 1,
                    msg: format!("duplicate id {:?}", ident.id),
                });
            }
            out.push(ident);
        }
    }
    Ok(out)
}

/// Load a registry from a file path.
pub fn load_registry(path: &std::path::Path) -> Result<Vec<Identity>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Registry {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    load_registry_str(&text)
}

/// The registry bundled with the crate.
pub fn bundled_registry() -> Vec<Identity> {
    load_registry_str(BUNDLED_REGISTRY).expect("bundled registry must parse")
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

fn eval_lhs(lhs: &Lhs, prec: Precision) -> Result<BigReal> {
    match lhs {
        Lhs::Value(e) => expr::evaluate(e, None, prec),
        Lhs::IntegralUnit(e) => quadrature::integrate_unit(&IntegralSpec::unit(e.clone()), prec),
        Lhs::IntegralHalfline(e) => {
            quadrature::integrate_halfline(&IntegralSpec::halfline(e.clone()), prec)
        }
        Lhs::IntegralFinite(e, a, b) => {
            let af = BigReal::from_rational(a, prec);
            match b {
                Some(bv) => {
                    let bf = BigReal::from_rational(bv, prec);
                    quadrature::integrate_finite(e, &af, &bf, prec)
                }
                None => quadrature::integrate_to_inf(e, &af, prec),
            }
        }
        Lhs::Series(spec) => series::evaluate_series(spec, prec),
    }
}

fn eval_rhs(rhs: &Rhs, prec: Precision) -> Result<BigReal> {
    match rhs {
        Rhs::Expression(e) => expr::evaluate(e, None, prec),
        Rhs::Builder(call) => {
            let q = call.q.as_ref().map(|q| BigReal::from_rational(q, prec));
            match call.name.as_str() {
                "thm1" => closed_forms::theorem1_rhs(call.m.unwrap(), q.as_ref().unwrap(), prec),
                "cor1" => closed_forms::theorem1_rhs(1, q.as_ref().unwrap(), prec),
                "thm24" => closed_forms::theorem24_rhs(call.m.unwrap(), prec),
                "thm25" => closed_forms::theorem25_rhs(call.m.unwrap(), prec),
                "thm26" => closed_forms::theorem26_rhs(call.m.unwrap(), prec),
                "thm27" => closed_forms::theorem27_rhs(q.as_ref().unwrap(), prec),
                "thm28" => closed_forms::theorem28_rhs(q.as_ref().unwrap(), prec),
                "thm29" => closed_forms::theorem29_rhs(call.m.unwrap(), prec),
                "thm210" => closed_forms::theorem210_rhs(call.m.unwrap(), prec),
                "thm211" => closed_forms::theorem211_rhs(call.m.unwrap(), prec),
                other => Err(Error::Unsupported(format!("unknown builder {other:?}"))),
            }
        }
    }
}

/// Verify one identity at `digits` requested digits. The comparison runs at
/// `digits` and again at `digits + 10` working digits; both runs must clear
/// the pass threshold `digits - PASS_SLACK`.
pub fn verify_identity(ident: &Identity, digits: u32) -> VerificationReport {
    let start = Instant::now();
    let d1 = Precision::new(digits);
    let d2 = Precision::new(digits + 10);

    let outcome = (|| -> Result<(BigReal, BigReal, i64, bool)> {
        let lhs1 = eval_lhs(&ident.lhs, d1)?;
        let rhs1 = eval_rhs(&ident.rhs, d1)?;
        let lhs2 = eval_lhs(&ident.lhs, d2)?;
        let rhs2 = eval_rhs(&ident.rhs, d2)?;
        let cap = (digits + 10) as i64;
        let agreed1 = digits_agreed(&lhs1, &rhs1, cap);
        let agreed2 = digits_agreed(&lhs2, &rhs2, cap + 10);
        let threshold = digits as i64 - PASS_SLACK as i64;
        let pass = agreed1 >= threshold && agreed2 >= threshold;
        Ok((lhs1, rhs1, agreed1, pass))
    })();

    match outcome {
        Ok((lhs, rhs, agreed, pass)) => {
            let diff = (&lhs - &rhs).abs();
            VerificationReport {
                id: ident.id.clone(),
                lhs: lhs.to_string_digits(digits),
                rhs: rhs.to_string_digits(digits),
                abs_diff: diff.to_string_digits(6),
                digits_agreed: agreed,
                pass,
                suspect: ident.suspect,
                unconfirmed: false,
                note: ident.note.clone(),
                elapsed_ms: start.elapsed().as_millis(),
            }
        }
        Err(err) => {
            let unconfirmed = matches!(err, Error::AccelerationDisagreement { .. });
            let mut note = err.to_string();
            if let Some(extra) = &ident.note {
                note = format!("{note}; {extra}");
            }
            VerificationReport {
                id: ident.id.clone(),
                lhs: String::new(),
                rhs: String::new(),
                abs_diff: String::new(),
                digits_agreed: 0,
                pass: false,
                suspect: ident.suspect,
                unconfirmed,
                note: Some(note),
                elapsed_ms: start.elapsed().as_millis(),
            }
        }
    }
}

/// Verify one id from a registry.
pub fn verify(registry: &[Identity], id: &str, digits: u32) -> Result<VerificationReport> {
    let ident = registry
        .iter()
        .find(|x| x.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))?;
    Ok(verify_identity(ident, digits))
}

/// Select registry entries by filter: None selects everything, `"suspect"`
/// selects the suspect-flagged entries, anything else is an id prefix.
pub fn select<'a>(registry: &'a [Identity], filter: Option<&str>) -> Vec<&'a Identity> {
    let mut picked: Vec<&Identity> = match filter {
        None => registry.iter().collect(),
        Some("suspect") => registry.iter().filter(|x| x.suspect).collect(),
        Some(prefix) => registry.iter().filter(|x| x.id.starts_with(prefix)).collect(),
    };
    picked.sort_by(|a, b| a.id.cmp(&b.id));
    picked
}

/// Run verification over all matching entries, `workers` at a time.
/// Reports come back ordered by id; the summary counts pass/fail/unconfirmed.
pub fn verify_all(
    registry: &[Identity],
    filter: Option<&str>,
    digits: u32,
    workers: usize,
) -> Result<RunReport> {
    let picked = select(registry, filter);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("worker pool: {e}")))?;
    let mut reports: Vec<VerificationReport> =
        pool.install(|| picked.par_iter().map(|i| verify_identity(i, digits)).collect());
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = Summary {
        total: reports.len(),
        passed: reports.iter().filter(|r| r.pass).count(),
        failed: reports.iter().filter(|r| !r.pass && !r.unconfirmed).count(),
        unconfirmed: reports.iter().filter(|r| r.unconfirmed).count(),
    };
    Ok(RunReport { digits, reports, summary })
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Plain-text table rendering.
pub fn render_text(run: &RunReport) -> String {
    let mut out = String::new();
    for r in &run.reports {
        let status = if r.unconfirmed {
            "UNCONFIRMED"
        } else if r.pass {
            if r.suspect {
                "PASS*"
            } else {
                "PASS"
            }
        } else if r.suspect {
            "SUSPECT"
        } else {
            "FAIL"
        };
        out.push_str(&format!(
            "{:<16} {:<11} digits={:<4} lhs={} rhs={} diff={} {}ms",
            r.id, status, r.digits_agreed, r.lhs, r.rhs, r.abs_diff, r.elapsed_ms
        ));
        if let Some(n) = &r.note {
            out.push_str(&format!("  [{n}]"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "total {}  passed {}  failed {}  unconfirmed {}\n",
        run.summary.total, run.summary.passed, run.summary.failed, run.summary.unconfirmed
    ));
    out
}

/// JSON rendering (stable field order; deterministic modulo elapsed_ms).
pub fn render_json(run: &RunReport) -> String {
    serde_json::to_string_pretty(run).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_registry_parses() {
        let reg = bundled_registry();
        assert!(reg.len() >= 60, "registry has only {} entries", reg.len());
    }

    #[test]
    fn well_formed_three_entry_file() {
        let text = "\
a1 | value | 1 + 1 | 2 | Eq 0 | pass
a2 | integral_unit | x | 1/2 | Eq 0 | pass
a3 | series_direct | name=cb_8n | sqrt(2) | Eq 55 | pass
";
        let reg = load_registry_str(text).unwrap();
        assert_eq!(reg.len(), 3);
    }

    #[test]
    fn duplicate_id_rejected() {
        let text = "\
dup | value | 1 | 1 | r | pass
dup | value | 2 | 2 | r | pass
";
        let err = load_registry_str(text).unwrap_err();
        match err {
            Error::Registry { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("dup"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_parameter_rejected() {
        let bad = "b | integral_unit | x | @thm24(m=65) | r | pass\n";
        assert!(load_registry_str(bad).is_err());
        let bad = "b | integral_unit | x | @thm29(m=2) | r | pass\n";
        assert!(load_registry_str(bad).is_err());
        let bad = "b | integral_unit | x | @thm1(m=2,q=1) | r | pass\n";
        assert!(load_registry_str(bad).is_err());
    }

    #[test]
    fn suspect_requires_note() {
        let bad = "s | value | 1 | 1 | r | suspect\n";
        assert!(load_registry_str(bad).is_err());
        let ok = "s | value | 1 | 1 | r | suspect: documented\n";
        let reg = load_registry_str(ok).unwrap();
        assert!(reg[0].suspect);
        assert_eq!(reg[0].note.as_deref(), Some("documented"));
    }

    #[test]
    fn spec_format_example_entry() {
        let text = "ex08 | integral_unit | log(x^6+1)/(x^2+1) | pi/2*log(6) - 3*G | Eq 2 | pass\n";
        let reg = load_registry_str(text).unwrap();
        assert!(matches!(reg[0].lhs, Lhs::IntegralUnit(_)));
        let rep = verify(&reg, "ex08", 30).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.digits_agreed >= 25);
    }

    #[test]
    fn unknown_id_error() {
        let reg = bundled_registry();
        assert!(matches!(verify(&reg, "nosuch", 20), Err(Error::UnknownId(_))));
    }

    #[test]
    fn verify_single_examples() {
        let reg = bundled_registry();
        let rep = verify(&reg, "ex01", 30).unwrap();
        assert!(rep.pass && rep.digits_agreed >= 30, "{rep:?}");
        let rep = verify(&reg, "ex19", 30).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn suspect_entries_have_notes_and_reports() {
        let reg = bundled_registry();
        let run = verify_all(&reg, Some("suspect"), 25, 2).unwrap();
        assert!(run.summary.total >= 3);
        for r in &run.reports {
            assert!(r.suspect);
            assert!(r.note.as_deref().map_or(false, |n| !n.is_empty()));
            assert!(!r.abs_diff.is_empty());
        }
    }

    #[test]
    fn registry_coverage() {
        let reg = bundled_registry();
        for i in 1..=27 {
            let id = format!("ex{i:02}");
            assert!(reg.iter().any(|x| x.id == id), "missing {id}");
        }
        // every theorem family needs at least 3 parameter points
        for (prefix, min) in [
            ("thm1_", 3),
            ("cor1_", 3),
            ("thm24_", 3),
            ("thm25_", 3),
            ("thm26_", 3),
            ("thm27_", 3),
            ("thm28_", 3),
            ("thm29_", 3),
            ("thm210_", 3),
            ("thm211_", 3),
            ("thm31_", 2), // plus ex25 = 3 points of Theorem 3.1
            ("thm32_", 2), // plus ex26
            ("thm33_", 2), // plus ex27
            ("thm34_", 3),
        ] {
            let n = reg.iter().filter(|x| x.id.starts_with(prefix)).count();
            assert!(n >= min, "{prefix} has {n} entries, need {min}");
        }
    }

    #[test]
    fn precision_monotonicity_spot() {
        let reg = bundled_registry();
        for id in ["ex01", "val_psi1_quarter", "eq55"] {
            let lo = verify(&reg, id, 30).unwrap();
            let hi = verify(&reg, id, 50).unwrap();
            assert!(hi.digits_agreed >= lo.digits_agreed - 2, "{id}: {lo:?} vs {hi:?}");
        }
    }

    #[test]
    fn determinism_modulo_elapsed() {
        let reg = bundled_registry();
        let scrub = |run: &RunReport| {
            let mut v: serde_json::Value = serde_json::from_str(&render_json(run)).unwrap();
            for r in v["reports"].as_array_mut().unwrap() {
                r["elapsed_ms"] = 0.into();
            }
            v
        };
        let a = verify_all(&reg, Some("val_"), 30, 4).unwrap();
        let b = verify_all(&reg, Some("val_"), 30, 1).unwrap();
        assert_eq!(scrub(&a), scrub(&b));
    }
}
