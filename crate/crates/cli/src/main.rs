//! Command-line front end: list the identity registry, verify entries,
//! evaluate expressions, integrate, and sum series.
//!
//! Exit codes: 0 all requested work passed, 1 verification failure,
//! 2 usage or domain error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use logint::expr;
use logint::numeric::Precision;
use logint::quadrature;
use logint::series::{self, SeriesSpec};
use logint::verification::{self, Identity};
use logint::{BigReal, Rational};

#[derive(Parser)]
#[command(name = "logint", version, about = "High-precision verifier for logarithmic-integral and Euler-BBP identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RegistryOpt {
    /// Path to a registry file (default: bundled registry, or $LOGINT_REGISTRY)
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List registry identities with their references
    List {
        #[command(flatten)]
        registry: RegistryOpt,
        /// Only ids starting with this prefix
        #[arg(long)]
        filter: Option<String>,
    },
    /// Verify registry identities
    Verify {
        #[command(flatten)]
        registry: RegistryOpt,
        /// Identity ids to verify
        ids: Vec<String>,
        /// Verify every entry
        #[arg(long)]
        all: bool,
        /// Only ids starting with this prefix (or the word "suspect")
        #[arg(long)]
        filter: Option<String>,
        /// Requested decimal digits
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// Output format: text or json
        #[arg(long, default_value = "text")]
        format: String,
        /// Worker threads
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Evaluate a closed-form expression
    Eval {
        /// Expression, e.g. "pi/2*log(2) - G"
        expr: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Integrate an expression in x
    Integrate {
        /// Integrand, e.g. "log(x^4+1)/(x^2+1)"
        expr: String,
        /// unit, halfline, or a,b (b may be inf)
        #[arg(long, default_value = "unit")]
        domain: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Sum a series given by a spec string
    Sum {
        /// e.g. "euler_bbp mod=6 pattern=+1,-3,+5" or "direct name=cb2_hn"
        spec: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
}

fn load(opt: &RegistryOpt) -> Result<Vec<Identity>, String> {
    if let Some(path) = &opt.registry {
        return verification::load_registry(path).map_err(|e| e.to_string());
    }
    if let Ok(path) = std::env::var("LOGINT_REGISTRY") {
        if !path.is_empty() {
            return verification::load_registry(std::path::Path::new(&path))
                .map_err(|e| e.to_string());
        }
    }
    Ok(verification::bundled_registry())
}

fn check_digits(digits: u32) -> Result<(), String> {
    if (1..=1000).contains(&digits) {
        Ok(())
    } else {
        Err(format!("digits must lie in 1..=1000, got {digits}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::List { registry, filter } => {
            let reg = load(&registry)?;
            for ident in verification::select(&reg, filter.as_deref()) {
                let status = if ident.suspect { " [suspect]" } else { "" };
                println!("{:<16} {:<24} {}{}", ident.id, ident.kind, ident.reference, status);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { registry, ids, all, filter, digits, format, workers } => {
            check_digits(digits)?;
            let reg = load(&registry)?;
            let run = if all || filter.is_some() {
                verification::verify_all(&reg, filter.as_deref(), digits, workers)
                    .map_err(|e| e.to_string())?
            } else {
                if ids.is_empty() {
                    return Err("give identity ids, --filter, or --all".into());
                }
                let mut reports = Vec::new();
                for id in &ids {
                    reports
                        .push(verification::verify(&reg, id, digits).map_err(|e| e.to_string())?);
                }
                let summary = verification::Summary {
                    total: reports.len(),
                    passed: reports.iter().filter(|r| r.pass).count(),
                    failed: reports.iter().filter(|r| !r.pass && !r.unconfirmed).count(),
                    unconfirmed: reports.iter().filter(|r| r.unconfirmed).count(),
                };
                verification::RunReport { digits, reports, summary }
            };
            match format.as_str() {
                "text" => print!("{}", verification::render_text(&run)),
                "json" => println!("{}", verification::render_json(&run)),
                other => return Err(format!("unknown format {other:?}")),
            }
            let all_ok = run.reports.iter().all(|r| r.pass || r.suspect);
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Eval { expr: text, digits } => {
            check_digits(digits)?;
            let e = expr::parse(&text).map_err(|e| e.to_string())?;
            let v = expr::evaluate(&e, None, Precision::new(digits)).map_err(|e| e.to_string())?;
            println!("{}", v.to_string_digits(digits));
            Ok(ExitCode::SUCCESS)
        }
        Command::Integrate { expr: text, domain, digits } => {
            check_digits(digits)?;
            let e = expr::parse(&text).map_err(|e| e.to_string())?;
            let prec = Precision::new(digits);
            let v = match domain.as_str() {
                "unit" => quadrature::integrate_unit(&quadrature::IntegralSpec::unit(e), prec),
                "halfline" => {
                    quadrature::integrate_halfline(&quadrature::IntegralSpec::halfline(e), prec)
                }
                other => {
                    let (a_s, b_s) = other
                        .split_once(',')
                        .ok_or_else(|| format!("bad domain {other:?}; use unit, halfline, or a,b"))?;
                    let a: Rational =
                        a_s.trim().parse().map_err(|_| format!("bad endpoint {a_s:?}"))?;
                    let a = BigReal::from_rational(&a, prec);
                    match b_s.trim() {
                        "inf" => quadrature::integrate_to_inf(&e, &a, prec),
                        s => {
                            let b: Rational =
                                s.parse().map_err(|_| format!("bad endpoint {s:?}"))?;
                            let b = BigReal::from_rational(&b, prec);
                            quadrature::integrate_finite(&e, &a, &b, prec)
                        }
                    }
                }
            }
            .map_err(|e| e.to_string())?;
            println!("{}", v.to_string_digits(digits));
            Ok(ExitCode::SUCCESS)
        }
        Command::Sum { spec, digits } => {
            check_digits(digits)?;
            let spec = spec.trim();
            let (kind, body) = spec
                .split_once(char::is_whitespace)
                .ok_or_else(|| format!("bad series spec {spec:?}"))?;
            // tolerate a documentation token like m=3 in euler_bbp specs
            let body: String = body
                .split_whitespace()
                .filter(|tok| !(kind == "euler_bbp" && tok.starts_with("m=")))
                .collect::<Vec<_>>()
                .join(" ");
            let parsed = SeriesSpec::parse_spec(kind, &body).map_err(|e| e.to_string())?;
            let v = series::evaluate_series(&parsed, Precision::new(digits))
                .map_err(|e| e.to_string())?;
            println!("{}", v.to_string_digits(digits));
            Ok(ExitCode::SUCCESS)
        }
    }
}
