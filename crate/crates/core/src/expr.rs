//! A small expression language for registry right-hand sides and integrands.
//!
//! Grammar: usual infix precedence; functions `sqrt log exp sin cos asin
//! psi0 psi1 cl2 li2`; constants `pi gamma G`; the single free variable `x`;
//! rational literals `a/b` (decimal literals are rejected so the registry
//! re-evaluates identically at any precision). `^` binds tighter than unary
//! minus and its exponent must be a rational constant.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numeric::{BigReal, Precision};
use crate::special;

/// Expression AST. Immutable and shareable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rational),
    Var,
    Pi,
    EulerGamma,
    CatalanG,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Rational),
    Sqrt(Box<Expr>),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    ArcSin(Box<Expr>),
    Psi0(Box<Expr>),
    Psi1(Box<Expr>),
    Cl2(Box<Expr>),
    Li2(Box<Expr>),
}

impl Expr {
    pub fn has_free_var(&self) -> bool {
        use Expr::*;
        match self {
            Var => true,
            Number(_) | Pi | EulerGamma | CatalanG => false,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.has_free_var() || b.has_free_var()
            }
            Pow(a, _) => a.has_free_var(),
            Neg(a) | Sqrt(a) | Log(a) | Exp(a) | Sin(a) | Cos(a) | ArcSin(a) | Psi0(a)
            | Psi1(a) | Cl2(a) | Li2(a) => a.has_free_var(),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let start = self.pos;
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => { out.push((Tok::Plus, start)); self.pos += 1; }
                b'-' => { out.push((Tok::Minus, start)); self.pos += 1; }
                b'*' => { out.push((Tok::Star, start)); self.pos += 1; }
                b'/' => { out.push((Tok::Slash, start)); self.pos += 1; }
                b'^' => { out.push((Tok::Caret, start)); self.pos += 1; }
                b'(' => { out.push((Tok::LParen, start)); self.pos += 1; }
                b')' => { out.push((Tok::RParen, start)); self.pos += 1; }
                b'0'..=b'9' => {
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos < self.src.len() && self.src[self.pos] == b'.' {
                        return Err(Error::Parse {
                            pos: self.pos,
                            msg: "decimal literals are not supported; use a rational a/b".into(),
                        });
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let n: Rational = text.parse().map_err(|_| Error::Parse {
                        pos: start,
                        msg: format!("bad integer literal {text:?}"),
                    })?;
                    out.push((Tok::Int(n), start));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((Tok::Ident(text.to_string()), start));
                }
                other => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unexpected character {:?}", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Parser (recursive descent)
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    len: usize,
}

/// Parse source text into an [`Expr`].
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, idx: 0, len: text.len() };
    let e = p.expr()?;
    if let Some((_, pos)) = p.peek() {
        return Err(Error::Parse { pos, msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.idx).cloned()
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn eof_pos(&self) -> usize {
        self.len
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.next();
            let exp = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    /// Exponent: a signed integer, or a parenthesized signed rational.
    fn exponent(&mut self) -> Result<Rational> {
        let (tok, pos) = self.next().ok_or(Error::Parse {
            pos: self.eof_pos(),
            msg: "expected exponent".into(),
        })?;
        match tok {
            Tok::Int(n) => Ok(n),
            Tok::Minus => match self.next() {
                Some((Tok::Int(n), _)) => Ok(-n),
                other => Err(Error::Parse {
                    pos: other.map(|(_, p)| p).unwrap_or(self.eof_pos()),
                    msg: "expected integer exponent after '-'".into(),
                }),
            },
            Tok::LParen => {
                let neg = matches!(self.peek(), Some((Tok::Minus, _)));
                if neg {
                    self.next();
                }
                let num = match self.next() {
                    Some((Tok::Int(n), _)) => n,
                    other => {
                        return Err(Error::Parse {
                            pos: other.map(|(_, p)| p).unwrap_or(self.eof_pos()),
                            msg: "expected rational exponent".into(),
                        })
                    }
                };
                let mut val = num;
                if let Some((Tok::Slash, _)) = self.peek() {
                    self.next();
                    match self.next() {
                        Some((Tok::Int(d), dpos)) => {
                            if d.cmp0() == std::cmp::Ordering::Equal {
                                return Err(Error::Parse {
                                    pos: dpos,
                                    msg: "zero denominator in exponent".into(),
                                });
                            }
                            val /= d;
                        }
                        other => {
                            return Err(Error::Parse {
                                pos: other.map(|(_, p)| p).unwrap_or(self.eof_pos()),
                                msg: "expected denominator".into(),
                            })
                        }
                    }
                }
                match self.next() {
                    Some((Tok::RParen, _)) => {}
                    other => {
                        return Err(Error::Parse {
                            pos: other.map(|(_, p)| p).unwrap_or(pos),
                            msg: "unclosed parenthesis in exponent".into(),
                        })
                    }
                }
                Ok(if neg { -val } else { val })
            }
            _ => Err(Error::Parse { pos, msg: "exponent must be a rational constant".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, pos) = self.next().ok_or(Error::Parse {
            pos: self.eof_pos(),
            msg: "unexpected end of input".into(),
        })?;
        match tok {
            Tok::Int(n) => Ok(Expr::Number(n)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => Err(Error::Parse { pos, msg: "unclosed parenthesis".into() }),
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                "gamma" => Ok(Expr::EulerGamma),
                "G" => Ok(Expr::CatalanG),
                _ => {
                    let ctor: fn(Box<Expr>) -> Expr = match name.as_str() {
                        "sqrt" => Expr::Sqrt,
                        "log" => Expr::Log,
                        "exp" => Expr::Exp,
                        "sin" => Expr::Sin,
                        "cos" => Expr::Cos,
                        "asin" => Expr::ArcSin,
                        "psi0" => Expr::Psi0,
                        "psi1" => Expr::Psi1,
                        "cl2" => Expr::Cl2,
                        "li2" => Expr::Li2,
                        _ => {
                            return Err(Error::Parse {
                                pos,
                                msg: format!("unknown identifier {name:?}"),
                            })
                        }
                    };
                    let open = match self.next() {
                        Some((Tok::LParen, p)) => p,
                        other => {
                            return Err(Error::Parse {
                                pos: other.map(|(_, p)| p).unwrap_or(self.eof_pos()),
                                msg: format!("expected '(' after function {name}"),
                            })
                        }
                    };
                    let arg = self.expr()?;
                    match self.next() {
                        Some((Tok::RParen, _)) => Ok(ctor(Box::new(arg))),
                        _ => Err(Error::Parse { pos: open, msg: "unclosed parenthesis".into() }),
                    }
                }
            },
            Tok::RParen => Err(Error::Parse { pos, msg: "unexpected ')'".into() }),
            _ => Err(Error::Parse { pos, msg: "expected a value".into() }),
        }
    }
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

// precedence levels: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atom 5
fn prec_of(e: &Expr) -> u8 {
    use Expr::*;
    match e {
        Add(..) | Sub(..) => 1,
        Mul(..) | Div(..) => 2,
        Neg(..) => 3,
        Pow(..) => 4,
        Number(n) => {
            if n.cmp0() == std::cmp::Ordering::Less || !n.is_integer() {
                2 // prints with '-' or '/'
            } else {
                5
            }
        }
        _ => 5,
    }
}

fn fmt_expr(e: &Expr, out: &mut String, min_prec: u8) {
    let p = prec_of(e);
    let parens = p < min_prec;
    if parens {
        out.push('(');
    }
    use Expr::*;
    match e {
        Number(n) => out.push_str(&n.to_string()),
        Var => out.push('x'),
        Pi => out.push_str("pi"),
        EulerGamma => out.push_str("gamma"),
        CatalanG => out.push('G'),
        Add(a, b) => {
            fmt_expr(a, out, 1);
            out.push_str(" + ");
            fmt_expr(b, out, 2);
        }
        Sub(a, b) => {
            fmt_expr(a, out, 1);
            out.push_str(" - ");
            fmt_expr(b, out, 2);
        }
        Mul(a, b) => {
            fmt_expr(a, out, 2);
            out.push('*');
            fmt_expr(b, out, 3);
        }
        Div(a, b) => {
            fmt_expr(a, out, 2);
            out.push('/');
            fmt_expr(b, out, 3);
        }
        Neg(a) => {
            out.push('-');
            fmt_expr(a, out, 3);
        }
        Pow(a, r) => {
            fmt_expr(a, out, 5);
            out.push('^');
            if r.is_integer() && r.cmp0() != std::cmp::Ordering::Less {
                out.push_str(&r.to_string());
            } else {
                out.push('(');
                out.push_str(&r.to_string());
                out.push(')');
            }
        }
        Sqrt(a) | Log(a) | Exp(a) | Sin(a) | Cos(a) | ArcSin(a) | Psi0(a) | Psi1(a)
        | Cl2(a) | Li2(a) => {
            let name = match e {
                Sqrt(_) => "sqrt",
                Log(_) => "log",
                Exp(_) => "exp",
                Sin(_) => "sin",
                Cos(_) => "cos",
                ArcSin(_) => "asin",
                Psi0(_) => "psi0",
                Psi1(_) => "psi1",
                Cl2(_) => "cl2",
                Li2(_) => "li2",
                _ => unreachable!(),
            };
            out.push_str(name);
            out.push('(');
            fmt_expr(a, out, 0);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        fmt_expr(self, &mut s, 0);
        write!(f, "{s}")
    }
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

/// Evaluate an expression to `prec` digits, delegating special functions.
///
/// `x_value` must be supplied iff the expression has a free variable.
pub fn evaluate(e: &Expr, x_value: Option<&BigReal>, prec: Precision) -> Result<BigReal> {
    if e.has_free_var() && x_value.is_none() {
        return Err(Error::Domain("expression has a free variable but no x was supplied".into()));
    }
    let bits = prec.bits();
    let x = x_value.map(|v| Float::with_val(bits, v.float()));
    let f = eval_float(e, x.as_ref(), bits)?;
    Ok(BigReal::raw(Float::with_val(bits, f), prec))
}

pub(crate) fn eval_float(e: &Expr, x: Option<&Float>, bits: u32) -> Result<Float> {
    use Expr::*;
    Ok(match e {
        Number(n) => Float::with_val(bits, n),
        Var => x
            .cloned()
            .ok_or_else(|| Error::Domain("free variable x without a value".into()))?,
        Pi => Float::with_val(bits, rug::float::Constant::Pi),
        EulerGamma => Float::with_val(bits, rug::float::Constant::Euler),
        CatalanG => special::catalan_float(bits),
        Add(a, b) => eval_float(a, x, bits)? + eval_float(b, x, bits)?,
        Sub(a, b) => eval_float(a, x, bits)? - eval_float(b, x, bits)?,
        Mul(a, b) => eval_float(a, x, bits)? * eval_float(b, x, bits)?,
        Div(a, b) => {
            let den = eval_float(b, x, bits)?;
            if den.is_zero() {
                return Err(Error::Domain("division by zero".into()));
            }
            eval_float(a, x, bits)? / den
        }
        Neg(a) => -eval_float(a, x, bits)?,
        Pow(a, r) => {
            let base = eval_float(a, x, bits)?;
            pow_rational_float(&base, r, bits)?
        }
        Sqrt(a) => {
            let v = eval_float(a, x, bits)?;
            if v.is_sign_negative() && !v.is_zero() {
                return Err(Error::Domain("sqrt of a negative value".into()));
            }
            v.sqrt()
        }
        Log(a) => {
            let v = eval_float(a, x, bits)?;
            if v.is_zero() || v.is_sign_negative() {
                return Err(Error::Domain("log of a non-positive value".into()));
            }
            v.ln()
        }
        Exp(a) => eval_float(a, x, bits)?.exp(),
        Sin(a) => eval_float(a, x, bits)?.sin(),
        Cos(a) => eval_float(a, x, bits)?.cos(),
        ArcSin(a) => {
            let v = eval_float(a, x, bits)?;
            if v.clone().abs() > 1 {
                return Err(Error::Domain("asin of a value outside [-1, 1]".into()));
            }
            v.asin()
        }
        Psi0(a) => {
            let v = eval_float(a, x, bits)?;
            if v.is_zero() || v.is_sign_negative() {
                return Err(Error::Domain("psi0 requires a positive argument".into()));
            }
            special::digamma_float(&v, bits)
        }
        Psi1(a) => {
            let v = eval_float(a, x, bits)?;
            if v.is_zero() || v.is_sign_negative() {
                return Err(Error::Domain("psi1 requires a positive argument".into()));
            }
            special::trigamma_float(&v, bits)
        }
        Cl2(a) => special::clausen2_float(&eval_float(a, x, bits)?, bits),
        Li2(a) => {
            let v = eval_float(a, x, bits)?;
            if v > 1 {
                return Err(Error::Domain("li2 requires an argument <= 1".into()));
            }
            special::dilog_float(&v, bits)
        }
    })
}

pub(crate) fn pow_rational_float(base: &Float, r: &Rational, bits: u32) -> Result<Float> {
    use rug::ops::Pow;
    if r.is_integer() {
        let e = r.numer().to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
        if base.is_zero() && e <= 0 {
            return Err(Error::Domain("zero raised to a non-positive power".into()));
        }
        let ef = Float::with_val(64, e);
        return Ok(Float::with_val(bits, base.pow(&ef)));
    }
    if base.is_zero() {
        return if r.cmp0() == std::cmp::Ordering::Greater {
            Ok(Float::with_val(bits, 0))
        } else {
            Err(Error::Domain("zero raised to a non-positive power".into()))
        };
    }
    if base.is_sign_negative() {
        return Err(Error::Domain("negative base with non-integer exponent".into()));
    }
    let e = Float::with_val(bits, r);
    Ok(Float::with_val(bits, base.pow(&e)))
}
