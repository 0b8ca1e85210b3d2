//! Expression language for the analytic functions whose Euler products we
//! evaluate: a small AST, a recursive-descent parser, exact Taylor
//! expansion through [`crate::qseries`], and high-precision point
//! evaluation through [`crate::mpreal`].
//!
//! Grammar (whitespace-insensitive, left-associative, `^` binds tighter
//! than `*`):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := base ('^' ['-'] rational)?
//! base     := 'z' | 'pi' | rational | '(' expr ')'
//!           | ('ln' | 'exp' | 'sqrt') '(' expr ')' | '-' base
//! rational := integer ('/' integer)?
//! ```
//!
//! A numeric literal greedily consumes `/ integer`, so `1/2` is the exact
//! rational one-half; since `x^p/q` and `(x^p)^(1/q)` do not differ for
//! literals this never changes a value, only the shape of the tree.

use std::fmt;

use rug::{Integer, Rational};
use thiserror::Error;

use crate::mpreal::{BigReal, RealError};
use crate::qseries::RationalSeries;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FuncError {
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },
    #[error("division by zero while evaluating `{0}`")]
    DivideByZero(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
}

/// Expression tree for analytic functions of one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var,
    Const(Rational),
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Rational),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Const(_) | Expr::Pi => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var() || b.contains_var()
            }
            Expr::Neg(a) | Expr::Ln(a) | Expr::Exp(a) | Expr::Sqrt(a) => a.contains_var(),
            Expr::Pow(a, _) => a.contains_var(),
        }
    }
}

impl fmt::Display for Expr {
    /// Canonical printed form with explicit parentheses;
    /// `parse(&expr.to_string())` reproduces the tree for any tree the
    /// parser can produce.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "z"),
            Expr::Pi => write!(f, "pi"),
            Expr::Const(q) => write!(f, "{q}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            // a bare constant after '/' would re-lex as part of a rational
            // literal, so keep the denominator delimited
            Expr::Div(a, b) => match **b {
                Expr::Const(_) => write!(f, "({a} / ({b}))"),
                _ => write!(f, "({a} / {b})"),
            },
            // '-' binds to a base, so '^' on the printed operand would
            // re-attach to the negation; keep an inner Pow delimited
            Expr::Neg(a) => match **a {
                Expr::Pow(..) => write!(f, "(-({a}))"),
                _ => write!(f, "(-{a})"),
            },
            Expr::Pow(a, r) => {
                match **a {
                    // already self-delimiting
                    Expr::Var
                    | Expr::Pi
                    | Expr::Add(..)
                    | Expr::Sub(..)
                    | Expr::Mul(..)
                    | Expr::Div(..)
                    | Expr::Neg(..)
                    | Expr::Ln(..)
                    | Expr::Exp(..)
                    | Expr::Sqrt(..) => write!(f, "{a}^{r}"),
                    Expr::Const(_) | Expr::Pow(..) => write!(f, "({a})^{r}"),
                }
            }
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Ident(String),
    Int(Integer),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FuncError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let val: Integer = text[start..i].parse().expect("digits");
                toks.push((Tok::Int(val), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(FuncError::Parse {
                    position: i,
                    message: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), FuncError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(FuncError::Parse {
                position: self.here(),
                message: format!("expected {what}"),
            })
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, FuncError> {
        let mut node = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    node = Expr::Add(Box::new(node), Box::new(self.parse_term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    node = Expr::Sub(Box::new(node), Box::new(self.parse_term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, FuncError> {
        let mut node = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    node = Expr::Mul(Box::new(node), Box::new(self.parse_factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    node = Expr::Div(Box::new(node), Box::new(self.parse_factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, FuncError> {
        let base = self.parse_base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exponent = self.parse_rational(true)?;
            return Ok(Expr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<Expr, FuncError> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.parse_base()?))),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "closing ')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "z" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                "ln" | "exp" | "sqrt" => {
                    self.expect(&Tok::LParen, "'(' after function name")?;
                    let inner = Box::new(self.parse_expr()?);
                    self.expect(&Tok::RParen, "closing ')'")?;
                    Ok(match name.as_str() {
                        "ln" => Expr::Ln(inner),
                        "exp" => Expr::Exp(inner),
                        _ => Expr::Sqrt(inner),
                    })
                }
                other => Err(FuncError::Parse {
                    position,
                    message: format!("unknown identifier '{other}'"),
                }),
            },
            Some(Tok::Int(_)) => {
                self.pos -= 1;
                Ok(Expr::Const(self.parse_rational(false)?))
            }
            _ => Err(FuncError::Parse {
                position,
                message: "expected an expression".into(),
            }),
        }
    }

    /// A rational literal `integer ('/' integer)?`, with an optional
    /// leading '-' in exponent position. The '/' is consumed only when an
    /// integer follows, so `1/z` stays a division.
    fn parse_rational(&mut self, allow_sign: bool) -> Result<Rational, FuncError> {
        let negative = allow_sign && self.peek() == Some(&Tok::Minus);
        if negative {
            self.pos += 1;
        }
        let position = self.here();
        let numerator = match self.bump() {
            Some(Tok::Int(v)) => v,
            _ => {
                return Err(FuncError::Parse {
                    position,
                    message: "expected a rational number".into(),
                })
            }
        };
        let mut value = Rational::from(numerator);
        if self.peek() == Some(&Tok::Slash) {
            if let Some((Tok::Int(_), _)) = self.toks.get(self.pos + 1) {
                self.pos += 1;
                let denom_pos = self.here();
                let denominator = match self.bump() {
                    Some(Tok::Int(v)) => v,
                    _ => unreachable!("lookahead checked"),
                };
                if denominator == 0 {
                    return Err(FuncError::Parse {
                        position: denom_pos,
                        message: "zero denominator".into(),
                    });
                }
                value /= Rational::from(denominator);
            }
        }
        Ok(if negative { -value } else { value })
    }
}

/// Parse an expression in the module grammar.
pub fn parse(text: &str) -> Result<Expr, FuncError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.parse_expr()?;
    if parser.pos != parser.toks.len() {
        return Err(FuncError::Parse {
            position: parser.here(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(expr)
}

fn series_err(node: &Expr, err: crate::qseries::SeriesError) -> FuncError {
    FuncError::Domain {
        node: node.to_string(),
        reason: err.to_string(),
    }
}

fn taylor_rec(expr: &Expr, order: usize) -> Result<RationalSeries, FuncError> {
    match expr {
        Expr::Var => Ok(RationalSeries::var(order)),
        Expr::Const(q) => Ok(RationalSeries::constant(q.clone(), order)),
        Expr::Pi => Err(FuncError::Domain {
            node: "pi".into(),
            reason: "transcendental constant has no exact rational series".into(),
        }),
        Expr::Add(a, b) => Ok(taylor_rec(a, order)?.add(&taylor_rec(b, order)?)),
        Expr::Sub(a, b) => Ok(taylor_rec(a, order)?.sub(&taylor_rec(b, order)?)),
        Expr::Mul(a, b) => Ok(taylor_rec(a, order)?.mul(&taylor_rec(b, order)?)),
        Expr::Div(a, b) => taylor_rec(a, order)?
            .div(&taylor_rec(b, order)?)
            .map_err(|e| series_err(expr, e)),
        Expr::Neg(a) => Ok(taylor_rec(a, order)?.neg()),
        Expr::Pow(a, r) => taylor_rec(a, order)?
            .pow(r)
            .map_err(|e| series_err(expr, e)),
        Expr::Ln(a) => taylor_rec(a, order)?.log().map_err(|e| series_err(expr, e)),
        Expr::Exp(a) => taylor_rec(a, order)?.exp().map_err(|e| series_err(expr, e)),
        Expr::Sqrt(a) => taylor_rec(a, order)?
            .pow(&Rational::from((1, 2)))
            .map_err(|e| series_err(expr, e)),
    }
}

/// Exact rational Taylor coefficients of `expr` to `order` inclusive.
///
/// Division by a series of positive valuation shortens the computable
/// order, so subtrees are re-expanded with just enough padding to deliver
/// the full requested order.
pub fn taylor(expr: &Expr, order: usize) -> Result<RationalSeries, FuncError> {
    let mut pad = 0usize;
    loop {
        let s = taylor_rec(expr, order + pad)?;
        if s.order() >= order {
            return Ok(s.truncated(order));
        }
        pad += order - s.order();
        if pad > order + 1024 {
            return Err(FuncError::Domain {
                node: expr.to_string(),
                reason: "denominator valuation exhausts the expansion order".into(),
            });
        }
    }
}

fn real_err(node: &Expr, err: RealError) -> FuncError {
    FuncError::Domain {
        node: node.to_string(),
        reason: err.to_string(),
    }
}

/// Evaluate `expr` at the point `x` with all arithmetic at `prec` bits.
///
/// The result's relative error is bounded by (node count) rounding steps
/// of `2^{2-prec}` each.
pub fn eval_point(expr: &Expr, x: &BigReal, prec: u32) -> Result<BigReal, FuncError> {
    match expr {
        Expr::Var => Ok(x.rounded_to(prec)),
        Expr::Const(q) => Ok(BigReal::from_rational(q, prec)),
        Expr::Pi => Ok(BigReal::pi(prec)),
        Expr::Add(a, b) => Ok(eval_point(a, x, prec)?.add(&eval_point(b, x, prec)?)),
        Expr::Sub(a, b) => Ok(eval_point(a, x, prec)?.sub(&eval_point(b, x, prec)?)),
        Expr::Mul(a, b) => Ok(eval_point(a, x, prec)?.mul(&eval_point(b, x, prec)?)),
        Expr::Div(a, b) => {
            let den = eval_point(b, x, prec)?;
            if den.is_zero() {
                return Err(FuncError::DivideByZero(expr.to_string()));
            }
            Ok(eval_point(a, x, prec)?.div(&den))
        }
        Expr::Neg(a) => Ok(eval_point(a, x, prec)?.neg()),
        Expr::Pow(a, r) => eval_point(a, x, prec)?
            .pow_rational(r)
            .map_err(|e| real_err(expr, e)),
        Expr::Ln(a) => eval_point(a, x, prec)?.ln().map_err(|e| real_err(expr, e)),
        Expr::Exp(a) => Ok(eval_point(a, x, prec)?.exp()),
        Expr::Sqrt(a) => eval_point(a, x, prec)?
            .sqrt()
            .map_err(|e| real_err(expr, e)),
    }
}

/// A named Euler-product constant: the function `f` (with `f(0) = 1`,
/// `f'(0) = 0`), a constant prefactor expression, the evaluation radius,
/// a bound on `|f'/f|` on that radius, and the default head/tail split.
#[derive(Debug, Clone)]
pub struct ConstantSpec {
    pub name: String,
    pub f: Expr,
    pub prefactor: Expr,
    /// Radius `R` of the circle on which `log_deriv_bound` holds.
    pub radius: Rational,
    /// Upper bound `B` for `|f'(z)/f(z)|` on `|z| = R`.
    pub log_deriv_bound: Rational,
    /// Default index of the first prime handled by the zeta tail.
    pub start_index: usize,
}

/// Built-in constants.
///
/// `ramanujan-a1`: `π^{-1/2} ∏_p sqrt(p² - p) · ln(p/(p-1))`, i.e.
/// `f(z) = (-ln(1-z)/z)·sqrt(1-z)` with prefactor `1/sqrt(pi)`.
///
/// `avg-divisor-c`: the average-divisor constant,
/// `f(z) = ln(1+z)/(z·sqrt(1-z))` with the same prefactor.
///
/// Both ship `R = 9/10` and `B = 18`: on `|z| = 9/10` the triangle
/// inequality together with `|(1∓z)ln(1∓z)| >= |z| - |z|²` gives
/// `|f'/f| <= 2/|z| + 3/(2(1-|z|)) = 20/9 + 15 < 18`, and the default
/// split starts the tail at the 7th prime so `R·p_7 = 15.3 > 1`.
pub fn builtin(name: &str) -> Result<ConstantSpec, FuncError> {
    let spec = |f: &str, prefactor: &str| -> ConstantSpec {
        ConstantSpec {
            name: name.to_string(),
            f: parse(f).expect("built-in expression parses"),
            prefactor: parse(prefactor).expect("built-in prefactor parses"),
            radius: Rational::from((9, 10)),
            log_deriv_bound: Rational::from(18),
            start_index: 7,
        }
    };
    match name {
        "ramanujan-a1" => Ok(spec("(-ln(1-z)/z)*sqrt(1-z)", "1/sqrt(pi)")),
        "avg-divisor-c" => Ok(spec("ln(1+z)/(z*sqrt(1-z))", "1/sqrt(pi)")),
        other => Err(FuncError::UnknownConstant(other.to_string())),
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["ramanujan-a1", "avg-divisor-c"]
}
