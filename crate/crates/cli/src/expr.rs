//! Expression language over the quantum torus of a sausage graph.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '·' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] INT)?
//! primary := INT | 'A' | 'Q[' edge ']' | 'C[' INT ']' | 'E[' (edge ':' INT),* ']'
//!          | 'sigma(' curve ')' | 'commA(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! Curves use the sausage grammar, e.g. `t[a0] t-[c1] beta[1]`. The canonical text
//! form of a torus element is itself an expression, so printing and parsing round-trip.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use skein_torus_core::embed::{EmbedError, SigmaTable};
use skein_torus_core::exactalg::{Frac, LPoly};
use skein_torus_core::qtorus::{commutator_a, QTElem, QtError};
use skein_torus_core::sausage::{CurveId, EExps, SausageError, SausageGraph, ZERO_E};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    A,
    /// `Q[e]` or `C[j]`, by variable index.
    Var(usize),
    E(EExps),
    Sigma(CurveId),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    CommA(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownEdge,
    UnknownCurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Qt(#[from] QtError),
    #[error("cannot invert `{0}`: only scalars and single terms are invertible")]
    NotInvertible(String),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    g: &'a SausageGraph,
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn error_at(&self, pos: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
        ParseError { kind, line, column, message: message.into() }
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax, message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !is_ident(c)).unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.syntax("expected an integer"));
        }
        self.pos += len;
        Ok(rest[..len].parse().expect("digits"))
    }

    fn small_int(&mut self) -> Result<i32, ParseError> {
        let neg = self.eat('-');
        let start = self.pos;
        let v = self.int()?;
        let v: i32 = i32::try_from(v).map_err(|_| self.error_at(start, ParseErrorKind::Syntax, "exponent too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn bracket_text(&mut self) -> Result<(usize, String), ParseError> {
        self.expect('[')?;
        let start = self.pos;
        let end = self.src[start..].find(']').ok_or_else(|| self.syntax("unclosed `[`"))? + start;
        self.pos = end + 1;
        Ok((start, self.src[start..end].trim().to_string()))
    }

    fn edge(&self, pos: usize, name: &str) -> Result<usize, ParseError> {
        self.g
            .edge_index(name)
            .map_err(|_| self.error_at(pos, ParseErrorKind::UnknownEdge, format!("unknown edge `{name}`")))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') || self.eat('·') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), self.small_int()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(c) if is_ident(c) => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "A" => Ok(Expr::A),
                    "Q" => {
                        let (pos, e) = self.bracket_text()?;
                        let idx = self.edge(pos, &e)?;
                        if !self.g.is_internal(idx) {
                            return Err(self.error_at(pos, ParseErrorKind::UnknownEdge, format!("`{e}` is not internal")));
                        }
                        Ok(Expr::Var(self.g.var(idx)))
                    }
                    "C" => {
                        let (pos, j) = self.bracket_text()?;
                        let j: usize = j.parse().map_err(|_| self.error_at(pos, ParseErrorKind::Syntax, "expected a boundary index"))?;
                        if j == 0 || j > self.g.n_univalent() {
                            return Err(self.error_at(pos, ParseErrorKind::UnknownEdge, format!("no boundary variable C[{j}]")));
                        }
                        Ok(Expr::Var(self.g.var(self.g.n_internal() + j - 1)))
                    }
                    "E" => self.e_monomial(),
                    "sigma" => self.sigma(),
                    "commA" => {
                        self.expect('(')?;
                        let x = self.expr()?;
                        self.expect(',')?;
                        let y = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::CommA(Box::new(x), Box::new(y)))
                    }
                    _ => Err(self.error_at(start, ParseErrorKind::Syntax, format!("unknown name `{name}`"))),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
        }
    }

    fn e_monomial(&mut self) -> Result<Expr, ParseError> {
        let (pos, body) = self.bracket_text()?;
        let mut k = ZERO_E;
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, exp) = item.split_once(':').ok_or_else(|| self.error_at(pos, ParseErrorKind::Syntax, "expected `edge:exponent`"))?;
            let e = self.edge(pos, name.trim())?;
            if !self.g.is_internal(e) {
                return Err(self.error_at(pos, ParseErrorKind::UnknownEdge, format!("`{}` is not internal", name.trim())));
            }
            let v: i16 = exp.trim().parse().map_err(|_| self.error_at(pos, ParseErrorKind::Syntax, "bad exponent"))?;
            k[e] += v;
        }
        Ok(Expr::E(k))
    }

    fn sigma(&mut self) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let start = self.pos;
        let end = self.src[start..].find(')').ok_or_else(|| self.syntax("unclosed `sigma(`"))? + start;
        let text = &self.src[start..end];
        let curve = self.g.parse_curve(text).map_err(|e| {
            let kind = match e {
                SausageError::UnknownEdge(_) | SausageError::WrongRole { .. } => ParseErrorKind::UnknownEdge,
                _ => ParseErrorKind::UnknownCurve,
            };
            self.error_at(start, kind, e.to_string())
        })?;
        self.pos = end + 1;
        Ok(Expr::Sigma(curve))
    }
}

/// Parses an expression against a graph's edge and curve names.
pub fn parse_expression(src: &str, g: &SausageGraph) -> Result<Expr, ParseError> {
    let mut p = Parser { src, pos: 0, g };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluation context; the image table is built on first use of `sigma`.
pub struct Evaluator {
    graph: Arc<SausageGraph>,
    table: OnceLock<SigmaTable>,
}

impl Evaluator {
    pub fn new(graph: &Arc<SausageGraph>) -> Self {
        Evaluator { graph: graph.clone(), table: OnceLock::new() }
    }

    pub fn with_table(table: SigmaTable) -> Self {
        let graph = table.graph().clone();
        Evaluator { graph, table: OnceLock::from(table) }
    }

    fn table(&self) -> Result<&SigmaTable, EmbedError> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = SigmaTable::build(&self.graph)?;
        Ok(self.table.get_or_init(|| t))
    }

    fn invert(&self, x: &QTElem) -> Result<QTElem, EvalError> {
        if let Some(f) = x.as_scalar() {
            let inv = f.inv().map_err(|_| EvalError::NotInvertible(x.to_text()))?;
            return Ok(QTElem::scalar(&self.graph, inv));
        }
        x.inv_monomial().map_err(|_| EvalError::NotInvertible(x.to_text()))
    }

    pub fn eval(&self, e: &Expr) -> Result<QTElem, EvalError> {
        let g = &self.graph;
        let n = g.nvars();
        Ok(match e {
            Expr::Int(c) => QTElem::scalar(g, Frac::from_int(n, c.clone())),
            Expr::A => QTElem::from_poly(g, LPoly::var_pow(n, 0, 1)),
            Expr::Var(v) => QTElem::from_poly(g, LPoly::var_pow(n, *v, 1)),
            Expr::E(k) => QTElem::e_pow(g, *k),
            Expr::Sigma(c) => self.table()?.sigma(c)?,
            Expr::Neg(x) => self.eval(x)?.neg(),
            Expr::Add(x, y) => self.eval(x)?.add(&self.eval(y)?),
            Expr::Sub(x, y) => self.eval(x)?.sub(&self.eval(y)?),
            Expr::Mul(x, y) => self.eval(x)?.mul(&self.eval(y)?),
            Expr::Div(x, y) => self.eval(x)?.mul(&self.invert(&self.eval(y)?)?),
            Expr::Pow(x, k) => {
                let base = self.eval(x)?;
                let base = if *k < 0 { self.invert(&base)? } else { base };
                base.pow(k.unsigned_abs())
            }
            Expr::CommA(x, y) => commutator_a(&self.eval(x)?, &self.eval(y)?)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Arc<SausageGraph> {
        Arc::new(SausageGraph::build(2, true).unwrap())
    }

    #[test]
    fn shapes() {
        let g = g2();
        let e = parse_expression("sigma(beta[1]) + sigma(alpha[a0])", &g).unwrap();
        assert!(matches!(e, Expr::Add(ref x, ref y) if matches!(**x, Expr::Sigma(_)) && matches!(**y, Expr::Sigma(_))));
        let e = parse_expression("commA(sigma(alpha[a0]), sigma(beta[1]))", &g).unwrap();
        assert!(matches!(e, Expr::CommA(..)));
        let e = parse_expression("-A^-2 * Q[a0]^2", &g).unwrap();
        assert!(matches!(e, Expr::Mul(..)));
    }

    #[test]
    fn errors_are_positioned() {
        let g = g2();
        let err = parse_expression("sigma(t[b7] beta[1])", &g).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownEdge);
        assert_eq!((err.line, err.column), (1, 7));
        let err = parse_expression("sigma(beta[9])", &g).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownCurve);
        let err = parse_expression("1 +\n  * 2", &g).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!((err.line, err.column), (2, 3));
        assert!(parse_expression("Q[zz]", &g).is_err());
        assert!(parse_expression("(1 + 2", &g).is_err());
    }

    #[test]
    fn pants_text() {
        let g = g2();
        let ev = Evaluator::new(&g);
        let x = ev.eval(&parse_expression("sigma(alpha[a0])", &g).unwrap()).unwrap();
        assert_eq!(x.to_text(), "(-1)*A^2*Q[a0]^2 + (-1)*A^-2*Q[a0]^-2");
    }

    #[test]
    fn division_and_inverse_powers() {
        let g = g2();
        let ev = Evaluator::new(&g);
        let x = ev.eval(&parse_expression("E[a0:1] * Q[a0] / (Q[a0]^2 - 1) * (Q[a0]^2 - 1)", &g).unwrap()).unwrap();
        let y = ev.eval(&parse_expression("E[a0:1] * Q[a0]", &g).unwrap()).unwrap();
        assert_eq!(x, y);
        let z = ev.eval(&parse_expression("(E[a0:1] * Q[a0])^-1 * E[a0:1] * Q[a0]", &g).unwrap()).unwrap();
        assert_eq!(z, QTElem::one(&g));
        assert!(ev.eval(&parse_expression("1 / (E[a0:1] + 1)", &g).unwrap()).is_err());
    }
}
