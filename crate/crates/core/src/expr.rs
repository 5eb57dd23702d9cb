//! Text expressions for ring elements and matrices.
//!
//! Grammar (lowest to highest precedence, binary operators left-associative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INTEGER)*
//! primary := INTEGER | IDENT | '(' expr ')'
//! ```
//!
//! Expressions are evaluated in the ring's evaluation ring (ℚ for ℤ, the
//! rational function field for polynomial and proper rings) and the result is
//! then brought back into the target ring.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::mat_alg::Matrix;
use crate::ring::{Ring, RingElement, RingError};

/// Exponents above this are rejected.
pub const MAX_EXPONENT: u32 = 32;
const MAX_DEPTH: usize = 200;
const MAX_TOKENS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Var(String),
    Neg(Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    Group(Box<ExprAst>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("bad exponent at {pos}: {msg}")]
    BadExponent { pos: usize, msg: String },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("division by non-unit at {pos}: {msg}")]
    NotInvertible { pos: usize, msg: String },
    #[error("value outside ring: {0}")]
    ValueOutsideRing(String),
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("entry ({row},{col}): {error}")]
    Entry {
        row: usize,
        col: usize,
        error: Box<ParseError>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "implicit multiplication is not allowed; use `*`".into(),
                    });
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Expression tree annotated with source positions (for evaluation errors).
#[derive(Clone, Debug)]
struct Node {
    pos: usize,
    kind: NodeKind,
}

#[derive(Clone, Debug)]
enum NodeKind {
    Int(BigInt),
    Var(String),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
    Group(Box<Node>),
}

impl Node {
    fn to_ast(&self) -> ExprAst {
        match &self.kind {
            NodeKind::Int(n) => ExprAst::Int(n.clone()),
            NodeKind::Var(v) => ExprAst::Var(v.clone()),
            NodeKind::Neg(e) => ExprAst::Neg(Box::new(e.to_ast())),
            NodeKind::Binary(op, a, b) => {
                ExprAst::Binary(*op, Box::new(a.to_ast()), Box::new(b.to_ast()))
            }
            NodeKind::Pow(b, e) => ExprAst::Pow(Box::new(b.to_ast()), *e),
            NodeKind::Group(e) => ExprAst::Group(Box::new(e.to_ast())),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Plus) => Some(BinOp::Add),
            Some(Tok::Minus) => Some(BinOp::Sub),
            _ => None,
        } {
            let pos = self.pos();
            self.at += 1;
            let rhs = self.term()?;
            lhs = binary(pos, op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = match self.peek() {
            Some(Tok::Star) => Some(BinOp::Mul),
            Some(Tok::Slash) => Some(BinOp::Div),
            _ => None,
        } {
            let pos = self.pos();
            self.at += 1;
            let rhs = self.unary()?;
            lhs = binary(pos, op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            let pos = self.pos();
            self.at += 1;
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Node {
                pos,
                kind: NodeKind::Neg(Box::new(inner)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let mut base = self.primary()?;
        while let Some(Tok::Caret) = self.peek() {
            let pos = self.pos();
            self.at += 1;
            let e = match self.toks.get(self.at) {
                Some((_, Tok::Int(n))) => n.clone(),
                Some((p, Tok::Minus)) => {
                    return Err(ParseError::BadExponent {
                        pos: *p,
                        msg: "exponent must be nonnegative".into(),
                    })
                }
                Some((p, _)) => {
                    return Err(ParseError::BadExponent {
                        pos: *p,
                        msg: "exponent must be an integer literal".into(),
                    })
                }
                None => return self.err("missing exponent"),
            };
            let epos = self.pos();
            self.at += 1;
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => {
                    return Err(ParseError::BadExponent {
                        pos: epos,
                        msg: format!("exponent exceeds {MAX_EXPONENT}"),
                    })
                }
            };
            base = Node {
                pos,
                kind: NodeKind::Pow(Box::new(base), e),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Node {
                    pos,
                    kind: NodeKind::Int(n),
                })
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Node {
                    pos,
                    kind: NodeKind::Var(name),
                })
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(Node {
                    pos,
                    kind: NodeKind::Group(Box::new(inner)),
                })
            }
            Some(_) => self.err("expected a number, variable or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn binary(pos: usize, op: BinOp, lhs: Node, rhs: Node) -> Node {
    Node {
        pos,
        kind: NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)),
    }
}

fn parse_node(text: &str) -> Result<Node, ParseError> {
    let toks = tokenize(text)?;
    if toks.len() > MAX_TOKENS {
        return Err(ParseError::Syntax {
            pos: toks[MAX_TOKENS].0,
            msg: format!("expression longer than {MAX_TOKENS} tokens"),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        depth: 0,
    };
    let node = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(node)
}

/// Parse text into an expression tree without evaluating it.
pub fn parse_ast(text: &str) -> Result<ExprAst, ParseError> {
    parse_node(text).map(|n| n.to_ast())
}

fn eval(node: &Node, ring: &Ring) -> Result<RingElement, ParseError> {
    match &node.kind {
        NodeKind::Int(n) => Ok(ring.from_bigint(n)),
        NodeKind::Var(name) => match ring.var(name) {
            Ok(v) => Ok(v),
            Err(RingError::UnknownVariable(_)) => Err(ParseError::UnknownVariable {
                pos: node.pos,
                name: name.clone(),
            }),
            Err(e) => Err(ParseError::ValueOutsideRing(e.to_string())),
        },
        NodeKind::Neg(e) => Ok(-eval(e, ring)?),
        NodeKind::Group(e) => eval(e, ring),
        NodeKind::Pow(b, e) => Ok(eval(b, ring)?.pow(*e)),
        NodeKind::Binary(op, lhs, rhs) => {
            let a = eval(lhs, ring)?;
            let b = eval(rhs, ring)?;
            Ok(match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
                BinOp::Div => {
                    if b.is_zero() {
                        return Err(ParseError::DivisionByZero { pos: node.pos });
                    }
                    let inv = b.try_invert().map_err(|e| ParseError::NotInvertible {
                        pos: node.pos,
                        msg: e.to_string(),
                    })?;
                    &a * &inv
                }
            })
        }
    }
}

/// Parse and evaluate a scalar expression in `ring`.
pub fn parse_scalar(text: &str, ring: &Ring) -> Result<RingElement, ParseError> {
    let node = parse_node(text)?;
    let eval_ring = ring.evaluation_ring();
    let v = eval(&node, &eval_ring)?;
    ring.coerce(&v)
        .map_err(|e| ParseError::ValueOutsideRing(e.to_string()))
}

/// Parse a rectangular matrix of expression strings.
pub fn parse_matrix<S: AsRef<str>>(rows: &[Vec<S>], ring: &Ring) -> Result<Matrix, ParseError> {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.is_empty() || ncols == 0 {
        return Err(ParseError::EmptyMatrix);
    }
    let mut entries = Vec::with_capacity(rows.len() * ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(ParseError::RaggedRows {
                row: i,
                found: row.len(),
                expected: ncols,
            });
        }
        for (j, text) in row.iter().enumerate() {
            let x = parse_scalar(text.as_ref(), ring).map_err(|e| ParseError::Entry {
                row: i,
                col: j,
                error: Box::new(e),
            })?;
            entries.push(x);
        }
    }
    Ok(
        Matrix::from_entries(ring.clone(), rows.len(), ncols, entries)
            .expect("shape checked above"),
    )
}

/// Canonical text for a scalar.
pub fn print_scalar(x: &RingElement) -> String {
    x.to_canonical_string()
}

/// Matrix entries as rows of canonical strings (the JSON matrix shape).
pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_canonical_string())
                .collect()
        })
        .collect()
}

/// Canonical text for a matrix: a JSON array of rows of expression strings.
pub fn print_matrix(m: &Matrix) -> String {
    serde_json::to_string(&matrix_strings(m)).expect("strings serialize")
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Int(n) => write!(f, "{n}"),
            ExprAst::Var(v) => f.write_str(v),
            ExprAst::Neg(e) => write!(f, "-{e}"),
            ExprAst::Binary(op, a, b) => {
                let c = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({a}{c}{b})")
            }
            ExprAst::Pow(b, e) => write!(f, "{b}^{e}"),
            ExprAst::Group(e) => write!(f, "({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(parse_ast("-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse_ast("a-b-c").unwrap().to_string(), "((a-b)-c)");
        assert_eq!(parse_ast("a/b*c").unwrap().to_string(), "((a/b)*c)");
        assert_eq!(parse_ast("1+2*3").unwrap().to_string(), "(1+(2*3))");
        let z = Ring::integers();
        assert_eq!(parse_scalar("-2^2", &z).unwrap(), z.from_int(-4));
        assert_eq!(parse_scalar("2-3-4", &z).unwrap(), z.from_int(-5));
        assert_eq!(parse_scalar("(2^2)^3", &z).unwrap(), z.from_int(64));
    }

    #[test]
    fn multivariate_g() {
        let r = Ring::ratfunc(&["s1", "s2", "s3"]).unwrap();
        let g = parse_scalar("s1*s2*s3/(s1^2+2*s2+s3)", &r).unwrap();
        assert_eq!(g.to_string(), "s1*s2*s3/(s1^2+2*s2+s3)");
        for v in ["s1", "s2", "s3"] {
            assert!(g.is_proper_in(v).unwrap());
        }
    }

    #[test]
    fn zero_in_every_ring() {
        for r in [
            Ring::integers(),
            Ring::zbeta(),
            Ring::modp(3).unwrap(),
            Ring::proper(&["x"], &["s"]).unwrap(),
        ] {
            assert!(parse_scalar("0", &r).unwrap().is_zero());
        }
    }

    #[test]
    fn proper_ring_membership() {
        let r = Ring::proper::<&str>(&[], &["s"]).unwrap();
        assert!(parse_scalar("1/s", &r).is_ok());
        assert!(matches!(
            parse_scalar("s", &r),
            Err(ParseError::ValueOutsideRing(_))
        ));
        assert!(parse_scalar("s/(s+1)", &r).unwrap().is_unit());
    }

    #[test]
    fn integer_division() {
        let z = Ring::integers();
        assert!(matches!(
            parse_scalar("1/2", &z),
            Err(ParseError::ValueOutsideRing(_))
        ));
        assert_eq!(parse_scalar("4/2", &z).unwrap(), z.from_int(2));
        assert!(matches!(
            parse_scalar("1/(2-2)", &z),
            Err(ParseError::DivisionByZero { .. })
        ));
        let zb = Ring::zbeta();
        assert!(matches!(
            parse_scalar("1/b", &zb),
            Err(ParseError::NotInvertible { .. })
        ));
        assert_eq!(parse_scalar("b*b", &zb).unwrap().to_string(), "-3+b");
    }

    #[test]
    fn errors_carry_positions() {
        let z = Ring::integers();
        assert_eq!(
            parse_scalar("2s", &z),
            Err(ParseError::Syntax {
                pos: 1,
                msg: "implicit multiplication is not allowed; use `*`".into()
            })
        );
        assert!(matches!(
            parse_scalar("1+", &z),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_scalar("x", &z),
            Err(ParseError::UnknownVariable { pos: 0, .. })
        ));
        let q = Ring::ratfunc(&["s"]).unwrap();
        assert!(matches!(
            parse_scalar("s^s", &q),
            Err(ParseError::BadExponent { pos: 2, .. })
        ));
        assert!(matches!(
            parse_scalar("s^-1", &q),
            Err(ParseError::BadExponent { .. })
        ));
        assert!(matches!(
            parse_scalar("s^100", &q),
            Err(ParseError::BadExponent { .. })
        ));
        assert!(parse_scalar("", &q).is_err());
        assert!(parse_scalar("(s", &q).is_err());
        assert!(parse_scalar("s)", &q).is_err());
    }

    #[test]
    fn matrices() {
        let z = Ring::integers();
        let g = parse_matrix(
            &[
                vec!["0", "0", "0"],
                vec!["0", "0", "1"],
                vec!["0", "1", "0"],
            ],
            &z,
        )
        .unwrap();
        assert_eq!(g.rows(), 3);
        assert!(g[(1, 2)].is_one());
        let i2 = parse_matrix(&[vec!["1", "0"], vec!["0", "1"]], &z).unwrap();
        assert_eq!(i2, Matrix::identity(&z, 2));
        assert_eq!(
            parse_matrix(&[vec!["1", "2"], vec!["3"]], &z),
            Err(ParseError::RaggedRows {
                row: 1,
                found: 1,
                expected: 2
            })
        );
        assert!(matches!(
            parse_matrix(&[vec!["1", "x"]], &z),
            Err(ParseError::Entry { row: 0, col: 1, .. })
        ));
        assert_eq!(print_matrix(&i2), r#"[["1","0"],["0","1"]]"#);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let q = Ring::rationals();
        let text = format!("{}1{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse_scalar(&text, &q).is_err());
        let negs = format!("{}1", "-".repeat(5000));
        assert!(parse_scalar(&negs, &q).is_err());
    }
}
