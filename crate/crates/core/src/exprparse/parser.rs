//! Pratt parser producing a located syntax tree.

use num_bigint::BigInt;

use super::lexer::{lex, Tok, Token};
use super::{ParseError, ParseErrorKind, MAX_DEPTH};

#[derive(Clone, Debug)]
pub(crate) enum NodeKind {
    Num(BigInt),
    Ident(String),
    Neg(Box<Node>),
    /// Terms with a flag for subtraction; the first flag is false.
    Sum(Vec<(bool, Node)>),
    /// Factors with a flag for division; the first flag is false.
    Product(Vec<(bool, Node)>),
    Pow(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub kind: NodeKind,
    pub line: usize,
    pub col: usize,
    pub start: usize,
    pub end: usize,
}

impl Node {
    /// True if any identifier in the subtree satisfies `pred`.
    pub(crate) fn any_ident(&self, pred: &dyn Fn(&str) -> bool) -> bool {
        match &self.kind {
            NodeKind::Num(_) => false,
            NodeKind::Ident(s) => pred(s),
            NodeKind::Neg(a) => a.any_ident(pred),
            NodeKind::Sum(xs) | NodeKind::Product(xs) => xs.iter().any(|(_, a)| a.any_ident(pred)),
            NodeKind::Pow(a, b) => a.any_ident(pred) || b.any_ident(pred),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn infix_bp(t: &Tok) -> Option<(u8, u8)> {
    match t {
        Tok::Plus | Tok::Minus => Some((10, 11)),
        Tok::Star | Tok::Slash => Some((20, 21)),
        Tok::Caret => Some((41, 40)),
        _ => None,
    }
}

const PREFIX_MINUS_BP: u8 = 30;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            kind: ParseErrorKind::Unexpected {
                found: t.tok.describe(),
                expected: expected.to_string(),
            },
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Node, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let t = self.peek();
            return Err(ParseError {
                line: t.line,
                col: t.col,
                kind: ParseErrorKind::TooDeep,
            });
        }
        let r = self.expr_inner(min_bp);
        self.depth -= 1;
        r
    }

    fn expr_inner(&mut self, min_bp: u8) -> Result<Node, ParseError> {
        let t = self.bump();
        let mut lhs = match t.tok {
            Tok::Num(n) => Node {
                kind: NodeKind::Num(n),
                line: t.line,
                col: t.col,
                start: t.start,
                end: t.end,
            },
            Tok::Ident(s) => Node {
                kind: NodeKind::Ident(s),
                line: t.line,
                col: t.col,
                start: t.start,
                end: t.end,
            },
            Tok::Minus => {
                let a = self.expr(PREFIX_MINUS_BP)?;
                Node {
                    line: t.line,
                    col: t.col,
                    start: t.start,
                    end: a.end,
                    kind: NodeKind::Neg(Box::new(a)),
                }
            }
            Tok::LParen => {
                let mut a = self.expr(0)?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.err_here("`)`"));
                }
                let close = self.bump();
                a.start = t.start;
                a.end = close.end;
                a.line = t.line;
                a.col = t.col;
                a
            }
            _ => {
                self.pos -= usize::from(t.tok != Tok::Eof);
                return Err(self.err_here("an operand"));
            }
        };
        loop {
            let op = self.peek().tok.clone();
            let Some((lbp, rbp)) = infix_bp(&op) else {
                break;
            };
            if lbp < min_bp {
                break;
            }
            self.bump();
            let rhs = self.expr(rbp)?;
            let (line, col, start, end) = (lhs.line, lhs.col, lhs.start, rhs.end);
            // chains of + - and * / stay flat so long inputs do not nest
            let flag = matches!(op, Tok::Minus | Tok::Slash);
            let kind = match (op, lhs.kind) {
                (Tok::Plus | Tok::Minus, NodeKind::Sum(mut xs)) => {
                    xs.push((flag, rhs));
                    NodeKind::Sum(xs)
                }
                (Tok::Star | Tok::Slash, NodeKind::Product(mut xs)) => {
                    xs.push((flag, rhs));
                    NodeKind::Product(xs)
                }
                (op, kind) => {
                    let a = Node {
                        kind,
                        line,
                        col,
                        start,
                        end: lhs.end,
                    };
                    match op {
                        Tok::Plus | Tok::Minus => NodeKind::Sum(vec![(false, a), (flag, rhs)]),
                        Tok::Star | Tok::Slash => NodeKind::Product(vec![(false, a), (flag, rhs)]),
                        _ => NodeKind::Pow(Box::new(a), Box::new(rhs)),
                    }
                }
            };
            lhs = Node {
                kind,
                line,
                col,
                start,
                end,
            };
        }
        Ok(lhs)
    }
}

pub(crate) fn parse(src: &str) -> Result<Node, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let n = p.expr(0)?;
    if p.peek().tok != Tok::Eof {
        return Err(p.err_here("an operator or end of input"));
    }
    Ok(n)
}
