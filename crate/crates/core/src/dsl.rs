//! Text syntax for representations.
//!
//! ```text
//! rep      := factor { "x" factor } ;
//! factor   := speh | comp | segment | "1" ;
//! speh     := "u(" segment "," INT ")" ;
//! comp     := "pi(" speh "," RAT ")" ;
//! segment  := "St(" ID "," INT ")" | "nu^{" RAT "}*" segment | "D(" ID ";" RAT ".." RAT ")" ;
//! RAT      := INT | INT "/" INT | "-" RAT ;
//! ```
//!
//! Whitespace may appear between tokens. Every node and every error carries
//! a 1-based (line, column) position.

use std::fmt;

use thiserror::Error;

use crate::alphabet::{is_token, Alphabet};
use crate::error::Error;
use num_traits::CheckedSub;

use crate::rational::{in_open_unit_half, is_nonneg_integer, Exponent};
use crate::segment::Segment;
use crate::unitary::{ComplementaryFactor, Factor, SpehFactor, UnitaryRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Position,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    SegmentLit { id: String, length: u32 },
    TwistedSegment { shift: Exponent, segment: Box<Expr> },
    EndpointSegment { id: String, low: Exponent, high: Exponent },
    Speh { segment: Box<Expr>, k: i64 },
    Comp { speh: Box<Expr>, alpha: Exponent },
    Product(Vec<Expr>),
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{pos}: syntax error: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        pos: Position,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: {error}")]
    Semantic { pos: Position, error: Error },
}

impl DslError {
    pub fn position(&self) -> Position {
        match self {
            DslError::Syntax { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

type ParseResult<T> = Result<T, DslError>;

/// Upper bound for segment lengths and Speh multipliers in source text, so
/// that degrees stay far from `u64` overflow.
pub const MAX_SMALL_INT: i64 = 65_535;

const FACTOR_START: &[&str] = &["u(", "pi(", "St(", "nu^{", "D(", "1"];
const SEGMENT_START: &[&str] = &["St(", "nu^{", "D("];

struct Parser<'a> {
    src: &'a str,
    at: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn position_of(&self, at: usize) -> Position {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        Position {
            line,
            column: before[line_start..].chars().count() + 1,
        }
    }

    fn pos(&self) -> Position {
        self.position_of(self.at)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.at..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.at = self.src.len() - trimmed.len();
    }

    fn found(&self) -> String {
        match self.rest().chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    fn syntax<T>(&self, expected: &[&str]) -> ParseResult<T> {
        Err(DslError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|e| format!("`{e}`")).collect(),
            found: self.found(),
        })
    }

    fn semantic<T>(&self, pos: Position, error: Error) -> ParseResult<T> {
        Err(DslError::Semantic { pos, error })
    }

    fn peek(&mut self, lit: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(lit)
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.peek(lit) {
            self.at += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> ParseResult<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.syntax(&[lit])
        }
    }

    fn rep(&mut self) -> ParseResult<Expr> {
        let pos = self.pos();
        let mut factors = vec![self.factor()?];
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            if !self.eat("x") {
                return Err(DslError::Syntax {
                    pos: self.pos(),
                    expected: vec!["`x`".into(), "end of input".into()],
                    found: self.found(),
                });
            }
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Expr {
                kind: ExprKind::Product(factors),
                pos,
            })
        }
    }

    fn factor(&mut self) -> ParseResult<Expr> {
        self.skip_ws();
        let pos = self.pos();
        if self.peek("u(") {
            self.speh()
        } else if self.eat("pi(") {
            let speh = self.speh()?;
            self.expect(",")?;
            self.skip_ws();
            let alpha_pos = self.pos();
            let alpha = self.rational()?;
            if !in_open_unit_half(&alpha) {
                return self.semantic(alpha_pos, Error::AlphaOutOfRange(alpha));
            }
            self.expect(")")?;
            Ok(Expr {
                kind: ExprKind::Comp {
                    speh: Box::new(speh),
                    alpha,
                },
                pos,
            })
        } else if SEGMENT_START.iter().any(|s| self.rest().starts_with(s)) {
            self.segment()
        } else if self.eat("1") {
            Ok(Expr {
                kind: ExprKind::Trivial,
                pos,
            })
        } else {
            self.syntax(FACTOR_START)
        }
    }

    fn speh(&mut self) -> ParseResult<Expr> {
        self.skip_ws();
        let pos = self.pos();
        self.expect("u(")?;
        let segment = self.segment()?;
        self.expect(",")?;
        self.skip_ws();
        let k_pos = self.pos();
        let k = self.integer()?;
        if k < 1 {
            return self.semantic(k_pos, Error::BadMultiplier { k, min: 1 });
        }
        if k > MAX_SMALL_INT {
            return Err(DslError::Syntax {
                pos: k_pos,
                expected: vec![format!("a multiplier <= {MAX_SMALL_INT}")],
                found: k.to_string(),
            });
        }
        self.expect(")")?;
        Ok(Expr {
            kind: ExprKind::Speh {
                segment: Box::new(segment),
                k,
            },
            pos,
        })
    }

    fn segment(&mut self) -> ParseResult<Expr> {
        self.skip_ws();
        let pos = self.pos();
        if self.eat("St(") {
            let id = self.ident()?;
            self.expect(",")?;
            self.skip_ws();
            let len_pos = self.pos();
            let length = self.integer()?;
            if length > MAX_SMALL_INT {
                return Err(DslError::Syntax {
                    pos: len_pos,
                    expected: vec![format!("a segment length <= {MAX_SMALL_INT}")],
                    found: length.to_string(),
                });
            }
            let length = length as u32;
            self.expect(")")?;
            Ok(Expr {
                kind: ExprKind::SegmentLit { id, length },
                pos,
            })
        } else if self.eat("nu^{") {
            let shift = self.rational()?;
            self.expect("}*")?;
            let inner = self.segment()?;
            Ok(Expr {
                kind: ExprKind::TwistedSegment {
                    shift,
                    segment: Box::new(inner),
                },
                pos,
            })
        } else if self.eat("D(") {
            let id = self.ident()?;
            self.expect(";")?;
            let low = self.rational()?;
            self.expect("..")?;
            let high = self.rational()?;
            self.expect(")")?;
            match high.checked_sub(&low) {
                None => return self.semantic(pos, Error::Overflow),
                Some(span) if !is_nonneg_integer(&span) => {
                    return self.semantic(pos, Error::InvalidEndpoints { low, high })
                }
                Some(_) => {}
            }
            Ok(Expr {
                kind: ExprKind::EndpointSegment { id, low, high },
                pos,
            })
        } else {
            self.syntax(SEGMENT_START)
        }
    }

    fn ident(&mut self) -> ParseResult<String> {
        self.skip_ws();
        let pos = self.pos();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(i, c)| !(c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        let id = &rest[..end];
        if !is_token(id) {
            return self.syntax(&["identifier"]);
        }
        self.at += end;
        if self.alphabet.rho(id).is_err() {
            return self.semantic(pos, Error::UnknownSymbol(id.to_string()));
        }
        Ok(id.to_string())
    }

    fn integer(&mut self) -> ParseResult<i64> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return self.syntax(&["integer"]);
        }
        match rest[..end].parse::<i64>() {
            Ok(n) => {
                self.at += end;
                Ok(n)
            }
            Err(_) => Err(DslError::Syntax {
                pos: self.pos(),
                expected: vec!["an integer that fits in 64 bits".into()],
                found: rest[..end].to_string(),
            }),
        }
    }

    fn rational(&mut self) -> ParseResult<Exponent> {
        if self.eat("-") {
            return Ok(-self.rational()?);
        }
        let numer = self.integer()?;
        if !self.eat("/") {
            return Ok(Exponent::from_integer(numer));
        }
        self.skip_ws();
        let denom_pos = self.pos();
        let denom = self.integer()?;
        if denom == 0 {
            return Err(DslError::Syntax {
                pos: denom_pos,
                expected: vec!["non-zero denominator".into()],
                found: "`0`".into(),
            });
        }
        Ok(Exponent::new(numer, denom))
    }

    fn finish(&mut self) -> ParseResult<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.syntax(&["end of input"])
        }
    }
}

/// Parses a representation expression, resolving symbols against `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Expr, DslError> {
    let mut p = Parser {
        src: text,
        at: 0,
        alphabet,
    };
    let e = p.rep()?;
    p.finish()?;
    Ok(e)
}

/// Parses a single segment expression (`St(..)`, `nu^{..}*..` or `D(..)`).
pub fn parse_segment(text: &str, alphabet: &Alphabet) -> Result<Segment, DslError> {
    let mut p = Parser {
        src: text,
        at: 0,
        alphabet,
    };
    let e = p.segment()?;
    p.finish()?;
    lower_segment(&e, alphabet)
}

/// Parses a rational literal such as `1/4`, `-3` or `-1/2`.
pub fn parse_rational(text: &str) -> Result<Exponent, DslError> {
    let empty = Alphabet::from_symbols(Vec::new()).expect("empty alphabet is valid");
    let mut p = Parser {
        src: text,
        at: 0,
        alphabet: &empty,
    };
    let r = p.rational()?;
    p.finish()?;
    Ok(r)
}

fn semantic(pos: Position, error: Error) -> DslError {
    DslError::Semantic { pos, error }
}

fn lower_segment(e: &Expr, alphabet: &Alphabet) -> Result<Segment, DslError> {
    let rho = |id: &str| alphabet.rho(id).map_err(|err| semantic(e.pos, err));
    match &e.kind {
        ExprKind::SegmentLit { id, length } => Ok(Segment::st(rho(id)?, *length)),
        ExprKind::TwistedSegment { shift, segment } => {
            lower_segment(segment, alphabet)?
                .checked_twist(*shift)
                .map_err(|err| semantic(e.pos, err))
        }
        ExprKind::EndpointSegment { id, low, high } => {
            Segment::from_endpoints(rho(id)?, *low, *high).map_err(|err| semantic(e.pos, err))
        }
        _ => Err(semantic(
            e.pos,
            Error::TypeError("expected a segment".to_string()),
        )),
    }
}

fn lower_speh(e: &Expr, alphabet: &Alphabet) -> Result<SpehFactor, DslError> {
    match &e.kind {
        ExprKind::Speh { segment, k } => {
            let delta = lower_segment(segment, alphabet)?;
            SpehFactor::new(delta, *k).map_err(|err| semantic(segment.pos, err))
        }
        _ => Err(semantic(
            e.pos,
            Error::TypeError("expected a Speh factor `u(..)`".to_string()),
        )),
    }
}

/// Lowers an expression to its canonical representation. Bare segments
/// become `u(segment, 1)`.
pub fn lower(e: &Expr, alphabet: &Alphabet) -> Result<UnitaryRep, DslError> {
    let mut factors = Vec::new();
    collect_factors(e, alphabet, &mut factors)?;
    Ok(UnitaryRep::from_factors(factors))
}

fn collect_factors(e: &Expr, alphabet: &Alphabet, out: &mut Vec<Factor>) -> Result<(), DslError> {
    match &e.kind {
        ExprKind::Product(children) => {
            for c in children {
                collect_factors(c, alphabet, out)?;
            }
        }
        ExprKind::Trivial => {}
        ExprKind::Speh { .. } => out.push(Factor::Speh(lower_speh(e, alphabet)?)),
        ExprKind::Comp { speh, alpha } => {
            let base = lower_speh(speh, alphabet)?;
            let c = ComplementaryFactor::from_base(base, *alpha).map_err(|err| semantic(e.pos, err))?;
            out.push(Factor::Complementary(c));
        }
        ExprKind::SegmentLit { .. } | ExprKind::TwistedSegment { .. } | ExprKind::EndpointSegment { .. } => {
            let delta = lower_segment(e, alphabet)?;
            out.push(Factor::Speh(
                SpehFactor::new(delta, 1).map_err(|err| semantic(e.pos, err))?,
            ));
        }
    }
    Ok(())
}

/// `parse` followed by `lower`.
pub fn evaluate(text: &str, alphabet: &Alphabet) -> Result<UnitaryRep, DslError> {
    lower(&parse(text, alphabet)?, alphabet)
}

pub fn print_canonical(rep: &UnitaryRep, alphabet: &Alphabet) -> String {
    rep.display(alphabet).to_string()
}
