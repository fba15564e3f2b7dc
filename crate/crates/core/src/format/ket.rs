//! Parsing of ket notation `r1|x1> + r2|x2> + ...`.
//!
//! Rendering lives on [`Outcome::ket`]; the grammar accepted here is the
//! one produced there, with arbitrary whitespace between tokens:
//!
//! ```text
//! dist   := "0" | term ("+" term)*
//! term   := prob "|" point ">"
//! prob   := digits ("/" digits)?
//! point  := label | digits | "k" digits "(" point ")" | dist
//! ```
//!
//! Which point form applies is decided by the expected type, not by
//! lookahead, so a label may itself look like a number.

use crate::dist::{Dist, SubDist};
use crate::error::ParseError;
use crate::prob::Prob;
use crate::space::{Label, Outcome, Space, Tagged, RESERVED_LABEL_CHARS};
use crate::tagged::{HyperDist, TaggedDist};

type PResult<T> = Result<T, ParseError>;

/// A cursor over ket text.
pub struct KetParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> KetParser<'a> {
    pub fn new(src: &'a str) -> Self {
        KetParser { src, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Ket {
            input: self.src.to_string(),
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |f| format!("`{f}`"));
            Err(self.error(format!("expected `{c}`, found {found}")))
        }
    }

    fn digits(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        let d = &self.rest()[..len];
        self.pos += len;
        Ok(d)
    }

    pub fn prob(&mut self) -> PResult<Prob> {
        let start = self.pos;
        let n = self.digits()?;
        let text = if self.eat('/') {
            let d = self.digits()?;
            format!("{n}/{d}")
        } else {
            n.to_string()
        };
        text.parse().map_err(|_| {
            self.pos = start;
            self.error(format!("invalid probability `{text}`"))
        })
    }

    pub fn numeral(&mut self) -> PResult<usize> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.error(format!("number `{d}` out of range")))
    }

    /// A label of `space`: the longest run of characters that are not ket syntax.
    pub fn label(&mut self, space: &Space) -> PResult<Label> {
        self.skip_ws();
        let len: usize = self
            .rest()
            .chars()
            .take_while(|c| !c.is_whitespace() && !RESERVED_LABEL_CHARS.contains(c))
            .map(char::len_utf8)
            .sum();
        if len == 0 {
            return Err(self.error("expected a label"));
        }
        let name = &self.rest()[..len];
        let label = space
            .label(name)
            .map_err(|_| self.error(format!("unknown label `{name}` in space `{}`", space.name())))?;
        self.pos += len;
        Ok(label)
    }

    /// `k<i>(<point>)`.
    pub fn tagged<T>(&mut self, inner: &dyn Fn(&mut Self) -> PResult<T>) -> PResult<Tagged<T>> {
        self.expect('k')?;
        let tag = self.numeral()?;
        self.expect('(')?;
        let value = inner(self)?;
        self.expect(')')?;
        Ok(Tagged::new(tag, value))
    }

    /// Weighted terms; the lone numeral `0` denotes no terms.
    pub fn terms<T>(&mut self, point: &dyn Fn(&mut Self) -> PResult<T>) -> PResult<Vec<(T, Prob)>> {
        let mut out = Vec::new();
        loop {
            let p = self.prob()?;
            if out.is_empty() && p.is_zero() && self.peek() != Some('|') {
                return Ok(out);
            }
            self.expect('|')?;
            let x = point(self)?;
            self.expect('>')?;
            out.push((x, p));
            if !self.eat('+') {
                return Ok(out);
            }
        }
    }

    pub fn dist<T: Outcome>(&mut self, point: &dyn Fn(&mut Self) -> PResult<T>) -> PResult<Dist<T>> {
        let start = self.pos;
        let terms = self.terms(point)?;
        Dist::from_terms(terms).map_err(|e| {
            self.pos = start;
            self.error(e.to_string())
        })
    }

    pub fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}` after value"))),
        }
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut KetParser) -> PResult<T>) -> PResult<T> {
    let mut p = KetParser::new(src);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

fn invalid(what: &str, e: crate::error::Error) -> ParseError {
    ParseError::Invalid {
        object: what.to_string(),
        message: e.to_string(),
    }
}

/// A distribution over a label space.
pub fn parse_dist(src: &str, space: &Space) -> PResult<Dist<Label>> {
    whole(src, |p| p.dist(&|p| p.label(space)))
}

/// A subdistribution over a label space.
pub fn parse_subdist(src: &str, space: &Space) -> PResult<SubDist<Label>> {
    let terms = whole(src, |p| p.terms(&|p| p.label(space)))?;
    SubDist::from_terms(terms).map_err(|e| invalid(src, e))
}

/// A distribution over a numeric space.
pub fn parse_numeric_dist(src: &str) -> PResult<Dist<usize>> {
    whole(src, |p| p.dist(&|p| p.numeral()))
}

/// A distribution over `n·A`.
pub fn parse_tagged(src: &str, space: &Space, arity: usize) -> PResult<TaggedDist<Label>> {
    let d = whole(src, |p| p.dist(&|p| p.tagged(&|p| p.label(space))))?;
    TaggedDist::new(arity, d).map_err(|e| invalid(src, e))
}

/// A distribution over `n·D(A)`.
pub fn parse_hyper(src: &str, space: &Space, arity: usize) -> PResult<HyperDist<Label>> {
    let d = whole(src, |p| {
        p.dist(&|p| p.tagged(&|p| p.dist(&|p| p.label(space))))
    })?;
    TaggedDist::new(arity, d).map_err(|e| invalid(src, e))
}

/// A tagged inner distribution `k<i>(<dist>)`, the key of a hyper distribution entry.
pub fn parse_hyper_point(src: &str, space: &Space) -> PResult<Tagged<Dist<Label>>> {
    whole(src, |p| p.tagged(&|p| p.dist(&|p| p.label(space))))
}

/// A witness entry key `k<j>(<dist over n·D(A)>)`.
pub fn parse_witness_point(src: &str, space: &Space) -> PResult<Tagged<Dist<Tagged<Dist<Label>>>>> {
    whole(src, |p| {
        p.tagged(&|p| p.dist(&|p| p.tagged(&|p| p.dist(&|p| p.label(space)))))
    })
}
