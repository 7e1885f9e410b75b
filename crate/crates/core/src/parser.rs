//! Parser for coupling expressions:
//!
//! ```text
//! expr     := harmonic | coupling
//! harmonic := "Y[" INT "](" IDENT ")"
//! coupling := "[" expr "x" expr "][" INT "]"
//! ```
//!
//! Whitespace between tokens is ignored.

use thiserror::Error;

use crate::reduce::CouplingExpr;
use crate::tensor::VectorSymbol;
use crate::wigner::triangle;

/// Byte range `[start, end)` in the source string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("triangle rule fails: {l3} is not between |{l1}-{l2}| and {l1}+{l2}")]
    Triangle {
        span: SourceSpan,
        l1: u32,
        l2: u32,
        l3: u32,
    },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Triangle { span, .. } => *span,
        }
    }

    /// The message, the source line and carets under the offending span.
    pub fn diagnostic(&self, src: &str) -> String {
        let span = self.span();
        let start = src[..span.start.min(src.len())].chars().count();
        let width = src
            .get(span.start..span.end.min(src.len()))
            .map(|s| s.chars().count())
            .unwrap_or(0)
            .max(1);
        format!("error: {self}\n  {src}\n  {}{}", " ".repeat(start), "^".repeat(width))
    }
}

pub fn parse(src: &str) -> Result<CouplingExpr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?.0;
    p.ws();
    if p.pos < src.len() {
        return Err(p.syntax(p.pos, src.len(), "unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, start: usize, end: usize, message: &str) -> ParseError {
        ParseError::Syntax {
            span: SourceSpan { start, end },
            message: message.to_string(),
        }
    }

    fn ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src[self.pos..].chars().next()
    }

    fn here_span(&self) -> (usize, usize) {
        let end = self.src[self.pos..]
            .chars()
            .next()
            .map(|c| self.pos + c.len_utf8())
            .unwrap_or(self.pos);
        (self.pos, end)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let (s, e) = self.here_span();
            let found = match self.src[self.pos..].chars().next() {
                Some(f) => format!("'{f}'"),
                None => "end of input".into(),
            };
            Err(self.syntax(s, e, &format!("expected '{c}', found {found}")))
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        self.ws();
        let rest = &self.src[self.pos..];
        let n = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if n == 0 {
            let (s, e) = self.here_span();
            return Err(self.syntax(s, e, "expected an integer"));
        }
        let v = rest[..n]
            .parse()
            .map_err(|_| self.syntax(self.pos, self.pos + n, "integer too large"))?;
        self.pos += n;
        Ok(v)
    }

    fn ident(&mut self) -> Result<VectorSymbol, ParseError> {
        self.ws();
        let rest = &self.src[self.pos..];
        let ok_start = rest.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if !ok_start {
            let (s, e) = self.here_span();
            return Err(self.syntax(s, e, "expected a vector name"));
        }
        let n = rest.len()
            - rest
                .trim_start_matches(|c: char| c.is_ascii_alphanumeric() || c == '_')
                .len();
        self.pos += n;
        Ok(VectorSymbol::new(&rest[..n]))
    }

    /// Parses an expression and returns it with its span.
    fn expr(&mut self) -> Result<(CouplingExpr, SourceSpan), ParseError> {
        self.ws();
        let start = self.pos;
        match self.peek() {
            Some('Y') => {
                self.pos += 1;
                self.expect('[')?;
                let l = self.int()?;
                self.expect(']')?;
                self.expect('(')?;
                let v = self.ident()?;
                self.expect(')')?;
                Ok((CouplingExpr::Harmonic { l, v }, SourceSpan { start, end: self.pos }))
            }
            Some('[') => {
                self.pos += 1;
                let (left, _) = self.expr()?;
                self.expect('x')?;
                let (right, _) = self.expr()?;
                self.expect(']')?;
                self.expect('[')?;
                let l = self.int()?;
                self.expect(']')?;
                let span = SourceSpan { start, end: self.pos };
                let (l1, l2) = (left.rank(), right.rank());
                if !triangle(l1 as i64, l2 as i64, l as i64) {
                    return Err(ParseError::Triangle { span, l1, l2, l3: l });
                }
                Ok((CouplingExpr::couple(left, right, l), span))
            }
            _ => {
                let (s, e) = self.here_span();
                Err(self.syntax(s, e, "expected 'Y[' or '['"))
            }
        }
    }
}
