//! Text form of Dirac terms.
//!
//! ```text
//! term   := factor { factor }
//! factor := bra | ket | "(" term ")"
//! bra    := "<" label "|"
//! ket    := "|" label [ ":" ( "v" | "f" ) ] ">"
//! ```
//!
//! A ket directly after a bra may share the bra's closing bar, so `<x|y>`
//! reads as the bra `<x|` followed by the ket `|y>`. Unparenthesized runs
//! group to the left. Whitespace between factors is ignored.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::Error;
use crate::term::{DiracChar, Marking, Term, TermView};
use crate::workspace::Label;

/// Byte range `start..end` into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    Alternation { left: DiracChar, right: DiracChar },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at {}: {msg}", self.span),
            ParseErrorKind::Alternation { left, right } => write!(
                f,
                "alternation violation at {}: `{left}` followed by `{right}`",
                self.span
            ),
        }
    }
}

impl core::error::Error for ParseError {}

struct Parsed {
    term: Term,
    first: SourceSpan,
    last: SourceSpan,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn span_here(&self) -> SourceSpan {
        let len = self.peek().map_or(0, char::len_utf8);
        SourceSpan::new(self.pos, self.pos + len)
    }

    fn syntax<T>(&self, span: SourceSpan, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            span,
        })
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    fn expect(&mut self, want: char, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.bump();
            Ok(())
        } else {
            let msg = format!("expected {what}, found {}", self.describe_here());
            self.syntax(self.span_here(), msg)
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => {
                let msg = format!("expected a label, found {}", self.describe_here());
                return self.syntax(self.span_here(), msg);
            }
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok(Label::new(&self.src[start..self.pos]).expect("lexed label is valid"))
    }

    /// Ket body after the opening bar: `label [":" v|f] ">"`.
    fn ket_body(&mut self) -> Result<DiracChar, ParseError> {
        let label = self.label()?;
        let marking = if self.peek() == Some(':') {
            self.bump();
            match self.peek() {
                Some('v') => Marking::VectorKet,
                Some('f') => Marking::FunctionKet,
                _ => {
                    let msg = format!(
                        "expected marking `v` or `f`, found {}",
                        self.describe_here()
                    );
                    return self.syntax(self.span_here(), msg);
                }
            }
        } else {
            Marking::Default
        };
        if marking != Marking::Default {
            self.bump();
        }
        self.expect('>', "`>` closing the ket")?;
        Ok(DiracChar::ket(label, marking))
    }

    fn leaf(c: DiracChar, span: SourceSpan) -> Parsed {
        Parsed {
            term: Term::leaf(c),
            first: span,
            last: span,
        }
    }

    /// One factor. `shared_bar` holds the offset of the closing bar of an
    /// immediately preceding bra, if any.
    fn factor(&mut self, shared_bar: Option<usize>) -> Result<Parsed, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                let inner = self.sequence(true)?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    let msg = format!("unclosed `(`, found {}", self.describe_here());
                    return self.syntax(SourceSpan::new(start, start + 1), msg);
                }
                self.bump();
                Ok(inner)
            }
            Some('<') => {
                self.bump();
                let label = self.label()?;
                self.expect('|', "`|` closing the bra")?;
                Ok(Self::leaf(
                    DiracChar::bra(label),
                    SourceSpan::new(start, self.pos),
                ))
            }
            Some('|') => {
                self.bump();
                let c = self.ket_body()?;
                Ok(Self::leaf(c, SourceSpan::new(start, self.pos)))
            }
            Some(c) if c.is_ascii_alphabetic() && shared_bar.is_some() => {
                let bar = shared_bar.unwrap();
                let c = self.ket_body()?;
                Ok(Self::leaf(c, SourceSpan::new(bar, self.pos)))
            }
            Some(')') => self.syntax(self.span_here(), "unmatched `)`"),
            Some(c) if c.is_ascii_alphabetic() => self.syntax(
                self.span_here(),
                "label outside a bra or ket (a bare ket label must directly follow a bra)",
            ),
            Some(c) => self.syntax(self.span_here(), format!("unexpected character `{c}`")),
            None => self.syntax(
                self.span_here(),
                "expected a bra, ket or `(`, found end of input",
            ),
        }
    }

    fn sequence(&mut self, nested: bool) -> Result<Parsed, ParseError> {
        let mut acc: Option<Parsed> = None;
        let mut shared_bar = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(')') if nested => break,
                _ => {}
            }
            let was_bra = self.peek() == Some('<');
            let next = self.factor(shared_bar)?;
            shared_bar = if was_bra { Some(self.pos - 1) } else { None };
            acc = Some(match acc {
                None => next,
                Some(prev) => {
                    let span = SourceSpan::new(prev.last.start, next.first.end);
                    let term = Term::concat(prev.term, next.term).map_err(|e| match e {
                        Error::AlternationViolation { left, right } => ParseError {
                            kind: ParseErrorKind::Alternation { left, right },
                            span,
                        },
                        other => unreachable!("concat only fails on alternation: {other}"),
                    })?;
                    Parsed {
                        term,
                        first: prev.first,
                        last: next.last,
                    }
                }
            });
        }
        match acc {
            Some(p) => Ok(p),
            None if nested => self.syntax(self.span_here(), "empty parentheses"),
            None => self.syntax(SourceSpan::new(self.pos, self.pos), "empty term"),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let parsed = p.sequence(false)?;
    Ok(parsed.term)
}

/// Canonical text for `term`; [`parse_term`] maps it back to an identical tree.
pub fn render(term: &Term) -> String {
    let mut out = String::new();
    render_into(term, &mut out);
    out
}

fn render_into(term: &Term, out: &mut String) {
    match term.view() {
        TermView::Leaf(c) => push_merged(out, &c.to_string()),
        TermView::Concat(l, r) => {
            render_into(l, out);
            match r.view() {
                TermView::Leaf(c) => push_merged(out, &c.to_string()),
                TermView::Concat(..) => {
                    out.push('(');
                    render_into(r, out);
                    out.push(')');
                }
            }
        }
    }
}

// `<x|` followed by `|y>` is written `<x|y>`.
fn push_merged(out: &mut String, token: &str) {
    if out.ends_with('|') && token.starts_with('|') {
        out.push_str(&token[1..]);
    } else {
        out.push_str(token);
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
