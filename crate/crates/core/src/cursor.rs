//! Character cursor shared by the hand-written parsers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Expected(&'static str),
    UnknownIdentifier(String),
    BadNumber(String),
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Expected(what) => {
                write!(f, "syntax error at {}: expected {what}", self.position)
            }
            ParseErrorKind::UnknownIdentifier(id) => {
                write!(f, "unknown identifier {id:?} at {}", self.position)
            }
            ParseErrorKind::BadNumber(text) => {
                write!(f, "bad number {text:?} at {}", self.position)
            }
            ParseErrorKind::TrailingInput => {
                write!(f, "syntax error at {}: unexpected trailing input", self.position)
            }
        }
    }
}

impl std::error::Error for ParseError {}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(s)
    }

    pub fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, s: &'static str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(s)))
        }
    }

    pub fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    pub fn error_at(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    /// `[A-Za-z_][A-Za-z0-9_]*`, without consuming on failure.
    pub fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        Some(&rest[..end])
    }

    pub fn ident(&mut self) -> Option<&'a str> {
        let id = self.peek_ident()?;
        self.pos += id.len();
        Some(id)
    }

    /// A decimal digit run.
    pub fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&rest[..end])
    }

    /// A natural-number literal in any of the forms `Nat` parses: decimal,
    /// `0x..`, `<len>:<hex>` or a balanced `[...]` run list.
    pub fn nat_literal(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let end = if rest.starts_with('[') {
            let mut depth = 0;
            let mut end = None;
            for (i, c) in rest.char_indices() {
                match c {
                    '[' => depth += 1,
                    ']' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(i + 1);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            end?
        } else {
            let end = rest
                .find(|c: char| !(c.is_ascii_hexdigit() || c == 'x' || c == 'X' || c == ':'))
                .unwrap_or(rest.len());
            if end == 0 {
                return None;
            }
            end
        };
        self.pos += end;
        Some(&rest[..end])
    }
}
