//! Tokenizer and recursive-descent parser for the polynomial expressions
//! used in `.ring` and `.cx` files.
//!
//! ```text
//! expression ::= ['+'|'-'] term (('+'|'-') term)*
//! term       ::= factor ('*' factor)*
//! factor     ::= integer | identifier ['^' integer]
//! identifier ::= [a-zA-Z][a-zA-Z0-9_]*
//! ```
//!
//! The parser accepts slightly more than the file formats allow (arbitrary
//! products and powers) so that degree violations get a precise error
//! instead of a syntax error. Callers check degrees.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LBracket,
    RBracket,
    Comma,
    Equals,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    /// 1-based column of the first character.
    pub column: usize,
}

pub(crate) fn tokenize(text: &str, line: usize, column_offset: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = column_offset + i + 1;
        let simple = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            '=' => Some(TokenKind::Equals),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            tokens.push(Token { kind, line, column });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<i64>()
                .map_err(|_| Error::parse(line, column, format!("integer literal `{s}` too large")))?;
            tokens.push(Token {
                kind: TokenKind::Int(v),
                line,
                column,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident(chars[start..i].iter().collect()),
                line,
                column,
            });
        } else {
            return Err(Error::parse(line, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(tokens)
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One identifier raised to a power, with its source column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Factor {
    pub name: String,
    pub power: u32,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub coefficient: i64,
    pub factors: Vec<Factor>,
    pub line: usize,
    pub column: usize,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.power).sum()
    }
}

/// Cursor over a token slice.
pub(crate) struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    pub fn new(tokens: &'a [Token], line: usize, end_column: usize) -> Self {
        Self {
            tokens,
            pos: 0,
            line,
            end_column,
        }
    }

    pub fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    pub fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn line(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.line, |t| t.line)
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line(), self.column(), message)
    }

    pub fn expect(&mut self, kind: TokenKind, what: &str) -> Result<()> {
        match self.peek() {
            Some(k) if *k == kind => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expression(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut sign = 1i64;
        if self.eat(&TokenKind::Minus) {
            sign = -1;
        } else {
            self.eat(&TokenKind::Plus);
        }
        loop {
            let mut term = self.term()?;
            term.coefficient = term
                .coefficient
                .checked_mul(sign)
                .ok_or_else(|| self.error("coefficient overflow"))?;
            terms.push(term);
            if self.eat(&TokenKind::Plus) {
                sign = 1;
            } else if self.eat(&TokenKind::Minus) {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let line = self.line();
        let column = self.column();
        let mut coefficient = 1i64;
        let mut factors = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(TokenKind::Int(v)) => {
                    self.pos += 1;
                    coefficient = coefficient
                        .checked_mul(v)
                        .ok_or_else(|| self.error("coefficient overflow"))?;
                }
                Some(TokenKind::Ident(name)) => {
                    let fline = self.line();
                    let fcol = self.column();
                    self.pos += 1;
                    let mut power = 1;
                    if self.eat(&TokenKind::Caret) {
                        match self.peek().cloned() {
                            Some(TokenKind::Int(e)) if e >= 1 && e <= u32::MAX as i64 => {
                                self.pos += 1;
                                power = e as u32;
                            }
                            _ => return Err(self.error("expected a positive exponent after `^`")),
                        }
                    }
                    factors.push(Factor {
                        name,
                        power,
                        line: fline,
                        column: fcol,
                    });
                }
                _ => return Err(self.error("expected an integer or identifier")),
            }
            if !self.eat(&TokenKind::Star) {
                break;
            }
        }
        Ok(Term {
            coefficient,
            factors,
            line,
            column,
        })
    }
}
