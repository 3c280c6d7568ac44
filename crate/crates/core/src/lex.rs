//! Tokenizer shared by the model DSL and µOCL parsers.

use std::fmt;

use crate::dsl::ParseError;
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(String),
    Decimal(String),
    Str(String),
    Punct(&'static str),
    Unknown(char),
    Unterminated,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Nat(s) | Tok::Decimal(s) => write!(f, "\"{s}\""),
            Tok::Str(s) => {
                f.write_str("string ")?;
                crate::mocl::write_quoted(f, s)
            }
            Tok::Punct(p) => write!(f, "\"{p}\""),
            Tok::Unknown(c) => write!(f, "\"{c}\""),
            Tok::Unterminated => f.write_str("unterminated string"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const PUNCT2: [&str; 4] = ["->", "..", ">=", "<="];
const PUNCT1: [&str; 14] = [
    "{", "}", "(", ")", "[", "]", ":", ".", "*", "=", ">", "<", "-", ",",
];

pub(crate) fn tokenize(src: &str, file: &str, start: (u32, u32)) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = start;
    let mut i = 0;
    let mut out = Vec::new();

    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            continue;
        }
        let begin = (line, col);
        let tok = if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                s.push('.');
                advance(&mut i, &mut line, &mut col, '.');
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    {
                        let ch = chars[i];
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
                Tok::Decimal(s)
            } else {
                Tok::Nat(s)
            }
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col, c);
            let mut s = String::new();
            let mut closed = false;
            while i < chars.len() {
                let d = chars[i];
                advance(&mut i, &mut line, &mut col, d);
                match d {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' if i < chars.len() => {
                        let e = chars[i];
                        advance(&mut i, &mut line, &mut col, e);
                        s.push(match e {
                            'n' => '\n',
                            't' => '\t',
                            other => other,
                        });
                    }
                    '\n' => break,
                    d => s.push(d),
                }
            }
            if closed {
                Tok::Str(s)
            } else {
                Tok::Unterminated
            }
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            if let Some(p) = PUNCT2.iter().find(|p| **p == two) {
                advance(&mut i, &mut line, &mut col, c);
                {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut col, ch);
                }
                Tok::Punct(p)
            } else if let Some(p) = PUNCT1.iter().find(|p| p.starts_with(c)) {
                advance(&mut i, &mut line, &mut col, c);
                Tok::Punct(p)
            } else {
                advance(&mut i, &mut line, &mut col, c);
                Tok::Unknown(c)
            }
        };
        out.push(Token {
            tok,
            span: SourceSpan::new(file, begin, (line, col)),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::point(file, line, col),
    });
    out
}

/// Cursor over a token vector with the usual recursive-descent helpers.
pub(crate) struct Tokens {
    toks: Vec<Token>,
    pos: usize,
}

impl Tokens {
    pub fn new(toks: Vec<Token>) -> Self {
        Tokens { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    /// Span of the most recently consumed token.
    pub fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    pub fn error(&self, expected: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.span.clone(), expected, t.tok.to_string())
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<SourceSpan, ParseError> {
        if self.is_punct(p) {
            Ok(self.next().span)
        } else {
            Err(self.error(format!("\"{p}\"")))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<SourceSpan, ParseError> {
        if self.is_word(w) {
            Ok(self.next().span)
        } else {
            Err(self.error(format!("\"{w}\"")))
        }
    }

    /// An identifier that is not one of `reserved`.
    pub fn expect_ident(
        &mut self,
        what: &str,
        reserved: &[&str],
    ) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if !reserved.contains(&s.as_str()) => {
                let t = self.next();
                match t.tok {
                    Tok::Ident(s) => Ok((s, t.span)),
                    _ => unreachable!(),
                }
            }
            Tok::Ident(s) => {
                let e = self.error(what.to_string());
                let s = s.clone();
                Err(e.with_hint(format!("'{s}' is a reserved word")))
            }
            _ => Err(self.error(what.to_string())),
        }
    }

    pub fn expect_nat(&mut self, what: &str) -> Result<(u32, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Nat(s) => {
                let n = s.parse::<u32>().ok().filter(|n| *n <= i32::MAX as u32);
                match n {
                    Some(n) => Ok((n, self.next().span)),
                    None => Err(self.error(format!("{what} below 2^31"))),
                }
            }
            _ => Err(self.error(what.to_string())),
        }
    }
}
