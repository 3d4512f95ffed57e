//! Tokens and terms of the configuration value language.
//!
//! A value is a comma-separated list of phrases. A phrase is a run of terms
//! separated by whitespace (`geom 2`, `1 >= 3`). Terms are integers, signs,
//! identifiers, calls `name(phrase, ...)` and lists `[phrase, ...]`.

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Int(i64),
    Ident(String),
    /// A bare `+` or `-`.
    Sign(bool),
    Ge,
    Call(String, Vec<Phrase>),
    List(Vec<Phrase>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub kind: TermKind,
    pub line: usize,
    pub col: usize,
}

pub type Phrase = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sign(bool),
    Ge,
    Open(char),
    Close(char),
    Comma,
}

/// A character with its 1-based line and column.
pub type Located = (char, usize, usize);

fn lex(located: &[Located]) -> Result<Vec<(Tok, usize, usize)>, CliError> {
    let chars: Vec<char> = located.iter().map(|c| c.0).collect();
    let err = |i: usize, message: String| CliError::SyntaxError { line: located[i].1, col: located[i].2, message };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' | '[' => {
                i += 1;
                Tok::Open(c)
            }
            ')' | ']' => {
                i += 1;
                Tok::Close(c)
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '>' if chars.get(i + 1) == Some(&'=') => {
                i += 2;
                Tok::Ge
            }
            '+' | '-' if chars.get(i + 1).is_some_and(char::is_ascii_digit) => {
                i += 1;
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[digits_start..i].iter().collect();
                let v: i64 = digits.parse().map_err(|_| err(start, format!("integer `{digits}` is too large")))?;
                Tok::Int(if c == '-' { -v } else { v })
            }
            '+' | '-' => {
                i += 1;
                Tok::Sign(c == '+')
            }
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                Tok::Int(digits.parse().map_err(|_| err(start, format!("integer `{digits}` is too large")))?)
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, located[start].1, located[start].2));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |(_, l, c)| (*l, *c))
    }

    fn error(&self, message: impl Into<String>) -> CliError {
        let (line, col) = self.here();
        CliError::SyntaxError { line, col, message: message.into() }
    }

    /// Phrases separated by commas, up to (not including) `close`.
    fn phrases(&mut self, close: Option<char>) -> Result<Vec<Phrase>, CliError> {
        let mut out = Vec::new();
        if close.is_some() && matches!(self.peek(), Some(Tok::Close(c)) if Some(*c) == close) {
            return Ok(out);
        }
        loop {
            out.push(self.phrase()?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::Close(c)) if Some(*c) == close => return Ok(out),
                None if close.is_none() => return Ok(out),
                None => return Err(self.error(format!("missing `{}`", close.unwrap()))),
                Some(_) => return Err(self.error("expected `,`")),
            }
        }
    }

    fn phrase(&mut self) -> Result<Phrase, CliError> {
        let mut terms = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Comma | Tok::Close(_)) {
                break;
            }
            terms.push(self.term()?);
        }
        if terms.is_empty() {
            return Err(self.error("expected a value"));
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, CliError> {
        let (line, col) = self.here();
        let (tok, _, _) = self.toks[self.pos].clone();
        self.pos += 1;
        let kind = match tok {
            Tok::Int(v) => TermKind::Int(v),
            Tok::Sign(s) => TermKind::Sign(s),
            Tok::Ge => TermKind::Ge,
            Tok::Ident(name) if self.peek() == Some(&Tok::Open('(')) => {
                self.pos += 1;
                let args = self.phrases(Some(')'))?;
                self.pos += 1;
                TermKind::Call(name, args)
            }
            Tok::Ident(name) => TermKind::Ident(name),
            Tok::Open('[') => {
                let items = self.phrases(Some(']'))?;
                self.pos += 1;
                TermKind::List(items)
            }
            Tok::Open(_) => return Err(CliError::SyntaxError { line, col, message: "unexpected `(`".into() }),
            Tok::Close(c) => return Err(CliError::SyntaxError { line, col, message: format!("unexpected `{c}`") }),
            Tok::Comma => unreachable!("handled by phrase"),
        };
        Ok(Term { kind, line, col })
    }
}

#[cfg(test)]
/// Parses a value whose first character sits at column `col0` of `line`.
pub fn parse_value(text: &str, line: usize, col0: usize) -> Result<Vec<Phrase>, CliError> {
    let located: Vec<Located> = text.chars().enumerate().map(|(i, c)| (c, line, col0 + i)).collect();
    parse_located(&located, (line, col0 + located.len()))
}

/// Parses a value spread over several source lines; `end` is the position
/// reported for a premature end of input.
pub fn parse_located(located: &[Located], end: (usize, usize)) -> Result<Vec<Phrase>, CliError> {
    let toks = lex(located)?;
    let mut p = Parser { toks, pos: 0, end };
    let out = p.phrases(None)?;
    if p.pos < p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

impl Term {
    pub fn error(&self, message: impl Into<String>) -> CliError {
        CliError::SyntaxError { line: self.line, col: self.col, message: message.into() }
    }

    pub fn as_int(&self) -> Result<i64, CliError> {
        match self.kind {
            TermKind::Int(v) => Ok(v),
            _ => Err(self.error("expected an integer")),
        }
    }

    pub fn as_uint(&self) -> Result<u64, CliError> {
        u64::try_from(self.as_int()?).map_err(|_| self.error("expected a nonnegative integer"))
    }

    pub fn as_ident(&self) -> Result<&str, CliError> {
        match &self.kind {
            TermKind::Ident(s) => Ok(s),
            _ => Err(self.error("expected a name")),
        }
    }
}

/// The single term of a one-term phrase.
pub fn single(phrase: &Phrase) -> Result<&Term, CliError> {
    match phrase.as_slice() {
        [t] => Ok(t),
        [_, extra, ..] => Err(extra.error("unexpected extra term")),
        [] => unreachable!("phrases are nonempty"),
    }
}
