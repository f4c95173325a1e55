//! Tokenizer shared by the graph, formula, proof-script and ND parsers.

use std::fmt;

use thiserror::Error;

/// Line/column position (both 1-based) of a token in its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    /// `=>`
    Arrow,
    /// `->`
    Implies,
    /// `|-`
    Turnstile,
    /// `:=`
    Assign,
    Bar,
    Hash,
    Colon,
    Semi,
    Comma,
    Tilde,
    Amp,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Arrow => "=>",
            Tok::Implies => "->",
            Tok::Turnstile => "|-",
            Tok::Assign => ":=",
            Tok::Bar => "|",
            Tok::Hash => "#",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Tilde => "~",
            Tok::Amp => "&",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{pos}: unknown token `{text}`")]
    UnknownToken { pos: Pos, text: String },
    #[error("{pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{pos}: unbalanced `{open}`: missing `{close}`")]
    Unbalanced { pos: Pos, open: char, close: char },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
}

impl SyntaxError {
    pub fn pos(&self) -> Pos {
        match self {
            SyntaxError::UnknownToken { pos, .. }
            | SyntaxError::Unexpected { pos, .. }
            | SyntaxError::Unbalanced { pos, .. }
            | SyntaxError::Invalid { pos, .. } => *pos,
        }
    }
}

/// Splits `text` into tokens. `%` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(word), pos));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('=', Some('>')) => (Tok::Arrow, 2),
            ('-', Some('>')) => (Tok::Implies, 2),
            ('|', Some('-')) => (Tok::Turnstile, 2),
            (':', Some('=')) => (Tok::Assign, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('|', _) => (Tok::Bar, 1),
            ('#', _) => (Tok::Hash, 1),
            (':', _) => (Tok::Colon, 1),
            (';', _) => (Tok::Semi, 1),
            (',', _) => (Tok::Comma, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('&', _) => (Tok::Amp, 1),
            _ => {
                return Err(SyntaxError::UnknownToken {
                    pos,
                    text: c.to_string(),
                })
            }
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    Ok(out)
}

/// Cursor over a token vector with the small helpers every parser here needs.
pub(crate) struct Cursor {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
    end: Pos,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(text)?;
        let lines = text.split('\n').count().max(1);
        let last_len = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Cursor {
            toks,
            idx: 0,
            end: Pos {
                line: lines,
                col: last_len + 1,
            },
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    pub fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.idx + ahead).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.idx).map_or(self.end, |(_, p)| *p)
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    pub fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::Unexpected {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, SyntaxError> {
        if self.peek() == Some(tok) {
            Ok(self.bump().expect("peeked").1)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Pos), SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some((Tok::Ident(s), p)) => Ok((s, p)),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<Pos, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => Ok(self.bump().expect("peeked").1),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}
