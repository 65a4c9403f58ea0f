use super::Span;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Ge,
    Eq,
    DotDot,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Ge => ">=",
            Tok::Eq => "=",
            Tok::DotDot => "..",
            _ => "",
        }
    }
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = (i, line, col);
        let bump = |i: &mut usize, n: usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(&mut i, 1, &mut col);
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let text = &src[i..j];
            let n = text.parse::<i64>().map_err(|_| Error::Parse {
                line,
                col,
                msg: format!("integer literal {text} is too large"),
            })?;
            let w = j - i;
            bump(&mut i, w, &mut col);
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            let t = Tok::Ident(src[i..j].to_string());
            let w = j - i;
            bump(&mut i, w, &mut col);
            t
        } else {
            let two = src.get(i..i + 2);
            let (t, n) = match (c, two) {
                (_, Some(">=")) => (Tok::Ge, 2),
                (_, Some("..")) => (Tok::DotDot, 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                ('=', _) => (Tok::Eq, 1),
                _ => {
                    return Err(Error::Parse { line, col, msg: format!("unexpected character {c:?}") });
                }
            };
            bump(&mut i, n, &mut col);
            t
        };
        out.push((tok, Span::new(start.0, i, start.1, start.2)));
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len(), line, col)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("sum(n>=0, q^2) # note\n  z").unwrap();
        let kinds: Vec<_> = toks.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(kinds[2], Tok::Ident("n".into()));
        assert_eq!(kinds[3], Tok::Ge);
        let (last, span) = &toks[toks.len() - 2];
        assert_eq!(last, &Tok::Ident("z".into()));
        assert_eq!((span.line, span.col), (2, 3));
    }

    #[test]
    fn bad_character() {
        assert!(matches!(lex("q @"), Err(Error::Parse { line: 1, col: 3, .. })));
    }
}
