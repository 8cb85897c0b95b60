use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    Diamond,
    Box,
    SubOp,
    LParen,
    RParen,
    Comma,
    Equals,
    Dot,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::SubOp => "`.-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let two = |a: u8, b: u8| bytes[i] == a && bytes.get(i + 1) == Some(&b);
        let tok = if two(b'-', b'>') {
            i += 2;
            Tok::Arrow
        } else if two(b'<', b'>') {
            i += 2;
            Tok::Diamond
        } else if two(b'[', b']') {
            i += 2;
            Tok::Box
        } else if two(b'.', b'-') {
            i += 2;
            Tok::SubOp
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // a `/` or `.` continues the literal only when a digit follows
            if i + 1 < bytes.len()
                && (bytes[i] == b'/' || bytes[i] == b'.')
                && bytes[i + 1].is_ascii_digit()
            {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            Tok::Number(text[start..i].to_string())
        } else if is_ident_start(c) {
            while i < bytes.len() && is_ident_char(bytes[i] as char) {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else {
            i += c.len_utf8();
            match c {
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Equals,
                '.' => Tok::Dot,
                _ => {
                    return Err(ParseError::new(
                        SourceSpan::at(text, start, i),
                        format!("unexpected character `{c}`"),
                    ))
                }
            }
        };
        out.push(Token {
            tok,
            span: SourceSpan::at(text, start, i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::at(text, text.len(), text.len()),
    });
    Ok(out)
}
