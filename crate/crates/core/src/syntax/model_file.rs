//! Line-oriented model files:
//!
//! ```text
//! atoms: p q
//! states: s1 s2
//! val s1 p 1/2
//! edge s1 s2 0.25
//! ```
//!
//! `#` starts a comment. Declarations may appear in any order relative to
//! `val`/`edge` lines; every referenced name must be declared somewhere.

use std::collections::HashSet;

use super::{ParseError, SourceSpan};
use crate::model::{Model, ModelError};
use crate::semantics::StateFunction;
use crate::truth::{Truth, TruthError};

struct Word<'a> {
    text: &'a str,
    span: SourceSpan,
}

/// Splits a line into whitespace-separated words, dropping any `#` comment.
fn words<'a>(src: &'a str, line_start: usize, line: &'a str) -> Vec<Word<'a>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in content.split_whitespace() {
        let rel = content[offset..].find(piece).unwrap() + offset;
        let begin = line_start + rel;
        out.push(Word {
            text: piece,
            span: SourceSpan::at(src, begin, begin + piece.len()),
        });
        offset = rel + piece.len();
    }
    out
}

fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = 0;
    src.split('\n').map(move |l| {
        let s = start;
        start += l.len() + 1;
        (s, l)
    })
}

fn truth(w: &Word) -> Result<Truth, ParseError> {
    w.text.parse::<Truth>().map_err(|e| match e {
        TruthError::OutOfRange => ParseError::new(w.span, "truth value outside [0,1]"),
        other => ParseError::new(w.span, other.to_string()),
    })
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(':')
}

/// A `key: names...` header line, returning the names.
fn header<'a>(ws: &'a [Word<'a>], key: &str) -> Option<&'a [Word<'a>]> {
    let first = ws.first()?;
    if first.text == format!("{key}:") {
        Some(&ws[1..])
    } else if first.text == key && ws.get(1).map(|w| w.text) == Some(":") {
        Some(&ws[2..])
    } else {
        None
    }
}

pub fn parse_model(src: &str) -> Result<Model, ParseError> {
    let mut b = Model::builder();
    let mut entries = Vec::new();
    let mut saw_states = false;
    let eof = SourceSpan::at(src, src.len(), src.len());

    for (start, line) in lines(src) {
        let ws = words(src, start, line);
        if ws.is_empty() {
            continue;
        }
        if let Some(names) = header(&ws, "atoms") {
            for w in names {
                if !valid_name(w.text) {
                    return Err(ParseError::new(
                        w.span,
                        format!("invalid atom name `{}`", w.text),
                    ));
                }
                b.add_atom(w.text)
                    .map_err(|e| ParseError::new(w.span, e.to_string()))?;
            }
        } else if let Some(names) = header(&ws, "states") {
            saw_states = true;
            for w in names {
                if !valid_name(w.text) {
                    return Err(ParseError::new(
                        w.span,
                        format!("invalid state name `{}`", w.text),
                    ));
                }
                b.add_state(w.text)
                    .map_err(|e| ParseError::new(w.span, e.to_string()))?;
            }
        } else if ws[0].text == "val" || ws[0].text == "edge" {
            if ws.len() != 4 {
                let end = ws.last().unwrap().span;
                return Err(ParseError::new(
                    SourceSpan::at(src, ws[0].span.begin, end.end),
                    format!("`{}` takes exactly three arguments", ws[0].text),
                ));
            }
            entries.push(ws);
        } else {
            return Err(
                ParseError::new(ws[0].span, format!("unknown directive `{}`", ws[0].text))
                    .expecting(&["atoms:", "states:", "val", "edge"]),
            );
        }
    }

    if !saw_states || b.num_states() == 0 {
        return Err(ParseError::new(eof, "at least one state required"));
    }

    let mut seen_vals = HashSet::new();
    let mut seen_edges = HashSet::new();
    for ws in &entries {
        let v = truth(&ws[3])?;
        let (a, c) = (ws[1].text, ws[2].text);
        let result = if ws[0].text == "val" {
            if !seen_vals.insert((a, c)) {
                return Err(ParseError::new(
                    ws[0].span,
                    format!("duplicate val for state `{a}` and atom `{c}`"),
                ));
            }
            b.set_val(a, c, v)
        } else {
            if !seen_edges.insert((a, c)) {
                return Err(ParseError::new(
                    ws[0].span,
                    format!("duplicate edge `{a}` -> `{c}`"),
                ));
            }
            b.set_edge(a, c, v)
        };
        result.map_err(|e| {
            let span = match &e {
                ModelError::UnknownState(s) if s == a => ws[1].span,
                _ => ws[2].span,
            };
            ParseError::new(span, e.to_string())
        })?;
    }
    b.build().map_err(|e| ParseError::new(eof, e.to_string()))
}

pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    out.push_str("atoms:");
    for a in m.atoms() {
        out.push(' ');
        out.push_str(a);
    }
    out.push_str("\nstates:");
    for s in m.states() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    for (s, p, v) in m.valuation_entries() {
        out.push_str(&format!("val {} {} {}\n", m.state_name(s), m.atoms()[p], v));
    }
    for (s, t, v) in m.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            m.state_name(s),
            m.state_name(t),
            v
        ));
    }
    out
}

/// Parses `fun <state> <truth>` lines; the function must be total on `m`.
pub fn parse_state_function(m: &Model, src: &str) -> Result<StateFunction, ParseError> {
    let mut values: Vec<Option<Truth>> = vec![None; m.num_states()];
    for (start, line) in lines(src) {
        let ws = words(src, start, line);
        if ws.is_empty() {
            continue;
        }
        if ws[0].text != "fun" {
            return Err(
                ParseError::new(ws[0].span, format!("unknown directive `{}`", ws[0].text))
                    .expecting(&["fun"]),
            );
        }
        if ws.len() != 3 {
            return Err(ParseError::new(
                ws[0].span,
                "`fun` takes exactly two arguments",
            ));
        }
        let s = m.state_id(ws[1].text).ok_or_else(|| {
            ParseError::new(ws[1].span, format!("unknown state `{}`", ws[1].text))
        })?;
        if values[s].is_some() {
            return Err(ParseError::new(
                ws[1].span,
                format!("duplicate value for `{}`", ws[1].text),
            ));
        }
        values[s] = Some(truth(&ws[2])?);
    }
    let eof = SourceSpan::at(src, src.len(), src.len());
    let mut out = Vec::with_capacity(values.len());
    for (s, v) in values.into_iter().enumerate() {
        match v {
            Some(v) => out.push(v),
            None => {
                return Err(ParseError::new(
                    eof,
                    format!("no value given for state `{}`", m.state_name(s)),
                ))
            }
        }
    }
    Ok(StateFunction::new(out))
}

pub fn print_state_function(m: &Model, f: &StateFunction) -> String {
    f.values()
        .iter()
        .enumerate()
        .map(|(s, v)| format!("fun {} {}\n", m.state_name(s), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FORK_TEXT;

    #[test]
    fn fork_file() {
        let m = parse_model(FORK_TEXT).unwrap();
        assert_eq!(m.num_states(), 6);
        assert_eq!(m.num_atoms(), 1);
        assert_eq!(m.edges().count(), 4);
        assert_eq!(m.val(2, 0), Truth::ratio(9, 10));
        assert_eq!(m.rel(3, 5), Truth::ratio(3, 10));
        let again = parse_model(&print_model(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn comments_decimals_and_spacing() {
        let m = parse_model(
            "# header\natoms : p q\nstates: a b   # trailing\n\nedge a b 0.25\nval b q 1/3\nval a p 0\n",
        )
        .unwrap();
        assert_eq!(m.rel(0, 1), Truth::ratio(1, 4));
        assert_eq!(m.val(1, 1), Truth::ratio(1, 3));
        assert_eq!(m.valuation_entries().count(), 1);
    }

    #[test]
    fn errors() {
        let e = parse_model("atoms: p\nstates:\n").unwrap_err();
        assert_eq!(e.message, "at least one state required");
        let e = parse_model("atoms: p\nstates: a\nval a p 3/2\n").unwrap_err();
        assert_eq!(e.message, "truth value outside [0,1]");
        assert_eq!((e.span.line, e.span.column), (3, 9));
        let e = parse_model("states: a a\n").unwrap_err();
        assert_eq!(e.message, "duplicate state `a`");
        let e = parse_model("atoms: p p\nstates: a\n").unwrap_err();
        assert_eq!(e.message, "duplicate atom `p`");
        let e = parse_model("states: a\nedge a b 1\n").unwrap_err();
        assert_eq!(e.message, "unknown state `b`");
        assert_eq!(e.span.line, 2);
        let e = parse_model("states: a\nedge a a 1\nedge a a 1/2\n").unwrap_err();
        assert!(e.message.starts_with("duplicate edge"));
        let e = parse_model("states: a\nfoo\n").unwrap_err();
        assert!(e.message.starts_with("unknown directive"));
        let e = parse_model("states: a\nval a\n").unwrap_err();
        assert!(e.message.contains("three arguments"));
        for bad in ["", "states: a\nval a p x", "states: a\nedge a a 1/0"] {
            let e = parse_model(bad).unwrap_err();
            assert!(e.span.end <= bad.len());
        }
    }

    #[test]
    fn state_functions() {
        let m = parse_model(FORK_TEXT).unwrap();
        let src = "fun s1 1/2\nfun s2 0\nfun s3 0.1\nfun s4 1\nfun s5 0\nfun s6 0\n";
        let f = parse_state_function(&m, src).unwrap();
        assert_eq!(f.get(2), Truth::ratio(1, 10));
        assert_eq!(
            parse_state_function(&m, &print_state_function(&m, &f)).unwrap(),
            f
        );
        let e = parse_state_function(&m, "fun s1 1\n").unwrap_err();
        assert!(e.message.contains("no value given for state `s2`"));
        assert!(parse_state_function(&m, "fun s9 1\n").is_err());
    }
}
