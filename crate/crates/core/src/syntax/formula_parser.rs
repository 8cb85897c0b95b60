use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::formula::{FolFormula, ModalFormula};
use crate::truth::{Truth, TruthError};

/// Parses a modal formula; `|`, `->` and `[]` are expanded into their encodings.
pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.implies(&Modal)?;
    p.finish()?;
    Ok(f)
}

/// Parses a first-order formula.
pub fn parse_fol(text: &str) -> Result<FolFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.implies(&Fol)?;
    p.finish()?;
    Ok(f)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// The parts of the grammar that differ between the two logics.
trait Logic {
    type F;
    fn constant(&self, c: Truth) -> Self::F;
    fn neg(&self, f: Self::F) -> Self::F;
    fn and(&self, f: Self::F, g: Self::F) -> Self::F;
    fn sub(&self, f: Self::F, c: Truth) -> Self::F;
    fn or(&self, f: Self::F, g: Self::F) -> Self::F;
    fn implies(&self, f: Self::F, g: Self::F) -> Self::F;
    /// Prefix forms beyond `~`; `None` if the current token starts none.
    fn prefix(&self, p: &mut Parser) -> Option<Result<Self::F, ParseError>>;
    /// Primary forms beyond constants and parentheses.
    fn primary(&self, p: &mut Parser) -> Result<Self::F, ParseError>;
}

struct Modal;
struct Fol;

impl Logic for Modal {
    type F = ModalFormula;
    fn constant(&self, c: Truth) -> ModalFormula {
        ModalFormula::Const(c)
    }
    fn neg(&self, f: ModalFormula) -> ModalFormula {
        f.neg()
    }
    fn and(&self, f: ModalFormula, g: ModalFormula) -> ModalFormula {
        f.and(g)
    }
    fn sub(&self, f: ModalFormula, c: Truth) -> ModalFormula {
        f.sub(c)
    }
    fn or(&self, f: ModalFormula, g: ModalFormula) -> ModalFormula {
        f.or(g)
    }
    fn implies(&self, f: ModalFormula, g: ModalFormula) -> ModalFormula {
        f.implies(g)
    }
    fn prefix(&self, p: &mut Parser) -> Option<Result<ModalFormula, ParseError>> {
        match p.peek() {
            Tok::Diamond => {
                p.bump();
                Some(p.unary(self).map(ModalFormula::diamond))
            }
            Tok::Box => {
                p.bump();
                Some(p.unary(self).map(ModalFormula::boxed))
            }
            _ => None,
        }
    }
    fn primary(&self, p: &mut Parser) -> Result<ModalFormula, ParseError> {
        match p.peek().clone() {
            Tok::Ident(name) => {
                p.bump();
                Ok(ModalFormula::Atom(name))
            }
            _ => Err(p.formula_expected()),
        }
    }
}

impl Logic for Fol {
    type F = FolFormula;
    fn constant(&self, c: Truth) -> FolFormula {
        FolFormula::Const(c)
    }
    fn neg(&self, f: FolFormula) -> FolFormula {
        f.neg()
    }
    fn and(&self, f: FolFormula, g: FolFormula) -> FolFormula {
        f.and(g)
    }
    fn sub(&self, f: FolFormula, c: Truth) -> FolFormula {
        f.sub(c)
    }
    fn or(&self, f: FolFormula, g: FolFormula) -> FolFormula {
        f.or(g)
    }
    fn implies(&self, f: FolFormula, g: FolFormula) -> FolFormula {
        f.implies(g)
    }
    fn prefix(&self, p: &mut Parser) -> Option<Result<FolFormula, ParseError>> {
        let is_quantifier = matches!(p.peek(), Tok::Ident(e) if e == "E")
            && matches!(p.peek_at(1), Tok::Ident(_))
            && matches!(p.peek_at(2), Tok::Dot);
        if !is_quantifier {
            return None;
        }
        p.bump();
        let var = match p.bump().tok {
            Tok::Ident(v) => v,
            _ => unreachable!(),
        };
        p.bump();
        Some(p.implies(self).map(|body| FolFormula::exists(var, body)))
    }
    fn primary(&self, p: &mut Parser) -> Result<FolFormula, ParseError> {
        let name = match p.peek().clone() {
            Tok::Ident(name) => name,
            _ => return Err(p.formula_expected()),
        };
        let start = p.span();
        p.bump();
        match p.peek() {
            Tok::Equals => {
                p.bump();
                let rhs = p.variable()?;
                Ok(FolFormula::Eq(name, rhs))
            }
            Tok::LParen => {
                p.bump();
                let mut args = vec![p.variable()?];
                while *p.peek() == Tok::Comma {
                    p.bump();
                    args.push(p.variable()?);
                }
                p.expect(Tok::RParen)?;
                match (args.len(), name.as_str()) {
                    (1, _) => Ok(FolFormula::AtomApp(name, args.pop().unwrap())),
                    (2, "R") => {
                        let y = args.pop().unwrap();
                        let x = args.pop().unwrap();
                        Ok(FolFormula::Rel(x, y))
                    }
                    (2, _) => Err(ParseError::new(
                        start,
                        format!("`{name}` is not binary; only R takes two arguments"),
                    )),
                    (n, _) => Err(ParseError::new(
                        start,
                        format!("`{name}` applied to {n} arguments"),
                    )),
                }
            }
            _ => Err(
                ParseError::new(start, format!("bare variable `{name}` is not a formula"))
                    .expecting(&["`(`", "`=`"]),
            ),
        }
    }
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = tok.describe();
            Err(ParseError::new(
                self.span(),
                format!("expected {want}, found {}", self.peek().describe()),
            )
            .expecting(&[want.as_str()]))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(ParseError::new(
                self.span(),
                format!("unexpected {}", self.peek().describe()),
            )
            .expecting(&["end of input"]))
        }
    }

    fn formula_expected(&self) -> ParseError {
        ParseError::new(
            self.span(),
            format!("formula expected, found {}", self.peek().describe()),
        )
        .expecting(&["constant", "atom", "`(`", "`~`"])
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                Ok(v)
            }
            other => Err(ParseError::new(
                self.span(),
                format!("variable expected, found {}", other.describe()),
            )
            .expecting(&["identifier"])),
        }
    }

    fn literal(&mut self) -> Result<Truth, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                s.parse::<Truth>().map_err(|e| match e {
                    TruthError::OutOfRange => ParseError::new(span, "truth value outside [0,1]"),
                    other => ParseError::new(span, other.to_string()),
                })
            }
            _ => Err(
                ParseError::new(span, "subtraction constant must be rational literal")
                    .expecting(&["number"]),
            ),
        }
    }

    fn implies<L: Logic>(&mut self, l: &L) -> Result<L::F, ParseError> {
        let lhs = self.or(l)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies(l)?;
            return Ok(l.implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or<L: Logic>(&mut self, l: &L) -> Result<L::F, ParseError> {
        let mut lhs = self.and(l)?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and(l)?;
            lhs = l.or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and<L: Logic>(&mut self, l: &L) -> Result<L::F, ParseError> {
        let mut lhs = self.sub(l)?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.sub(l)?;
            lhs = l.and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn sub<L: Logic>(&mut self, l: &L) -> Result<L::F, ParseError> {
        let mut lhs = self.unary(l)?;
        while *self.peek() == Tok::SubOp {
            self.bump();
            let c = self.literal()?;
            lhs = l.sub(lhs, c);
        }
        Ok(lhs)
    }

    fn unary<L: Logic>(&mut self, l: &L) -> Result<L::F, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            let f = self.unary(l)?;
            return Ok(l.neg(f));
        }
        if let Some(r) = l.prefix(self) {
            return r;
        }
        match self.peek() {
            Tok::Number(_) => {
                let c = self.literal()?;
                Ok(l.constant(c))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implies(l)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => l.primary(self),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, d: u64) -> Truth {
        Truth::ratio(n, d)
    }

    #[test]
    fn modal_examples() {
        assert_eq!(
            parse_modal("<>(p .- 1/2)").unwrap(),
            ModalFormula::atom("p").sub(t(1, 2)).diamond()
        );
        assert_eq!(
            parse_modal("[]0").unwrap(),
            ModalFormula::Const(Truth::ZERO).neg().diamond().neg()
        );
        let err = parse_modal("p .- q").unwrap_err();
        assert_eq!(err.message, "subtraction constant must be rational literal");
        assert_eq!(err.span.begin, 5);
    }

    #[test]
    fn modal_precedence() {
        let p = || ModalFormula::atom("p");
        let q = || ModalFormula::atom("q");
        assert_eq!(parse_modal("~p .- 1/2").unwrap(), p().neg().sub(t(1, 2)));
        assert_eq!(
            parse_modal("<>p .- 1/2").unwrap(),
            p().diamond().sub(t(1, 2))
        );
        assert_eq!(
            parse_modal("p & q .- 0.5").unwrap(),
            p().and(q().sub(t(1, 2)))
        );
        assert_eq!(parse_modal("p | q & p").unwrap(), p().or(q().and(p())));
        assert_eq!(
            parse_modal("p -> q -> p").unwrap(),
            p().implies(q().implies(p()))
        );
        assert_eq!(
            parse_modal("p .- 1/4 .- 1/4").unwrap(),
            p().sub(t(1, 4)).sub(t(1, 4))
        );
        assert_eq!(parse_modal("~<>[]p").unwrap(), p().boxed().diamond().neg());
    }

    #[test]
    fn modal_errors_carry_spans() {
        for bad in ["", "p &", "(p", "p q", "3/2", "<>", "p .- 2"] {
            let e = parse_modal(bad).unwrap_err();
            assert!(e.span.begin <= bad.len(), "{bad}");
            assert!(!e.message.is_empty());
        }
        assert_eq!(
            parse_modal("3/2").unwrap_err().message,
            "truth value outside [0,1]"
        );
    }

    #[test]
    fn fol_examples() {
        assert_eq!(
            parse_fol("E y. (R(x,y) & p(y))").unwrap(),
            FolFormula::exists(
                "y",
                FolFormula::rel("x", "y").and(FolFormula::atom_app("p", "y"))
            )
        );
        assert_eq!(parse_fol("x = y").unwrap(), FolFormula::eq("x", "y"));
        let e = parse_fol("E x.").unwrap_err();
        assert!(e.message.starts_with("formula expected"), "{}", e.message);
    }

    #[test]
    fn quantifier_scope_extends_right() {
        assert_eq!(
            parse_fol("p(x) & E y. q(y) & R(x,y)").unwrap(),
            FolFormula::atom_app("p", "x").and(FolFormula::exists(
                "y",
                FolFormula::atom_app("q", "y").and(FolFormula::rel("x", "y"))
            ))
        );
        assert_eq!(
            parse_fol("~E y. R(y,y) .- 1/2").unwrap(),
            FolFormula::exists("y", FolFormula::rel("y", "y").sub(t(1, 2))).neg()
        );
    }

    #[test]
    fn fol_errors() {
        assert!(parse_fol("q(x,y)").is_err());
        assert!(parse_fol("x").is_err());
        assert!(parse_fol("R(x,y,z)").is_err());
        assert!(parse_fol("<>p").is_err());
        // `E` not followed by `var .` is an ordinary predicate name
        assert_eq!(parse_fol("E(x)").unwrap(), FolFormula::atom_app("E", "x"));
    }
}
