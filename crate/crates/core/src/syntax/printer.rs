use crate::formula::{FolFormula, ModalFormula};

// Binding levels of the printed context; a subterm is parenthesized when its
// own operator binds more loosely than the context requires.
const TOP: u8 = 0;
const AND: u8 = 1;
const SUB: u8 = 2;
const UNARY: u8 = 3;

/// Prints a modal formula in the concrete syntax accepted by
/// [`parse_modal`](super::parse_modal), using only the core connectives.
///
/// Output size is that of the tree unfolding, which for synthesized formulas can
/// be much larger than [`ModalFormula::dag_size`].
pub fn print_modal(f: &ModalFormula) -> String {
    let mut out = String::new();
    modal(f, TOP, &mut out);
    out
}

fn modal(f: &ModalFormula, ctx: u8, out: &mut String) {
    match f {
        ModalFormula::Const(c) => out.push_str(&c.to_string()),
        ModalFormula::Atom(p) => out.push_str(p),
        ModalFormula::Neg(g) => {
            out.push('~');
            modal(g, UNARY, out);
        }
        ModalFormula::Diamond(g) => {
            out.push_str("<>");
            modal(g, UNARY, out);
        }
        ModalFormula::SubConst(g, c) => paren(ctx > SUB, out, |out| {
            modal(g, SUB, out);
            out.push_str(" .- ");
            out.push_str(&c.to_string());
        }),
        ModalFormula::And(g, h) => paren(ctx > AND, out, |out| {
            modal(g, AND, out);
            out.push_str(" & ");
            modal(h, SUB, out);
        }),
    }
}

/// Prints a first-order formula in the syntax accepted by
/// [`parse_fol`](super::parse_fol).
pub fn print_fol(f: &FolFormula) -> String {
    let mut out = String::new();
    fol(f, TOP, &mut out);
    out
}

fn fol(f: &FolFormula, ctx: u8, out: &mut String) {
    match f {
        FolFormula::Const(c) => out.push_str(&c.to_string()),
        FolFormula::AtomApp(p, x) => {
            out.push_str(&format!("{p}({x})"));
        }
        FolFormula::Rel(x, y) => out.push_str(&format!("R({x},{y})")),
        FolFormula::Eq(x, y) => out.push_str(&format!("{x} = {y}")),
        FolFormula::Neg(g) => {
            out.push('~');
            fol(g, UNARY, out);
        }
        FolFormula::SubConst(g, c) => paren(ctx > SUB, out, |out| {
            fol(g, SUB, out);
            out.push_str(" .- ");
            out.push_str(&c.to_string());
        }),
        FolFormula::And(g, h) => paren(ctx > AND, out, |out| {
            fol(g, AND, out);
            out.push_str(" & ");
            fol(h, SUB, out);
        }),
        // the quantifier scope extends to the right, so any enclosing context
        // needs explicit parentheses
        FolFormula::Exists(x, g) => paren(ctx > TOP, out, |out| {
            out.push_str(&format!("E {x}. "));
            fol(g, UNARY, out);
        }),
    }
}

fn paren(wrap: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fol, parse_modal};
    use crate::truth::Truth;
    use proptest::prelude::*;
    use std::sync::Arc;

    #[test]
    fn examples() {
        assert_eq!(print_modal(&ModalFormula::Const(Truth::ratio(1, 2))), "1/2");
        let f = parse_modal("<>(p .- 1/2)").unwrap();
        assert_eq!(print_modal(&f), "<>(p .- 1/2)");
        assert_eq!(parse_modal(&print_modal(&f)).unwrap(), f);
        let g = parse_fol("E v0. (R(x,v0) & p(v0))").unwrap();
        assert_eq!(print_fol(&g), "E v0. (R(x,v0) & p(v0))");
        let h = parse_fol("(E y. R(x,y)) & p(x)").unwrap();
        assert_eq!(print_fol(&h), "(E y. R(x,y)) & p(x)");
    }

    fn arb_truth() -> impl Strategy<Value = Truth> {
        (1u64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| Truth::ratio(n, d)))
    }

    fn arb_modal() -> impl Strategy<Value = ModalFormula> {
        let leaf = prop_oneof![
            arb_truth().prop_map(ModalFormula::Const),
            prop::sample::select(vec!["p", "q", "r2"]).prop_map(ModalFormula::atom),
        ];
        leaf.prop_recursive(6, 48, 2, |inner| {
            prop_oneof![
                (inner.clone(), arb_truth()).prop_map(|(f, c)| f.sub(c)),
                inner.clone().prop_map(ModalFormula::neg),
                inner.clone().prop_map(ModalFormula::diamond),
                (inner.clone(), inner)
                    .prop_map(|(f, g)| ModalFormula::And(Arc::new(f), Arc::new(g))),
            ]
        })
    }

    fn arb_fol() -> impl Strategy<Value = FolFormula> {
        let var = || prop::sample::select(vec!["x", "y", "z"]);
        let leaf = prop_oneof![
            arb_truth().prop_map(FolFormula::Const),
            (prop::sample::select(vec!["p", "q"]), var())
                .prop_map(|(p, x)| FolFormula::atom_app(p, x)),
            (var(), var()).prop_map(|(x, y)| FolFormula::rel(x, y)),
            (var(), var()).prop_map(|(x, y)| FolFormula::eq(x, y)),
        ];
        leaf.prop_recursive(6, 48, 2, move |inner| {
            prop_oneof![
                (inner.clone(), arb_truth()).prop_map(|(f, c)| f.sub(c)),
                inner.clone().prop_map(FolFormula::neg),
                (inner.clone(), inner.clone()).prop_map(|(f, g)| f.and(g)),
                (var(), inner).prop_map(|(x, f)| FolFormula::exists(x, f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn modal_round_trip(f in arb_modal()) {
            let text = print_modal(&f);
            prop_assert_eq!(parse_modal(&text).unwrap(), f);
        }

        #[test]
        fn fol_round_trip(f in arb_fol()) {
            let text = print_fol(&f);
            prop_assert_eq!(parse_fol(&text).unwrap(), f);
        }
    }
}
