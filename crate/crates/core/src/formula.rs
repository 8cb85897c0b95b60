//! Abstract syntax of fuzzy modal logic and fuzzy first-order logic.
//!
//! Modal formulas share subterms through [`Arc`], so synthesized formulas are
//! DAGs whose tree unfolding can be exponentially larger than their node count.
//! Every traversal in this crate goes through [`ModalFormula::fold`], which visits
//! each shared node once.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::truth::Truth;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModalFormula {
    Const(Truth),
    Atom(String),
    /// `φ ⊖ c`
    SubConst(Arc<ModalFormula>, Truth),
    Neg(Arc<ModalFormula>),
    And(Arc<ModalFormula>, Arc<ModalFormula>),
    Diamond(Arc<ModalFormula>),
}

impl ModalFormula {
    pub fn constant(c: Truth) -> ModalFormula {
        ModalFormula::Const(c)
    }

    pub fn atom(name: impl Into<String>) -> ModalFormula {
        ModalFormula::Atom(name.into())
    }

    pub fn sub(self, c: Truth) -> ModalFormula {
        ModalFormula::SubConst(Arc::new(self), c)
    }

    pub fn neg(self) -> ModalFormula {
        ModalFormula::Neg(Arc::new(self))
    }

    pub fn and(self, other: ModalFormula) -> ModalFormula {
        ModalFormula::And(Arc::new(self), Arc::new(other))
    }

    pub fn diamond(self) -> ModalFormula {
        ModalFormula::Diamond(Arc::new(self))
    }

    /// `φ ∨ ψ := ¬(¬φ ∧ ¬ψ)`
    pub fn or(self, other: ModalFormula) -> ModalFormula {
        self.neg().and(other.neg()).neg()
    }

    /// `φ → ψ := ¬φ ∨ ψ`
    pub fn implies(self, other: ModalFormula) -> ModalFormula {
        self.neg().or(other)
    }

    /// `□φ := ¬◇¬φ`
    pub fn boxed(self) -> ModalFormula {
        self.neg().diamond().neg()
    }

    /// Conjunction of shared subformulas; `None` for an empty input.
    pub fn and_all<I: IntoIterator<Item = Arc<ModalFormula>>>(
        parts: I,
    ) -> Option<Arc<ModalFormula>> {
        parts
            .into_iter()
            .reduce(|a, b| Arc::new(ModalFormula::And(a, b)))
    }

    /// Disjunction of shared subformulas via `¬(¬φ ∧ ¬ψ)`; `None` for an empty input.
    pub fn or_all<I: IntoIterator<Item = Arc<ModalFormula>>>(
        parts: I,
    ) -> Option<Arc<ModalFormula>> {
        let negated = parts.into_iter().map(|f| Arc::new(ModalFormula::Neg(f)));
        Self::and_all(negated).map(|c| Arc::new(ModalFormula::Neg(c)))
    }

    pub fn children(&self) -> Vec<&Arc<ModalFormula>> {
        match self {
            ModalFormula::Const(_) | ModalFormula::Atom(_) => vec![],
            ModalFormula::SubConst(f, _) | ModalFormula::Neg(f) | ModalFormula::Diamond(f) => {
                vec![f]
            }
            ModalFormula::And(f, g) => vec![f, g],
        }
    }

    /// Bottom-up fold that evaluates each distinct node (by address) once.
    pub fn fold<T: Clone>(&self, combine: &mut dyn FnMut(&ModalFormula, &[T]) -> T) -> T {
        fn go<T: Clone>(
            node: &ModalFormula,
            memo: &mut HashMap<usize, T>,
            combine: &mut dyn FnMut(&ModalFormula, &[T]) -> T,
        ) -> T {
            let key = node as *const ModalFormula as usize;
            if let Some(v) = memo.get(&key) {
                return v.clone();
            }
            let kids: Vec<T> = node
                .children()
                .into_iter()
                .map(|c| go(c, memo, combine))
                .collect();
            let v = combine(node, &kids);
            memo.insert(key, v.clone());
            v
        }
        go(self, &mut HashMap::new(), combine)
    }

    /// Nesting depth of `◇` and atoms: constants 0, atoms 1, `◇` adds one.
    pub fn rank(&self) -> usize {
        self.fold(&mut |node, kids: &[usize]| match node {
            ModalFormula::Const(_) => 0,
            ModalFormula::Atom(_) => 1,
            ModalFormula::Diamond(_) => 1 + kids[0],
            _ => kids.iter().copied().max().unwrap_or(0),
        })
    }

    /// Names of all atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.fold(&mut |node, _: &[()]| {
            if let ModalFormula::Atom(p) = node {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Number of distinct nodes.
    pub fn dag_size(&self) -> usize {
        let mut n = 0usize;
        self.fold(&mut |_, _: &[()]| n += 1);
        n
    }

    /// Number of nodes of the tree unfolding, saturating at `u64::MAX`.
    pub fn tree_size(&self) -> u64 {
        self.fold(&mut |_, kids: &[u64]| kids.iter().fold(1u64, |acc, k| acc.saturating_add(*k)))
    }
}

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FolFormula {
    Const(Truth),
    /// `p(x)`
    AtomApp(String, Var),
    /// `R(x, y)`
    Rel(Var, Var),
    /// `x = y`
    Eq(Var, Var),
    SubConst(Box<FolFormula>, Truth),
    Neg(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Exists(Var, Box<FolFormula>),
}

impl FolFormula {
    pub fn atom_app(p: impl Into<String>, x: impl Into<Var>) -> FolFormula {
        FolFormula::AtomApp(p.into(), x.into())
    }

    pub fn rel(x: impl Into<Var>, y: impl Into<Var>) -> FolFormula {
        FolFormula::Rel(x.into(), y.into())
    }

    pub fn eq(x: impl Into<Var>, y: impl Into<Var>) -> FolFormula {
        FolFormula::Eq(x.into(), y.into())
    }

    pub fn sub(self, c: Truth) -> FolFormula {
        FolFormula::SubConst(Box::new(self), c)
    }

    pub fn neg(self) -> FolFormula {
        FolFormula::Neg(Box::new(self))
    }

    pub fn and(self, other: FolFormula) -> FolFormula {
        FolFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: FolFormula) -> FolFormula {
        self.neg().and(other.neg()).neg()
    }

    pub fn implies(self, other: FolFormula) -> FolFormula {
        self.neg().or(other)
    }

    pub fn exists(x: impl Into<Var>, body: FolFormula) -> FolFormula {
        FolFormula::Exists(x.into(), Box::new(body))
    }

    /// `∀x.φ := ¬∃x.¬φ`
    pub fn forall(x: impl Into<Var>, body: FolFormula) -> FolFormula {
        FolFormula::exists(x, body.neg()).neg()
    }

    /// Quantifier rank: atomic formulas 0, `∃` adds one, connectives take the max.
    pub fn qrank(&self) -> usize {
        match self {
            FolFormula::Const(_)
            | FolFormula::AtomApp(..)
            | FolFormula::Rel(..)
            | FolFormula::Eq(..) => 0,
            FolFormula::SubConst(f, _) | FolFormula::Neg(f) => f.qrank(),
            FolFormula::And(f, g) => f.qrank().max(g.qrank()),
            FolFormula::Exists(_, f) => 1 + f.qrank(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            FolFormula::Const(_) => {}
            FolFormula::AtomApp(_, x) => note(x, bound),
            FolFormula::Rel(x, y) | FolFormula::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            FolFormula::SubConst(f, _) | FolFormula::Neg(f) => f.collect_free(bound, out),
            FolFormula::And(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            FolFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Variables bound by some quantifier.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                FolFormula::SubConst(g, _) | FolFormula::Neg(g) => stack.push(g),
                FolFormula::And(g, h) => {
                    stack.push(g);
                    stack.push(h);
                }
                FolFormula::Exists(x, g) => {
                    out.insert(x.clone());
                    stack.push(g);
                }
                _ => {}
            }
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                FolFormula::AtomApp(p, _) => {
                    out.insert(p.clone());
                }
                FolFormula::SubConst(g, _) | FolFormula::Neg(g) | FolFormula::Exists(_, g) => {
                    stack.push(g)
                }
                FolFormula::And(g, h) => {
                    stack.push(g);
                    stack.push(h);
                }
                _ => {}
            }
        }
        out
    }
}
