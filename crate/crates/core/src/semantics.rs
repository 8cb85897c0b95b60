//! Zadeh semantics of the modal and first-order languages on finite models.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{FolFormula, ModalFormula, Var};
use crate::model::{Model, StateId};
use crate::truth::Truth;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("state function has {got} values but the model has {want} states")]
    FunctionArity { got: usize, want: usize },
}

/// A `[0,1]`-valued function on the states of a model, indexed by [`StateId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateFunction {
    values: Vec<Truth>,
}

impl StateFunction {
    pub fn new(values: Vec<Truth>) -> StateFunction {
        StateFunction { values }
    }

    pub fn constant(states: usize, c: Truth) -> StateFunction {
        StateFunction::new(vec![c; states])
    }

    /// The valuation of atom `p` as a state function.
    pub fn of_atom(m: &Model, p: &str) -> Result<StateFunction, EvalError> {
        let id = m
            .atom_id(p)
            .ok_or_else(|| EvalError::UnknownAtom(p.to_string()))?;
        Ok(StateFunction::new(
            (0..m.num_states()).map(|s| m.val(s, id)).collect(),
        ))
    }

    pub fn get(&self, s: StateId) -> Truth {
        self.values[s]
    }

    pub fn values(&self) -> &[Truth] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sup_s |f(s) - g(s)|`.
    pub fn sup_distance(&self, other: &StateFunction) -> Truth {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(Truth::ZERO)
    }

    fn check(&self, m: &Model) -> Result<(), EvalError> {
        if self.values.len() != m.num_states() {
            return Err(EvalError::FunctionArity {
                got: self.values.len(),
                want: m.num_states(),
            });
        }
        Ok(())
    }
}

/// Values for the free variables of a first-order formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, StateId>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn single(x: impl Into<Var>, s: StateId) -> Assignment {
        let mut a = Assignment::new();
        a.bind(x, s);
        a
    }

    pub fn bind(&mut self, x: impl Into<Var>, s: StateId) -> &mut Self {
        self.0.insert(x.into(), s);
        self
    }

    pub fn get(&self, x: &str) -> Option<StateId> {
        self.0.get(x).copied()
    }
}

/// `(◇f)(a) = max_{a'} R(a,a') ∧ f(a')`; the empty supremum is 0.
pub fn diamond_apply(m: &Model, f: &StateFunction, a: StateId) -> Truth {
    m.successors(a)
        .iter()
        .map(|&(t, r)| r.min(f.get(t)))
        .max()
        .unwrap_or(Truth::ZERO)
}

/// [`diamond_apply`] at every state.
pub fn diamond_all(m: &Model, f: &StateFunction) -> Result<StateFunction, EvalError> {
    f.check(m)?;
    Ok(StateFunction::new(
        (0..m.num_states())
            .map(|a| diamond_apply(m, f, a))
            .collect(),
    ))
}

/// Evaluates `φ` at every state of `m`. Shared subformulas are evaluated once.
pub fn eval_modal_all(m: &Model, phi: &ModalFormula) -> Result<StateFunction, EvalError> {
    for p in phi.atoms() {
        if m.atom_id(&p).is_none() {
            return Err(EvalError::UnknownAtom(p));
        }
    }
    let n = m.num_states();
    let values = phi.fold(&mut |node, kids: &[std::sync::Arc<Vec<Truth>>]| {
        let v: Vec<Truth> = match node {
            ModalFormula::Const(c) => vec![*c; n],
            ModalFormula::Atom(p) => {
                let id = m.atom_id(p).unwrap();
                (0..n).map(|s| m.val(s, id)).collect()
            }
            ModalFormula::SubConst(_, c) => kids[0].iter().map(|x| x.truncated_sub(*c)).collect(),
            ModalFormula::Neg(_) => kids[0].iter().map(|x| x.complement()).collect(),
            ModalFormula::And(..) => kids[0]
                .iter()
                .zip(kids[1].iter())
                .map(|(x, y)| (*x).min(*y))
                .collect(),
            ModalFormula::Diamond(_) => {
                let f = StateFunction::new(kids[0].to_vec());
                (0..n).map(|a| diamond_apply(m, &f, a)).collect()
            }
        };
        std::sync::Arc::new(v)
    });
    Ok(StateFunction::new(values.to_vec()))
}

pub fn eval_modal(m: &Model, phi: &ModalFormula, a: StateId) -> Result<Truth, EvalError> {
    if a >= m.num_states() {
        return Err(EvalError::UnknownState(format!("#{a}")));
    }
    Ok(eval_modal_all(m, phi)?.get(a))
}

/// Evaluates a first-order formula under `sigma`, which must bind every free
/// variable. Quantifiers range over all states of `m`.
pub fn eval_fol(m: &Model, phi: &FolFormula, sigma: &Assignment) -> Result<Truth, EvalError> {
    for p in phi.atoms() {
        if m.atom_id(&p).is_none() {
            return Err(EvalError::UnknownAtom(p));
        }
    }
    for x in phi.free_vars() {
        match sigma.get(&x) {
            None => return Err(EvalError::UnboundVariable(x)),
            Some(s) if s >= m.num_states() => return Err(EvalError::UnknownState(format!("#{s}"))),
            Some(_) => {}
        }
    }
    let mut env: Vec<(&str, StateId)> = sigma.0.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    Ok(fol(m, phi, &mut env))
}

fn lookup(env: &[(&str, StateId)], x: &str) -> StateId {
    env.iter()
        .rev()
        .find(|(v, _)| *v == x)
        .map(|&(_, s)| s)
        .expect("free variables checked up front")
}

fn fol<'f>(m: &Model, phi: &'f FolFormula, env: &mut Vec<(&'f str, StateId)>) -> Truth {
    match phi {
        FolFormula::Const(c) => *c,
        FolFormula::AtomApp(p, x) => m.val(lookup(env, x), m.atom_id(p).unwrap()),
        FolFormula::Rel(x, y) => m.rel(lookup(env, x), lookup(env, y)),
        FolFormula::Eq(x, y) => {
            if lookup(env, x) == lookup(env, y) {
                Truth::ONE
            } else {
                Truth::ZERO
            }
        }
        FolFormula::SubConst(f, c) => fol(m, f, env).truncated_sub(*c),
        FolFormula::Neg(f) => fol(m, f, env).complement(),
        FolFormula::And(f, g) => {
            let a = fol(m, f, env);
            if a.is_zero() {
                return a;
            }
            a.min(fol(m, g, env))
        }
        FolFormula::Exists(x, f) => {
            let mut best = Truth::ZERO;
            for s in 0..m.num_states() {
                env.push((x.as_str(), s));
                best = best.max(fol(m, f, env));
                env.pop();
                if best.is_one() {
                    break;
                }
            }
            best
        }
    }
}

/// Standard translation `ST_x(φ)`: atoms become `p(x)`, `◇φ` becomes
/// `E v. (R(x,v) & ST_v(φ))`, everything else commutes. Bound variables are
/// `v0, v1, …` in pre-order, skipping `x` itself.
pub fn standard_translation(phi: &ModalFormula, x: &str) -> FolFormula {
    let mut counter = 0usize;
    translate(phi, x, x, &mut counter)
}

fn translate(phi: &ModalFormula, cur: &str, root: &str, counter: &mut usize) -> FolFormula {
    match phi {
        ModalFormula::Const(c) => FolFormula::Const(*c),
        ModalFormula::Atom(p) => FolFormula::atom_app(p.clone(), cur),
        ModalFormula::SubConst(f, c) => translate(f, cur, root, counter).sub(*c),
        ModalFormula::Neg(f) => translate(f, cur, root, counter).neg(),
        ModalFormula::And(f, g) => {
            let a = translate(f, cur, root, counter);
            a.and(translate(g, cur, root, counter))
        }
        ModalFormula::Diamond(f) => {
            let mut v = format!("v{counter}");
            *counter += 1;
            if v == root {
                v = format!("v{counter}");
                *counter += 1;
            }
            let body = translate(f, &v, root, counter);
            FolFormula::exists(v.clone(), FolFormula::rel(cur, v.as_str()).and(body))
        }
    }
}
