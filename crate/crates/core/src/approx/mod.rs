//! Constructive side of the modal characterization: separating formulas,
//! modal approximation of non-expansive state functions, and final-chain
//! signatures with the induced quotients.

mod signature;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::distance::DistanceTable;
use crate::formula::ModalFormula;
use crate::metrics::depth_tables;
use crate::model::{Model, StateId};
use crate::semantics::{eval_modal_all, StateFunction};
use crate::truth::Truth;

pub use signature::{quotient_by_signature, signature, signatures, Quotient, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("function has {got} values but the model has {want} states")]
    Arity { got: usize, want: usize },
    #[error("function is not non-expansive: |f({a}) - f({b})| = {gap} > d_{depth}({a},{b}) = {distance}")]
    NotNonExpansive {
        a: String,
        b: String,
        gap: Truth,
        distance: Truth,
        depth: usize,
    },
}

type Formula = Arc<ModalFormula>;

/// Builds witnesses and approximants on one model, sharing every repeated
/// subformula so that results stay small as DAGs.
///
/// With exact rationals both constructions are exact: a witness for `(a, b)` at
/// depth `n` separates them by exactly `d_n(a, b)`, and an approximant equals
/// the target function. The slack parameters therefore bound the error for
/// every admissible value and are not consumed.
pub struct WitnessSynthesizer<'m> {
    m: &'m Model,
    tables: Vec<DistanceTable>,
    witnesses: HashMap<(StateId, StateId, usize), (Formula, Arc<StateFunction>)>,
    approximants: HashMap<(Vec<Truth>, usize), Formula>,
    constants: HashMap<Truth, Formula>,
}

impl<'m> WitnessSynthesizer<'m> {
    pub fn new(m: &'m Model, depth: usize) -> WitnessSynthesizer<'m> {
        WitnessSynthesizer {
            m,
            tables: depth_tables(m, depth),
            witnesses: HashMap::new(),
            approximants: HashMap::new(),
            constants: HashMap::new(),
        }
    }

    /// `d_n`, computing further tables when needed.
    pub fn distance(&mut self, n: usize) -> &DistanceTable {
        if n >= self.tables.len() {
            self.tables = depth_tables(self.m, n);
        }
        &self.tables[n]
    }

    fn constant(&mut self, c: Truth) -> Formula {
        self.constants
            .entry(c)
            .or_insert_with(|| Arc::new(ModalFormula::Const(c)))
            .clone()
    }

    /// A formula of rank at most `n` with `|φ(a) − φ(b)| ≥ d_n(a,b) − δ`.
    pub fn witness(&mut self, a: StateId, b: StateId, n: usize, delta: Truth) -> Formula {
        self.witness_with_values(a, b, n, delta).0
    }

    fn witness_with_values(
        &mut self,
        a: StateId,
        b: StateId,
        n: usize,
        delta: Truth,
    ) -> (Formula, Arc<StateFunction>) {
        if let Some(hit) = self.witnesses.get(&(a, b, n)) {
            return hit.clone();
        }
        let phi = self.build_witness(a, b, n, delta);
        let values = Arc::new(eval_modal_all(self.m, &phi).expect("witness uses model atoms"));
        self.witnesses
            .insert((a, b, n), (phi.clone(), values.clone()));
        (phi, values)
    }

    fn build_witness(&mut self, a: StateId, b: StateId, n: usize, delta: Truth) -> Formula {
        let m = self.m;
        let target = self.distance(n).get(a, b);
        if n == 0 || target.is_zero() {
            return self.constant(Truth::ZERO);
        }
        if let Some(p) = (0..m.num_atoms()).find(|&p| m.val(a, p).abs_diff(m.val(b, p)) == target) {
            return Arc::new(ModalFormula::Atom(m.atoms()[p].clone()));
        }
        // a Spoiler move realizing the recurrence value, from either side
        let prev = &self.tables[n - 1];
        let (a1, r) = [(a, b), (b, a)]
            .into_iter()
            .flat_map(|(x, y)| {
                m.successors(x).iter().filter_map(move |&(x1, r)| {
                    let reply = (0..m.num_states())
                        .map(|y1| r.truncated_sub(m.rel(y, y1)).max(prev.get(x1, y1)))
                        .min()
                        .unwrap_or(r);
                    (r.min(reply) == target).then_some((x1, r))
                })
            })
            .next()
            .expect("recurrence value is attained by an atom or a move");
        let f: Vec<Truth> = (0..m.num_states())
            .map(|t| r.truncated_sub(prev.get(a1, t)))
            .collect();
        let inner = self.approximate_unchecked(f, n - 1, delta.div_int(2));
        Arc::new(ModalFormula::Diamond(inner))
    }

    /// A formula of rank at most `n` within `ε` of `f` at every state.
    pub fn approximate(
        &mut self,
        f: &StateFunction,
        n: usize,
        eps: Truth,
    ) -> Result<Formula, ApproxError> {
        let m = self.m;
        if f.len() != m.num_states() {
            return Err(ApproxError::Arity {
                got: f.len(),
                want: m.num_states(),
            });
        }
        let d = self.distance(n);
        for a in 0..f.len() {
            for b in 0..a {
                let gap = f.get(a).abs_diff(f.get(b));
                if gap > d.get(a, b) {
                    return Err(ApproxError::NotNonExpansive {
                        a: m.state_name(a).to_string(),
                        b: m.state_name(b).to_string(),
                        gap,
                        distance: d.get(a, b),
                        depth: n,
                    });
                }
            }
        }
        Ok(self.approximate_unchecked(f.values().to_vec(), n, eps))
    }

    fn approximate_unchecked(&mut self, f: Vec<Truth>, n: usize, eps: Truth) -> Formula {
        let key = (f, n);
        if let Some(hit) = self.approximants.get(&key) {
            return hit.clone();
        }
        let f = &key.0;
        let size = f.len();
        let result = if f.iter().all(|v| *v == f[0]) {
            self.constant(f[0])
        } else {
            // pairwise approximants, one per unordered pair
            let mut pair: HashMap<(StateId, StateId), Formula> = HashMap::new();
            for a in 0..size {
                for b in 0..size {
                    if f[a] > f[b] || (f[a] == f[b] && a <= b) {
                        let phi = self.pair_approximant(f, a, b, n, eps);
                        pair.insert((a, b), phi.clone());
                        pair.insert((b, a), phi);
                    }
                }
            }
            let mut disjuncts: Vec<Formula> = Vec::new();
            for a in 0..size {
                let mut parts: Vec<Formula> = Vec::new();
                for b in 0..size {
                    let phi = &pair[&(a, b)];
                    if !parts.iter().any(|q| Arc::ptr_eq(q, phi)) {
                        parts.push(phi.clone());
                    }
                }
                let g = ModalFormula::and_all(parts).unwrap();
                if !disjuncts.iter().any(|q| Arc::ptr_eq(q, &g)) {
                    disjuncts.push(g);
                }
            }
            if disjuncts.len() == 1 {
                disjuncts.pop().unwrap()
            } else {
                ModalFormula::or_all(disjuncts).unwrap()
            }
        };
        self.approximants.insert(key, result.clone());
        result
    }

    /// `¬(¬((ψ ⊖ u) ∧ v) ⊖ w)` with `u = ψ(b)`, `v = f(a) − f(b)`, `w = f(b)`,
    /// which evaluates to `min(ψ ⊖ u, v) + w` capped at 1: exactly `f(b)` at `b`
    /// and `f(a)` at `a` once `ψ` separates the pair by at least `v`.
    fn pair_approximant(
        &mut self,
        f: &[Truth],
        a: StateId,
        b: StateId,
        n: usize,
        eps: Truth,
    ) -> Formula {
        let v = f[a].truncated_sub(f[b]);
        if v.is_zero() {
            return self.constant(f[b]);
        }
        let (mut psi, values) = self.witness_with_values(a, b, n, eps.div_int(2));
        let (mut pa, mut pb) = (values.get(a), values.get(b));
        if pa < pb {
            psi = Arc::new(ModalFormula::Neg(psi));
            (pa, pb) = (pa.complement(), pb.complement());
        }
        debug_assert!(pa.truncated_sub(pb) >= v);
        let mut phi = psi;
        if !pb.is_zero() {
            phi = Arc::new(ModalFormula::SubConst(phi, pb));
        }
        if !v.is_one() {
            let cap = self.constant(v);
            phi = Arc::new(ModalFormula::And(phi, cap));
        }
        if f[b].is_zero() {
            return phi;
        }
        let shifted = Arc::new(ModalFormula::SubConst(
            Arc::new(ModalFormula::Neg(phi)),
            f[b],
        ));
        Arc::new(ModalFormula::Neg(shifted))
    }
}

/// A formula of rank at most `n` whose values at `a` and `b` differ by at least
/// `d_n(a,b) − δ`.
pub fn synth_witness(
    m: &Model,
    a: StateId,
    b: StateId,
    n: usize,
    delta: Truth,
) -> Arc<ModalFormula> {
    WitnessSynthesizer::new(m, n).witness(a, b, n, delta)
}

/// A formula of rank at most `n` within `ε` of `f` everywhere. `f` must be
/// non-expansive for `d_n`.
pub fn approximate_function(
    m: &Model,
    f: &StateFunction,
    n: usize,
    eps: Truth,
) -> Result<Arc<ModalFormula>, ApproxError> {
    WitnessSynthesizer::new(m, n).approximate(f, n, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fork, loop_and_chain};
    use crate::metrics::depth_distance;
    use crate::syntax::parse_modal;

    fn t(n: u64, d: u64) -> Truth {
        Truth::ratio(n, d)
    }

    fn gap(m: &Model, phi: &ModalFormula, a: StateId, b: StateId) -> Truth {
        let v = eval_modal_all(m, phi).unwrap();
        v.get(a).abs_diff(v.get(b))
    }

    #[test]
    fn fork_witnesses() {
        let m = fork();
        let phi = synth_witness(&m, 0, 3, 2, t(1, 100));
        assert!(phi.rank() <= 2);
        assert_eq!(gap(&m, &phi, 0, 3), t(1, 5));
        let phi = synth_witness(&m, 1, 2, 1, t(1, 100));
        assert_eq!(*phi, ModalFormula::atom("p"));
        assert_eq!(
            *synth_witness(&m, 4, 4, 2, t(1, 100)),
            ModalFormula::Const(Truth::ZERO)
        );
        let ideal = parse_modal("<>(p .- 1/2)").unwrap();
        assert_eq!(gap(&m, &ideal, 0, 3), t(1, 5));
    }

    #[test]
    fn witnesses_are_exact_everywhere() {
        for m in [fork(), loop_and_chain(3)] {
            for n in 0..=4 {
                let d = depth_distance(&m, n);
                let mut synth = WitnessSynthesizer::new(&m, n);
                for a in 0..m.num_states() {
                    for b in 0..m.num_states() {
                        let phi = synth.witness(a, b, n, t(1, 100));
                        assert!(phi.rank() <= n);
                        assert_eq!(gap(&m, &phi, a, b), d.get(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn approximating_a_modal_property() {
        let m = fork();
        let target = eval_modal_all(&m, &parse_modal("<>(p .- 1/2)").unwrap()).unwrap();
        let phi = approximate_function(&m, &target, 2, t(1, 20)).unwrap();
        assert!(phi.rank() <= 2);
        assert_eq!(eval_modal_all(&m, &phi).unwrap(), target);
        let c = StateFunction::constant(6, t(1, 3));
        assert_eq!(
            *approximate_function(&m, &c, 1, t(1, 20)).unwrap(),
            ModalFormula::Const(t(1, 3))
        );
    }

    #[test]
    fn rejects_expansive_functions() {
        let m = fork();
        let f = StateFunction::new(vec![
            Truth::ONE,
            Truth::ZERO,
            Truth::ZERO,
            Truth::ZERO,
            Truth::ZERO,
            Truth::ZERO,
        ]);
        match approximate_function(&m, &f, 2, t(1, 20)) {
            Err(ApproxError::NotNonExpansive { a, b, .. }) => {
                assert_eq!((a.as_str(), b.as_str()), ("s2", "s1"))
            }
            other => panic!("unexpected {other:?}"),
        }
        let short = StateFunction::new(vec![Truth::ONE]);
        assert!(matches!(
            approximate_function(&m, &short, 2, t(1, 20)),
            Err(ApproxError::Arity { .. })
        ));
    }

    #[test]
    fn pair_approximant_algebra() {
        let m = fork();
        let d = depth_distance(&m, 2);
        // f = c ⊖ d_2(s1, ·)
        let f: Vec<Truth> = (0..6).map(|x| t(3, 5).truncated_sub(d.get(0, x))).collect();
        let mut synth = WitnessSynthesizer::new(&m, 2);
        for a in 0..6 {
            for b in 0..6 {
                if f[a] > f[b] {
                    let phi = synth.pair_approximant(&f, a, b, 2, t(1, 20));
                    let v = eval_modal_all(&m, &phi).unwrap();
                    assert_eq!(v.get(b), f[b]);
                    assert_eq!(v.get(a), f[a]);
                }
            }
        }
    }
}
