//! Gaifman neighbourhoods, unravellings and locality checks.

use std::collections::VecDeque;

use thiserror::Error;

use crate::formula::{FolFormula, ModalFormula};
use crate::model::{Model, ModelError, StateId};
use crate::semantics::{eval_fol, eval_modal, Assignment, EvalError};
use crate::truth::Truth;

/// Undirected graph with an edge `{a,b}` whenever `R(a,b) > 0` or `R(b,a) > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaifmanGraph {
    adj: Vec<Vec<StateId>>,
}

impl GaifmanGraph {
    pub fn new(m: &Model) -> GaifmanGraph {
        let mut adj = vec![Vec::new(); m.num_states()];
        for (a, b, _) in m.edges() {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        GaifmanGraph { adj }
    }

    pub fn neighbours(&self, a: StateId) -> &[StateId] {
        &self.adj[a]
    }

    /// Distance from the nearest source; `None` when unreachable.
    pub fn distances_from(&self, sources: &[StateId]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(a) = queue.pop_front() {
            let da = dist[a].unwrap();
            for &b in &self.adj[a] {
                if dist[b].is_none() {
                    dist[b] = Some(da + 1);
                    queue.push_back(b);
                }
            }
        }
        dist
    }
}

/// Length of a shortest Gaifman path, `None` for infinity.
pub fn gaifman_distance(m: &Model, a: StateId, b: StateId) -> Option<usize> {
    GaifmanGraph::new(m).distances_from(&[a])[b]
}

/// States within Gaifman distance `radius` of some state in `centre`, in model order.
pub fn ball(m: &Model, centre: &[StateId], radius: usize) -> Vec<StateId> {
    GaifmanGraph::new(m)
        .distances_from(centre)
        .into_iter()
        .enumerate()
        .filter_map(|(s, d)| d.filter(|&d| d <= radius).map(|_| s))
        .collect()
}

/// The submodel on `states` (given in increasing order), keeping names and values.
pub fn submodel(m: &Model, states: &[StateId]) -> Model {
    let mut index = vec![None; m.num_states()];
    let mut b = Model::builder().atoms(m.atoms().iter().cloned());
    for &s in states {
        index[s] = Some(
            b.add_state(m.state_name(s))
                .expect("names of a model are distinct"),
        );
    }
    for (s, p, v) in m.valuation_entries() {
        if let Some(i) = index[s] {
            b.set_val_id(i, p, v);
        }
    }
    for (s, t, v) in m.edges() {
        if let (Some(i), Some(j)) = (index[s], index[t]) {
            b.set_edge_id(i, j, v);
        }
    }
    b.build()
        .expect("submodel of a non-empty centre is non-empty")
}

/// The restriction of `m` to the radius-`radius` neighbourhood of `centre`.
pub fn neighbourhood_restrict(m: &Model, centre: &[StateId], radius: usize) -> Model {
    submodel(m, &ball(m, centre, radius))
}

/// Separator between path components in unravelled state names.
pub const PATH_SEP: char = '>';
/// Separator between a leaf path and a state of its attached copy.
pub const COPY_SEP: char = '@';

/// A tree-shaped model: every edge goes from a parent to a child.
#[derive(Debug, Clone)]
pub struct TreeModel {
    pub model: Model,
    pub root: StateId,
    pub parent: Vec<Option<StateId>>,
    /// The original state each path ends in.
    pub origin: Vec<StateId>,
}

impl TreeModel {
    /// Number of edges from the root.
    pub fn depth_of(&self, mut s: StateId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[s] {
            s = p;
            d += 1;
        }
        d
    }
}

/// Paths from `a` along positive edges with at most `k` steps. Each path is
/// named by its states joined with `>`.
pub fn unravel(m: &Model, a: StateId, k: usize) -> Result<TreeModel, ModelError> {
    let mut b = Model::builder().atoms(m.atoms().iter().cloned());
    let mut parent = vec![None];
    let mut origin = vec![a];
    let mut names = vec![m.state_name(a).to_string()];
    let root = b.add_state(names[0].clone())?;
    let mut frontier = vec![root];
    for _ in 0..k {
        let mut next = Vec::new();
        for &node in &frontier {
            for &(t, r) in m.successors(origin[node]) {
                let name = format!("{}{PATH_SEP}{}", names[node], m.state_name(t));
                let child = b.add_state(name.clone())?;
                names.push(name);
                parent.push(Some(node));
                origin.push(t);
                b.set_edge_id(node, child, r);
                next.push(child);
            }
        }
        frontier = next;
    }
    for (node, &s) in origin.iter().enumerate() {
        for p in 0..m.num_atoms() {
            b.set_val_id(node, p, m.val(s, p));
        }
    }
    Ok(TreeModel {
        model: b.build()?,
        root,
        parent,
        origin,
    })
}

/// A depth-`k` unravelling whose leaves continue into private copies of `m`.
#[derive(Debug, Clone)]
pub struct PartialUnravelling {
    pub model: Model,
    pub root: StateId,
    pub origin: Vec<StateId>,
}

/// Unravels `m` from `a` to depth `k`, then gives every path of exactly `k`
/// steps a fresh copy of `m` (states named `path@state`) and redirects the
/// leaf's outgoing edges into that copy.
pub fn partial_unravel(m: &Model, a: StateId, k: usize) -> Result<PartialUnravelling, ModelError> {
    let tree = unravel(m, a, k)?;
    let t = &tree.model;
    let mut b = Model::builder().atoms(m.atoms().iter().cloned());
    for name in t.states() {
        b.add_state(name.clone())?;
    }
    for (s, p, v) in t.valuation_entries() {
        b.set_val_id(s, p, v);
    }
    for (s, u, v) in t.edges() {
        b.set_edge_id(s, u, v);
    }
    let mut origin = tree.origin.clone();
    for leaf in (0..t.num_states()).filter(|&s| tree.depth_of(s) == k) {
        let base = b.num_states();
        for s in 0..m.num_states() {
            b.add_state(format!(
                "{}{COPY_SEP}{}",
                t.state_name(leaf),
                m.state_name(s)
            ))?;
            origin.push(s);
            for p in 0..m.num_atoms() {
                b.set_val_id(base + s, p, m.val(s, p));
            }
        }
        for (s, u, v) in m.edges() {
            b.set_edge_id(base + s, base + u, v);
        }
        for &(u, r) in m.successors(tree.origin[leaf]) {
            b.set_edge_id(leaf, base + u, r);
        }
    }
    Ok(PartialUnravelling {
        model: b.build()?,
        root: tree.root,
        origin,
    })
}

/// A formula whose locality can be checked.
#[derive(Debug, Clone, Copy)]
pub enum LocalFormula<'a> {
    Modal(&'a ModalFormula),
    /// Must have exactly one free variable.
    Fol(&'a FolFormula),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalityError {
    #[error("formula must have exactly one free variable, found {0}")]
    FreeVariables(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalityReport {
    pub full: Truth,
    pub local: Truth,
}

impl LocalityReport {
    pub fn equal(&self) -> bool {
        self.full == self.local
    }
}

/// Values of `φ` at `a` in `m` and in the radius-`radius` neighbourhood of `a`.
pub fn locality_check(
    m: &Model,
    phi: LocalFormula<'_>,
    a: StateId,
    radius: usize,
) -> Result<LocalityReport, LocalityError> {
    let local = neighbourhood_restrict(m, &[a], radius);
    let a_local = local
        .state_id(m.state_name(a))
        .expect("centre lies in its ball");
    let (full, local) = match phi {
        LocalFormula::Modal(f) => (eval_modal(m, f, a)?, eval_modal(&local, f, a_local)?),
        LocalFormula::Fol(f) => {
            let free = f.free_vars();
            if free.len() != 1 {
                return Err(LocalityError::FreeVariables(free.len()));
            }
            let x = free.into_iter().next().unwrap();
            (
                eval_fol(m, f, &Assignment::single(x.clone(), a))?,
                eval_fol(&local, f, &Assignment::single(x, a_local))?,
            )
        }
    };
    Ok(LocalityReport { full, local })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::Depth;
    use crate::fixtures::{fork, loop_and_chain, self_loop};
    use crate::games::{bisim_wins, Player};
    use crate::metrics::{behavioural_distance, depth_distance};
    use crate::model::disjoint_union;
    use crate::semantics::standard_translation;
    use crate::syntax::parse_modal;

    #[test]
    fn gaifman_examples() {
        let m = fork();
        assert_eq!(gaifman_distance(&m, 1, 2), Some(2));
        assert_eq!(gaifman_distance(&m, 0, 3), None);
        assert_eq!(gaifman_distance(&m, 4, 4), Some(0));
        // edges count in either direction
        assert_eq!(gaifman_distance(&m, 1, 0), Some(1));
    }

    #[test]
    fn restriction_examples() {
        let m = fork();
        let r = neighbourhood_restrict(&m, &[0], 1);
        assert_eq!(r.states(), ["s1", "s2", "s3"]);
        assert_eq!(r.edges().count(), 2);
        assert_eq!(neighbourhood_restrict(&m, &[4], 0).states(), ["s5"]);
        assert_eq!(
            neighbourhood_restrict(&m, &[4], 9).states(),
            ["s4", "s5", "s6"]
        );
        assert_eq!(
            neighbourhood_restrict(&m, &[1, 4], 0).states(),
            ["s2", "s5"]
        );
    }

    #[test]
    fn unravel_examples() {
        let m = fork();
        let t = unravel(&m, 0, 2).unwrap();
        assert_eq!(t.model.states(), ["s1", "s1>s2", "s1>s3"]);
        assert_eq!(t.parent, vec![None, Some(0), Some(0)]);
        assert_eq!(unravel(&m, 1, 3).unwrap().model.num_states(), 1);
        let l = unravel(&self_loop(), 0, 3).unwrap();
        assert_eq!(l.model.num_states(), 4);
        assert_eq!(l.depth_of(3), 3);
    }

    #[test]
    fn unravelling_root_is_indistinguishable() {
        let m = loop_and_chain(2);
        for a in 0..m.num_states() {
            for k in 0..=3 {
                let t = unravel(&m, a, k).unwrap();
                let (u, inj) = disjoint_union(&m, &t.model).unwrap();
                for n in 0..=k {
                    assert!(depth_distance(&u, n)
                        .get(inj.left[a], inj.right[t.root])
                        .is_zero());
                }
                let g = bisim_wins(
                    &m,
                    &t.model,
                    m.state_name(a),
                    t.model.state_name(t.root),
                    Truth::ZERO,
                    Depth::Bounded(k),
                )
                .unwrap();
                assert_eq!(g.winner(), Player::Duplicator);
            }
        }
    }

    #[test]
    fn partial_unravel_examples() {
        let l = self_loop();
        let p = partial_unravel(&l, 0, 1).unwrap();
        assert_eq!(p.model.num_states(), 3);
        assert_eq!(p.model.rel(0, 1), Truth::ONE);
        assert_eq!(p.model.rel(1, 2), Truth::ONE);
        assert_eq!(p.model.rel(2, 2), Truth::ONE);
        let p0 = partial_unravel(&l, 0, 0).unwrap();
        assert_eq!(
            p0.model.states(),
            [
                l.state_name(0).to_string(),
                format!("{}@{}", l.state_name(0), l.state_name(0))
            ]
        );
        for m in [fork(), loop_and_chain(2)] {
            for a in 0..m.num_states() {
                for k in 0..=2 {
                    let p = partial_unravel(&m, a, k).unwrap();
                    let (u, inj) = disjoint_union(&m, &p.model).unwrap();
                    assert!(behavioural_distance(&u)
                        .get(inj.left[a], inj.right[p.root])
                        .is_zero());
                }
            }
        }
    }

    #[test]
    fn locality_examples() {
        let m = fork();
        let st = standard_translation(&parse_modal("<>(p .- 1/2)").unwrap(), "x");
        let r = locality_check(&m, LocalFormula::Fol(&st), 0, 2).unwrap();
        assert_eq!((r.full, r.local), (Truth::ratio(1, 2), Truth::ratio(1, 2)));
        let lc = loop_and_chain(3);
        let rxx = FolFormula::rel("x", "x");
        assert!(locality_check(&lc, LocalFormula::Fol(&rxx), 0, 1)
            .unwrap()
            .equal());
        let c = ModalFormula::Const(Truth::ratio(1, 3));
        let r = locality_check(&m, LocalFormula::Modal(&c), 4, 0).unwrap();
        assert_eq!((r.full, r.local), (Truth::ratio(1, 3), Truth::ratio(1, 3)));
        let two = FolFormula::rel("x", "y");
        assert_eq!(
            locality_check(&m, LocalFormula::Fol(&two), 0, 1),
            Err(LocalityError::FreeVariables(2))
        );
    }
}
