use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::model::{Model, StateId};
use crate::truth::Truth;

/// The depth-`n` behaviour of a state: nothing at depth 0, otherwise its atom
/// values and the largest edge weight into each depth-`(n-1)` behaviour.
///
/// Successor entries are sorted and never zero, so structural equality is
/// behavioural equality. The derived order compares depth, then atoms, then
/// successor entries lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    Unit,
    Node {
        depth: usize,
        atoms: Vec<Truth>,
        successors: Vec<(Arc<Signature>, Truth)>,
    },
}

impl Signature {
    pub fn depth(&self) -> usize {
        match self {
            Signature::Unit => 0,
            Signature::Node { depth, .. } => *depth,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Unit => f.write_str("*"),
            Signature::Node {
                atoms, successors, ..
            } => {
                f.write_str("(")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(" | {")?;
                for (i, (s, w)) in successors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}: {w}")?;
                }
                f.write_str("})")
            }
        }
    }
}

/// Signatures of every state at depth `n`.
pub fn signatures(m: &Model, n: usize) -> Vec<Arc<Signature>> {
    let unit = Arc::new(Signature::Unit);
    let mut level = vec![unit; m.num_states()];
    for depth in 1..=n {
        level = (0..m.num_states())
            .map(|a| {
                let mut succ: BTreeMap<Arc<Signature>, Truth> = BTreeMap::new();
                for &(t, r) in m.successors(a) {
                    let w = succ.entry(level[t].clone()).or_insert(Truth::ZERO);
                    *w = (*w).max(r);
                }
                Arc::new(Signature::Node {
                    depth,
                    atoms: m.atom_vector(a),
                    successors: succ.into_iter().collect(),
                })
            })
            .collect();
    }
    level
}

pub fn signature(m: &Model, a: StateId, n: usize) -> Arc<Signature> {
    signatures(m, n).swap_remove(a)
}

/// A model with one state per depth-`n` signature class.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub model: Model,
    /// Class of each original state.
    pub projection: Vec<StateId>,
}

/// Merges states with equal depth-`n` signatures. Each class is named after
/// and takes its atom values from its first member; the edge weight between
/// classes is the largest weight between their members.
pub fn quotient_by_signature(m: &Model, n: usize) -> Quotient {
    let sigs = signatures(m, n);
    let mut class_of: HashMap<&Arc<Signature>, StateId> = HashMap::new();
    let mut reps: Vec<StateId> = Vec::new();
    let projection: Vec<StateId> = sigs
        .iter()
        .enumerate()
        .map(|(a, s)| {
            *class_of.entry(s).or_insert_with(|| {
                reps.push(a);
                reps.len() - 1
            })
        })
        .collect();
    let mut b = Model::builder().atoms(m.atoms().iter().cloned());
    for &r in &reps {
        b.add_state(m.state_name(r))
            .expect("representative names are distinct");
    }
    for (c, &r) in reps.iter().enumerate() {
        for p in 0..m.num_atoms() {
            b.set_val_id(c, p, m.val(r, p));
        }
    }
    let mut weights: BTreeMap<(StateId, StateId), Truth> = BTreeMap::new();
    for (a, t, r) in m.edges() {
        let w = weights
            .entry((projection[a], projection[t]))
            .or_insert(Truth::ZERO);
        *w = (*w).max(r);
    }
    for ((c, e), w) in weights {
        b.set_edge_id(c, e, w);
    }
    Quotient {
        model: b.build().expect("quotient has at least one state"),
        projection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fork;
    use crate::metrics::depth_distance;
    use crate::model::disjoint_union;

    fn t(n: u64, d: u64) -> Truth {
        Truth::ratio(n, d)
    }

    #[test]
    fn fork_signatures() {
        let m = fork();
        assert_eq!(*signature(&m, 0, 0), Signature::Unit);
        assert_eq!(
            *signature(&m, 1, 1),
            Signature::Node {
                depth: 1,
                atoms: vec![Truth::ONE],
                successors: vec![]
            }
        );
        assert_eq!(
            *signature(&m, 0, 1),
            Signature::Node {
                depth: 1,
                atoms: vec![Truth::ONE],
                successors: vec![(Arc::new(Signature::Unit), t(1, 2))]
            }
        );
        assert_eq!(signature(&m, 0, 1).to_string(), "(1 | {*: 1/2})");
    }

    #[test]
    fn fork_quotient() {
        let m = fork();
        let q = quotient_by_signature(&m, 1);
        assert_eq!(q.projection[2], q.projection[5]);
        assert_eq!(q.model.num_states(), 5);
        assert_eq!(quotient_by_signature(&m, 0).model.num_states(), 1);
    }

    #[test]
    fn duplicated_copies_halve() {
        let m = fork();
        let (u, _) = disjoint_union(&m, &m).unwrap();
        for n in 0..=3 {
            let q = quotient_by_signature(&u, n);
            assert_eq!(
                q.model.num_states(),
                quotient_by_signature(&m, n).model.num_states()
            );
        }
        assert_eq!(quotient_by_signature(&u, 3).model.num_states(), 5);
    }

    #[test]
    fn projection_has_distance_zero() {
        let m = fork();
        for n in 0..=3 {
            let q = quotient_by_signature(&m, n);
            let (u, inj) = disjoint_union(&m, &q.model).unwrap();
            let d = depth_distance(&u, n);
            for a in 0..m.num_states() {
                assert!(d.get(inj.left[a], inj.right[q.projection[a]]).is_zero());
            }
        }
    }
}
