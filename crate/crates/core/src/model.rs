//! Finite fuzzy relational models.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::truth::Truth;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("at least one state required")]
    NoStates,
    #[error("atom sets differ: {left:?} vs {right:?}")]
    AtomMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
}

/// Index of a state inside a [`Model`].
pub type StateId = usize;
/// Index of an atom inside a [`Model`].
pub type AtomId = usize;

/// A finite fuzzy relational model: states, `[0,1]`-valued atoms and a
/// `[0,1]`-valued transition relation.
///
/// Valuation and relation are stored sparsely; an absent entry is exactly 0 and
/// no stored entry is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    atoms: Vec<String>,
    atom_index: HashMap<String, AtomId>,
    valuation: BTreeMap<(StateId, AtomId), Truth>,
    relation: BTreeMap<(StateId, StateId), Truth>,
    successors: Vec<Vec<(StateId, Truth)>>,
}

impl Model {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    /// Like [`Model::state_id`] but reports a missing name as an error.
    pub fn require_state(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_id(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn atom_id(&self, name: &str) -> Option<AtomId> {
        self.atom_index.get(name).copied()
    }

    pub fn val(&self, s: StateId, p: AtomId) -> Truth {
        self.valuation.get(&(s, p)).copied().unwrap_or(Truth::ZERO)
    }

    pub fn rel(&self, s: StateId, t: StateId) -> Truth {
        self.relation.get(&(s, t)).copied().unwrap_or(Truth::ZERO)
    }

    /// Outgoing edges with nonzero weight, ordered by target.
    pub fn successors(&self, s: StateId) -> &[(StateId, Truth)] {
        &self.successors[s]
    }

    /// All atom values of `s`, in atom order.
    pub fn atom_vector(&self, s: StateId) -> Vec<Truth> {
        (0..self.atoms.len()).map(|p| self.val(s, p)).collect()
    }

    /// The full row `t ↦ R(s, t)`.
    pub fn relation_row(&self, s: StateId) -> Vec<Truth> {
        let mut row = vec![Truth::ZERO; self.states.len()];
        for &(t, r) in &self.successors[s] {
            row[t] = r;
        }
        row
    }

    /// Nonzero valuation entries `(state, atom, value)`.
    pub fn valuation_entries(&self) -> impl Iterator<Item = (StateId, AtomId, Truth)> + '_ {
        self.valuation.iter().map(|(&(s, p), &v)| (s, p, v))
    }

    /// Nonzero relation entries `(source, target, value)`.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId, Truth)> + '_ {
        self.relation.iter().map(|(&(s, t), &v)| (s, t, v))
    }

    /// Every truth constant occurring in the model.
    pub fn constants(&self) -> impl Iterator<Item = Truth> + '_ {
        self.valuation
            .values()
            .chain(self.relation.values())
            .copied()
    }
}

/// Incremental construction of a [`Model`]. Names are declared first, then values
/// may be set by name or by index; setting a value twice keeps the last one.
#[derive(Debug, Clone, Default)]
pub struct ModelBuilder {
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    atoms: Vec<String>,
    atom_index: HashMap<String, AtomId>,
    valuation: BTreeMap<(StateId, AtomId), Truth>,
    relation: BTreeMap<(StateId, StateId), Truth>,
}

impl ModelBuilder {
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId, ModelError> {
        let name = name.into();
        if self.state_index.contains_key(&name) {
            return Err(ModelError::DuplicateState(name));
        }
        let id = self.states.len();
        self.state_index.insert(name.clone(), id);
        self.states.push(name);
        Ok(id)
    }

    pub fn add_atom(&mut self, name: impl Into<String>) -> Result<AtomId, ModelError> {
        let name = name.into();
        if self.atom_index.contains_key(&name) {
            return Err(ModelError::DuplicateAtom(name));
        }
        let id = self.atoms.len();
        self.atom_index.insert(name.clone(), id);
        self.atoms.push(name);
        Ok(id)
    }

    /// Chaining form of [`ModelBuilder::add_state`] for several names; panics on duplicates.
    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for n in names {
            self.add_state(n).expect("duplicate state");
        }
        self
    }

    /// Chaining form of [`ModelBuilder::add_atom`] for several names; panics on duplicates.
    pub fn atoms<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for n in names {
            self.add_atom(n).expect("duplicate atom");
        }
        self
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn set_val_id(&mut self, s: StateId, p: AtomId, v: Truth) {
        assert!(s < self.states.len() && p < self.atoms.len());
        if v.is_zero() {
            self.valuation.remove(&(s, p));
        } else {
            self.valuation.insert((s, p), v);
        }
    }

    pub fn set_edge_id(&mut self, s: StateId, t: StateId, v: Truth) {
        assert!(s < self.states.len() && t < self.states.len());
        if v.is_zero() {
            self.relation.remove(&(s, t));
        } else {
            self.relation.insert((s, t), v);
        }
    }

    pub fn set_val(&mut self, state: &str, atom: &str, v: Truth) -> Result<(), ModelError> {
        let s = self.state(state)?;
        let p = *self
            .atom_index
            .get(atom)
            .ok_or_else(|| ModelError::UnknownAtom(atom.to_string()))?;
        self.set_val_id(s, p, v);
        Ok(())
    }

    pub fn set_edge(&mut self, from: &str, to: &str, v: Truth) -> Result<(), ModelError> {
        let s = self.state(from)?;
        let t = self.state(to)?;
        self.set_edge_id(s, t, v);
        Ok(())
    }

    /// Chaining form of [`ModelBuilder::set_val`]; panics on unknown names.
    pub fn val(mut self, state: &str, atom: &str, v: Truth) -> Self {
        self.set_val(state, atom, v).expect("unknown name");
        self
    }

    /// Chaining form of [`ModelBuilder::set_edge`]; panics on unknown names.
    pub fn edge(mut self, from: &str, to: &str, v: Truth) -> Self {
        self.set_edge(from, to, v).expect("unknown name");
        self
    }

    fn state(&self, name: &str) -> Result<StateId, ModelError> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn build(self) -> Result<Model, ModelError> {
        if self.states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut successors = vec![Vec::new(); self.states.len()];
        for (&(s, t), &v) in &self.relation {
            successors[s].push((t, v));
        }
        Ok(Model {
            states: self.states,
            state_index: self.state_index,
            atoms: self.atoms,
            atom_index: self.atom_index,
            valuation: self.valuation,
            relation: self.relation,
            successors,
        })
    }
}

/// State embeddings produced by [`disjoint_union`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injections {
    pub left: Vec<StateId>,
    pub right: Vec<StateId>,
}

pub const LEFT_TAG: &str = "/L";
pub const RIGHT_TAG: &str = "/R";

/// The disjoint union `M + N`. States are renamed `name/L` and `name/R`; cross
/// edges are 0. The atom sets must coincide (their order may differ; the result
/// uses the order of `left`).
pub fn disjoint_union(left: &Model, right: &Model) -> Result<(Model, Injections), ModelError> {
    let mut la = left.atoms.clone();
    let mut ra = right.atoms.clone();
    la.sort();
    ra.sort();
    if la != ra {
        return Err(ModelError::AtomMismatch {
            left: left.atoms.clone(),
            right: right.atoms.clone(),
        });
    }
    let mut b = Model::builder().atoms(left.atoms.iter().cloned());
    let mut inj = Injections {
        left: Vec::with_capacity(left.num_states()),
        right: Vec::with_capacity(right.num_states()),
    };
    for name in &left.states {
        inj.left.push(b.add_state(format!("{name}{LEFT_TAG}"))?);
    }
    for name in &right.states {
        inj.right.push(b.add_state(format!("{name}{RIGHT_TAG}"))?);
    }
    for (s, p, v) in left.valuation_entries() {
        b.set_val_id(inj.left[s], p, v);
    }
    for (s, p, v) in right.valuation_entries() {
        let q = left.atom_index[&right.atoms[p]];
        b.set_val_id(inj.right[s], q, v);
    }
    for (s, t, v) in left.edges() {
        b.set_edge_id(inj.left[s], inj.left[t], v);
    }
    for (s, t, v) in right.edges() {
        b.set_edge_id(inj.right[s], inj.right[t], v);
    }
    Ok((b.build()?, inj))
}
