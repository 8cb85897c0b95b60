//! Fuzzy relational models under Zadeh semantics.
//!
//! The crate evaluates fuzzy modal and first-order formulas on finite models,
//! computes behavioural distances three ways (bisimulation games, Kantorovich
//! lifting, modal witnesses) and implements the constructive side of the modal
//! characterization: witness synthesis, modal approximation of non-expansive
//! state functions, final-chain signatures, Gaifman locality and unravelling.
//! All arithmetic is exact over rationals in `[0,1]`.

pub mod approx;
pub mod distance;
pub mod fixtures;
pub mod formula;
pub mod games;
pub mod metrics;
pub mod model;
pub mod random;
pub mod semantics;
pub mod syntax;
pub mod transforms;
pub mod truth;

pub use distance::{Depth, DistanceTable, Method, Provenance};
pub use formula::{FolFormula, ModalFormula};
pub use model::{disjoint_union, Model, StateId};
pub use truth::Truth;
