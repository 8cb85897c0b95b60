//! Behavioural distances: the depth-indexed recurrence, the unbounded limit, a
//! brute-force game oracle, the Kantorovich lift and logical lower bounds.

mod kantorovich;
mod oracle;

use std::sync::Arc;

use crate::approx::WitnessSynthesizer;
use crate::distance::{Depth, DistanceTable, Method, Provenance};
use crate::formula::ModalFormula;
use crate::model::{Model, StateId};
use crate::semantics::eval_modal_all;
use crate::truth::{common_denominator, Truth};

pub use kantorovich::{
    kantorovich_lift, kantorovich_lift_exhaustive, kantorovich_step, kantorovich_table, LiftError,
    LiftInput, EXHAUSTIVE_LIMIT,
};
pub use oracle::{game_distance_oracle, game_distance_table};

/// Default slack for logical lower bounds.
pub const DEFAULT_DELTA: Truth = Truth::ratio_const(1, 100);

/// The rationals `{0, 1/L, …, 1}` for a common denominator `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueGrid {
    denom: u64,
}

impl ValueGrid {
    pub fn of_values<I: IntoIterator<Item = Truth>>(values: I) -> ValueGrid {
        ValueGrid {
            denom: common_denominator(values),
        }
    }

    /// Grid of all constants occurring in `m`.
    pub fn of_model(m: &Model) -> ValueGrid {
        Self::of_values(m.constants())
    }

    pub fn denom(self) -> u64 {
        self.denom
    }

    pub fn contains(self, t: Truth) -> bool {
        self.denom % t.denom() == 0
    }

    pub fn points(self) -> impl Iterator<Item = Truth> {
        (0..=self.denom).map(move |k| Truth::ratio(k, self.denom))
    }

    /// Grid points interleaved with the midpoints `(2k+1)/2L`, ascending.
    pub fn with_midpoints(self) -> Vec<Truth> {
        let l = self.denom;
        (0..=2 * l).map(|k| Truth::ratio(k, 2 * l)).collect()
    }
}

fn provenance(method: Method, depth: Depth) -> Provenance {
    Provenance { method, depth }
}

/// One application of the recurrence to `d_n`, as a flat `|A|×|A|` matrix.
fn recurrence_step(m: &Model, prev: &DistanceTable) -> Vec<Vec<Truth>> {
    let n = m.num_states();
    // Spoiler moves from a, Duplicator answers from b
    let one_side = |a: StateId, b: StateId| -> Truth {
        m.successors(a)
            .iter()
            .map(|&(a1, r)| {
                let reply = (0..n)
                    .map(|b1| r.truncated_sub(m.rel(b, b1)).max(prev.get(a1, b1)))
                    .min()
                    .unwrap_or(r);
                r.min(reply)
            })
            .max()
            .unwrap_or(Truth::ZERO)
    };
    let mut rows = vec![vec![Truth::ZERO; n]; n];
    for a in 0..n {
        for b in 0..a {
            let atoms = (0..m.num_atoms())
                .map(|p| m.val(a, p).abs_diff(m.val(b, p)))
                .max()
                .unwrap_or(Truth::ZERO);
            let v = atoms.max(one_side(a, b)).max(one_side(b, a));
            rows[a][b] = v;
            rows[b][a] = v;
        }
    }
    rows
}

fn table(m: &Model, rows: Vec<Vec<Truth>>, prov: Provenance) -> DistanceTable {
    DistanceTable::new(m.states().to_vec(), rows, prov)
        .expect("computed distances form a pseudometric")
}

/// The tables `d_0, …, d_n`.
pub fn depth_tables(m: &Model, n: usize) -> Vec<DistanceTable> {
    let mut out = vec![DistanceTable::zero(
        m.states().to_vec(),
        provenance(Method::Recurrence, Depth::Bounded(0)),
    )];
    for k in 1..=n {
        let rows = recurrence_step(m, &out[k - 1]);
        out.push(table(
            m,
            rows,
            provenance(Method::Recurrence, Depth::Bounded(k)),
        ));
    }
    out
}

/// The depth-`n` behavioural distance `d_n`.
pub fn depth_distance(m: &Model, n: usize) -> DistanceTable {
    depth_tables(m, n).pop().unwrap()
}

/// The unbounded behavioural distance, as the stationary point of the recurrence.
///
/// Values never decrease and stay on the model's value grid, so the iteration
/// stops after at most `|A|²·L` steps.
pub fn behavioural_distance(m: &Model) -> DistanceTable {
    behavioural_distance_with_depth(m).0
}

/// [`behavioural_distance`] together with the first depth at which `d_n` is stationary.
pub fn behavioural_distance_with_depth(m: &Model) -> (DistanceTable, usize) {
    let mut d = DistanceTable::zero(
        m.states().to_vec(),
        provenance(Method::Recurrence, Depth::Bounded(0)),
    );
    let mut k = 0;
    loop {
        let rows = recurrence_step(m, &d);
        let next = table(
            m,
            rows,
            provenance(Method::Recurrence, Depth::Bounded(k + 1)),
        );
        if next.same_values(&d) {
            let rows = (0..m.num_states()).map(|a| d.row(a).to_vec()).collect();
            return (
                table(m, rows, provenance(Method::Recurrence, Depth::Unbounded)),
                k,
            );
        }
        d = next;
        k += 1;
    }
}

/// A rank-`≤ n` formula separating `a` and `b` by at least `d_n(a,b) − δ`,
/// together with the separation it achieves.
pub fn logical_distance_lower(
    m: &Model,
    a: StateId,
    b: StateId,
    n: usize,
    delta: Truth,
) -> (Truth, Arc<ModalFormula>) {
    let mut synth = WitnessSynthesizer::new(m, n);
    let phi = synth.witness(a, b, n, delta);
    let values = eval_modal_all(m, &phi).expect("witness uses only model atoms");
    (values.get(a).abs_diff(values.get(b)), phi)
}
