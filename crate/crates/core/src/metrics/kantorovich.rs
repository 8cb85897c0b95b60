use thiserror::Error;

use super::ValueGrid;
use crate::distance::{Depth, DistanceTable, Method, Provenance};
use crate::model::Model;
use crate::truth::Truth;

/// Largest support searched exhaustively by [`kantorovich_lift_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// An atom vector together with successor weights over a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftInput {
    pub atoms: Vec<Truth>,
    pub weights: Vec<Truth>,
}

impl LiftInput {
    /// The data of state `a`: its atom values and outgoing edge weights.
    pub fn of_state(m: &Model, a: usize) -> LiftInput {
        LiftInput {
            atoms: m.atom_vector(a),
            weights: m.relation_row(a),
        }
    }

    /// `ev(g)(f) = max_s g(s) ∧ f(s)`.
    fn eval(&self, f: impl Fn(usize) -> Truth) -> Truth {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, w)| (*w).min(f(s)))
            .max()
            .unwrap_or(Truth::ZERO)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("weights cover {found} states but the distance table has {expected}")]
    Carrier { expected: usize, found: usize },
    #[error("atom vectors have lengths {0} and {1}")]
    Atoms(usize, usize),
    #[error("support of {0} states is too large for exhaustive search")]
    TooLarge(usize),
}

fn check(d: &DistanceTable, x: &LiftInput, y: &LiftInput) -> Result<Truth, LiftError> {
    for i in [x, y] {
        if i.weights.len() != d.size() {
            return Err(LiftError::Carrier {
                expected: d.size(),
                found: i.weights.len(),
            });
        }
    }
    if x.atoms.len() != y.atoms.len() {
        return Err(LiftError::Atoms(x.atoms.len(), y.atoms.len()));
    }
    Ok(x.atoms
        .iter()
        .zip(&y.atoms)
        .map(|(p, q)| p.abs_diff(*q))
        .max()
        .unwrap_or(Truth::ZERO))
}

fn grid(d: &DistanceTable, x: &LiftInput, y: &LiftInput) -> ValueGrid {
    ValueGrid::of_values(
        d.values()
            .iter()
            .chain(&x.weights)
            .chain(&y.weights)
            .copied(),
    )
}

fn support(x: &LiftInput, y: &LiftInput) -> Vec<usize> {
    (0..x.weights.len())
        .filter(|&s| !x.weights[s].is_zero() || !y.weights[s].is_zero())
        .collect()
}

/// The lifted distance `max_p |r₁(p) − r₂(p)| ∨ sup_f |ev(g₁)(f) − ev(g₂)(f)|`
/// over functions `f` that are non-expansive for `d`.
///
/// The supremum is taken over the cones `f(x) = c ⊖ d(x₀, x)`. Any
/// non-expansive `f` with `ev(g₁)(f)` attained at `s` dominates the cone with
/// `x₀ = s, c = f(s)`, which keeps `ev(g₁)` and can only lower `ev(g₂)`; the
/// gap is piecewise linear in `c` with breakpoints on the value grid, so grid
/// values of `c` suffice.
pub fn kantorovich_lift(
    d: &DistanceTable,
    x: &LiftInput,
    y: &LiftInput,
) -> Result<Truth, LiftError> {
    let atoms = check(d, x, y)?;
    let mut best = atoms;
    for x0 in support(x, y) {
        for c in grid(d, x, y).points() {
            let f = |s: usize| c.truncated_sub(d.get(x0, s));
            best = best.max(x.eval(f).abs_diff(y.eval(f)));
        }
    }
    Ok(best)
}

/// The same supremum, by enumerating every grid-valued non-expansive function on
/// the joint support of the weights. Functions off the support do not affect
/// either side, and any non-expansive function on the support extends to the
/// whole carrier.
pub fn kantorovich_lift_exhaustive(
    d: &DistanceTable,
    x: &LiftInput,
    y: &LiftInput,
) -> Result<Truth, LiftError> {
    let atoms = check(d, x, y)?;
    let supp = support(x, y);
    if supp.len() > EXHAUSTIVE_LIMIT {
        return Err(LiftError::TooLarge(supp.len()));
    }
    let points: Vec<Truth> = grid(d, x, y).points().collect();
    let mut values = vec![Truth::ZERO; d.size()];
    let mut best = atoms;
    search(d, x, y, &supp, &points, 0, &mut values, &mut best);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search(
    d: &DistanceTable,
    x: &LiftInput,
    y: &LiftInput,
    supp: &[usize],
    points: &[Truth],
    i: usize,
    values: &mut Vec<Truth>,
    best: &mut Truth,
) {
    if i == supp.len() {
        let f = |s: usize| values[s];
        *best = (*best).max(x.eval(f).abs_diff(y.eval(f)));
        return;
    }
    let s = supp[i];
    for &v in points {
        let ok = supp[..i]
            .iter()
            .all(|&t| values[t].abs_diff(v) <= d.get(s, t));
        if ok {
            values[s] = v;
            search(d, x, y, supp, points, i + 1, values, best);
        }
    }
}

/// One Kantorovich iteration on the states of `m`: lifts `prev` along every pair.
pub fn kantorovich_step(m: &Model, prev: &DistanceTable) -> DistanceTable {
    let n = m.num_states();
    let inputs: Vec<LiftInput> = (0..n).map(|a| LiftInput::of_state(m, a)).collect();
    let mut rows = vec![vec![Truth::ZERO; n]; n];
    for a in 0..n {
        for b in 0..a {
            let v = kantorovich_lift(prev, &inputs[a], &inputs[b]).expect("carrier is the model");
            rows[a][b] = v;
            rows[b][a] = v;
        }
    }
    let depth = match prev.provenance().depth {
        Depth::Bounded(k) => Depth::Bounded(k + 1),
        Depth::Unbounded => Depth::Unbounded,
    };
    DistanceTable::new(
        m.states().to_vec(),
        rows,
        Provenance {
            method: Method::Kantorovich,
            depth,
        },
    )
    .expect("lifted distances form a pseudometric")
}

/// `d^K_n`, iterating [`kantorovich_step`] from the zero table.
pub fn kantorovich_table(m: &Model, n: usize) -> DistanceTable {
    let mut d = DistanceTable::zero(
        m.states().to_vec(),
        Provenance {
            method: Method::Kantorovich,
            depth: Depth::Bounded(0),
        },
    );
    for _ in 0..n {
        d = kantorovich_step(m, &d);
    }
    d
}
