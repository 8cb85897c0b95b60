//! Seeded generators of models and formulas for property checks.

use rand::Rng;

use crate::formula::{FolFormula, ModalFormula, Var};
use crate::model::Model;
use crate::truth::Truth;

/// Shape of generated models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// States are drawn uniformly from `1..=max_states`.
    pub max_states: usize,
    pub atoms: usize,
    /// Probability that a given edge is present.
    pub density: f64,
    /// All values are multiples of `1/denominator`.
    pub denominator: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            max_states: 5,
            atoms: 2,
            density: 0.5,
            denominator: 12,
        }
    }
}

/// `p, q, r, s, t, p5, p6, …`
pub fn atom_names(n: usize) -> Vec<String> {
    const BASE: [&str; 5] = ["p", "q", "r", "s", "t"];
    (0..n)
        .map(|i| {
            BASE.get(i)
                .map_or_else(|| format!("p{i}"), |s| s.to_string())
        })
        .collect()
}

fn value<R: Rng>(rng: &mut R, den: u64, min: u64) -> Truth {
    Truth::ratio(rng.gen_range(min..=den), den)
}

pub fn random_model<R: Rng>(rng: &mut R, params: &ModelParams) -> Model {
    let n = rng.gen_range(1..=params.max_states.max(1));
    let mut b = Model::builder()
        .states((0..n).map(|i| format!("s{i}")))
        .atoms(atom_names(params.atoms));
    for s in 0..n {
        for p in 0..params.atoms {
            b.set_val_id(s, p, value(rng, params.denominator, 0));
        }
        for t in 0..n {
            if rng.gen_bool(params.density) {
                b.set_edge_id(s, t, value(rng, params.denominator, 1));
            }
        }
    }
    b.build().expect("at least one state")
}

/// A modal formula with rank at most `rank` and at most `size` nodes before
/// sugar expansion. Uses every connective including `∨`, `→` and `□`.
pub fn random_modal<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    rank: usize,
    size: usize,
    den: u64,
) -> ModalFormula {
    if size <= 1 || rng.gen_ratio(1, 6) {
        return if rank > 0 && !atoms.is_empty() && rng.gen_bool(0.7) {
            ModalFormula::atom(atoms[rng.gen_range(0..atoms.len())].clone())
        } else {
            ModalFormula::Const(value(rng, den, 0))
        };
    }
    let rest = size - 1;
    let split = |rng: &mut R| {
        let l = rng.gen_range(1..=rest.max(2) - 1);
        (l, rest.saturating_sub(l).max(1))
    };
    match rng.gen_range(0..8) {
        0 => random_modal(rng, atoms, rank, rest, den).neg(),
        1 => random_modal(rng, atoms, rank, rest, den).sub(value(rng, den, 0)),
        2 | 3 if rank > 0 => random_modal(rng, atoms, rank - 1, rest, den).diamond(),
        4 if rank > 0 => random_modal(rng, atoms, rank - 1, rest, den).boxed(),
        5 => {
            let (l, r) = split(rng);
            random_modal(rng, atoms, rank, l, den).or(random_modal(rng, atoms, rank, r, den))
        }
        6 => {
            let (l, r) = split(rng);
            random_modal(rng, atoms, rank, l, den).implies(random_modal(rng, atoms, rank, r, den))
        }
        _ => {
            let (l, r) = split(rng);
            random_modal(rng, atoms, rank, l, den).and(random_modal(rng, atoms, rank, r, den))
        }
    }
}

/// A first-order formula whose free variables lie in `scope` and whose
/// quantifier rank is at most `qr`. Bound variables are `y0, y1, …` by nesting depth.
pub fn random_fol<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    scope: &[Var],
    qr: usize,
    size: usize,
    den: u64,
) -> FolFormula {
    let var = |rng: &mut R| scope[rng.gen_range(0..scope.len())].clone();
    if size <= 1 || scope.is_empty() || rng.gen_ratio(1, 6) {
        if scope.is_empty() {
            return FolFormula::Const(value(rng, den, 0));
        }
        return match rng.gen_range(0..5) {
            0 => FolFormula::Const(value(rng, den, 0)),
            1 if !atoms.is_empty() => {
                let p = atoms[rng.gen_range(0..atoms.len())].clone();
                FolFormula::atom_app(p, var(rng))
            }
            2 => FolFormula::eq(var(rng), var(rng)),
            _ => FolFormula::rel(var(rng), var(rng)),
        };
    }
    let rest = size - 1;
    match rng.gen_range(0..6) {
        0 => random_fol(rng, atoms, scope, qr, rest, den).neg(),
        1 => random_fol(rng, atoms, scope, qr, rest, den).sub(value(rng, den, 0)),
        2 | 3 if qr > 0 => {
            let y = format!("y{}", scope.len());
            let mut inner = scope.to_vec();
            inner.push(y.clone());
            let body = random_fol(rng, atoms, &inner, qr - 1, rest, den);
            if rng.gen_bool(0.5) {
                FolFormula::exists(y, body)
            } else {
                FolFormula::forall(y, body)
            }
        }
        _ => {
            let l = rng.gen_range(1..=rest.max(2) - 1);
            let r = rest.saturating_sub(l).max(1);
            random_fol(rng, atoms, scope, qr, l, den).and(random_fol(rng, atoms, scope, qr, r, den))
        }
    }
}

/// A deterministic pool of small first-order formulas with free variables in
/// `scope` and quantifier rank at most `qr`: atomic formulas, their negations
/// and shifts by 1/2, pairwise conjunctions of atomic formulas, and both
/// quantifiers over the pool one rank lower.
pub fn fol_pool(atoms: &[String], scope: &[Var], qr: usize) -> Vec<FolFormula> {
    let mut atomic = Vec::new();
    for x in scope {
        for p in atoms {
            atomic.push(FolFormula::atom_app(p.clone(), x.clone()));
        }
        for y in scope {
            atomic.push(FolFormula::rel(x.clone(), y.clone()));
            if x < y {
                atomic.push(FolFormula::eq(x.clone(), y.clone()));
            }
        }
    }
    let half = Truth::ratio(1, 2);
    let mut pool = Vec::new();
    for a in &atomic {
        pool.push(a.clone());
        pool.push(a.clone().neg());
        pool.push(a.clone().sub(half));
    }
    for i in 0..atomic.len() {
        for j in i + 1..atomic.len() {
            pool.push(atomic[i].clone().and(atomic[j].clone()));
        }
    }
    if qr > 0 {
        let y = format!("y{}", scope.len());
        let mut inner = scope.to_vec();
        inner.push(y.clone());
        for body in fol_pool(atoms, &inner, qr - 1) {
            // only bodies that use the new variable add anything
            if body.free_vars().contains(&y) {
                pool.push(FolFormula::exists(y.clone(), body.clone()));
                pool.push(FolFormula::forall(y.clone(), body));
            }
        }
    }
    pool
}
