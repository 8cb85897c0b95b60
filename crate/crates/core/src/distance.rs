//! Pseudometric tables over the states of a model.

use std::fmt;

use thiserror::Error;

use crate::model::StateId;
use crate::truth::Truth;

/// Game/metric depth: a bounded number of rounds or the unrestricted game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Depth {
    Bounded(usize),
    Unbounded,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Bounded(n) => write!(f, "{n}"),
            Depth::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Which computation produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Recurrence,
    Game,
    Kantorovich,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Recurrence => "recurrence",
            Method::Game => "game",
            Method::Kantorovich => "kantorovich",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub method: Method,
    pub depth: Depth,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("matrix is not {0}x{0}")]
    Shape(usize),
    #[error("d({0},{0}) is not 0")]
    Reflexivity(String),
    #[error("d({0},{1}) != d({1},{0})")]
    Symmetry(String, String),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    Triangle(String, String, String),
}

/// A pseudometric on a model's states, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    states: Vec<String>,
    values: Vec<Truth>,
    provenance: Provenance,
}

impl DistanceTable {
    /// Validates reflexivity, symmetry and the triangle inequality exactly.
    pub fn new(
        states: Vec<String>,
        rows: Vec<Vec<Truth>>,
        provenance: Provenance,
    ) -> Result<DistanceTable, DistanceError> {
        let n = states.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(DistanceError::Shape(n));
        }
        let values: Vec<Truth> = rows.into_iter().flatten().collect();
        let at = |a: usize, b: usize| values[a * n + b];
        for a in 0..n {
            if !at(a, a).is_zero() {
                return Err(DistanceError::Reflexivity(states[a].clone()));
            }
            for b in 0..a {
                if at(a, b) != at(b, a) {
                    return Err(DistanceError::Symmetry(
                        states[a].clone(),
                        states[b].clone(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(a, c) > at(a, b).saturating_add(at(b, c)) {
                        return Err(DistanceError::Triangle(
                            states[a].clone(),
                            states[b].clone(),
                            states[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(DistanceTable {
            states,
            values,
            provenance,
        })
    }

    /// The all-zero table.
    pub fn zero(states: Vec<String>, provenance: Provenance) -> DistanceTable {
        let n = states.len();
        DistanceTable {
            states,
            values: vec![Truth::ZERO; n * n],
            provenance,
        }
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn get(&self, a: StateId, b: StateId) -> Truth {
        self.values[a * self.states.len() + b]
    }

    pub fn row(&self, a: StateId) -> &[Truth] {
        let n = self.states.len();
        &self.values[a * n..(a + 1) * n]
    }

    pub fn values(&self) -> &[Truth] {
        &self.values
    }

    /// Same numbers, ignoring provenance.
    pub fn same_values(&self, other: &DistanceTable) -> bool {
        self.states == other.states && self.values == other.values
    }

    /// Pointwise `self ≤ other`.
    pub fn pointwise_le(&self, other: &DistanceTable) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Row-per-state text matrix: a header line of state names, then one line per
    /// state starting with its name followed by exact rationals.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push('-');
        for s in &self.states {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        for (a, s) in self.states.iter().enumerate() {
            out.push_str(s);
            for v in self.row(a) {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROV: Provenance = Provenance {
        method: Method::Recurrence,
        depth: Depth::Bounded(1),
    };

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    fn t(n: u64, d: u64) -> Truth {
        Truth::ratio(n, d)
    }

    #[test]
    fn accepts_a_pseudometric() {
        let z = Truth::ZERO;
        let rows = vec![
            vec![z, t(1, 2), t(1, 2)],
            vec![t(1, 2), z, z],
            vec![t(1, 2), z, z],
        ];
        let d = DistanceTable::new(names(3), rows, PROV).unwrap();
        assert_eq!(d.get(0, 2), t(1, 2));
        assert_eq!(
            d.render(),
            "- x0 x1 x2\nx0 0 1/2 1/2\nx1 1/2 0 0\nx2 1/2 0 0\n"
        );
    }

    #[test]
    fn rejects_violations() {
        let z = Truth::ZERO;
        let bad_refl = vec![vec![t(1, 3)]];
        assert!(matches!(
            DistanceTable::new(names(1), bad_refl, PROV),
            Err(DistanceError::Reflexivity(_))
        ));
        let bad_sym = vec![vec![z, t(1, 2)], vec![t(1, 3), z]];
        assert!(matches!(
            DistanceTable::new(names(2), bad_sym, PROV),
            Err(DistanceError::Symmetry(..))
        ));
        let bad_tri = vec![
            vec![z, t(1, 10), t(1, 2)],
            vec![t(1, 10), z, t(1, 10)],
            vec![t(1, 2), t(1, 10), z],
        ];
        assert!(matches!(
            DistanceTable::new(names(3), bad_tri, PROV),
            Err(DistanceError::Triangle(..))
        ));
        assert!(matches!(
            DistanceTable::new(names(2), vec![vec![z]], PROV),
            Err(DistanceError::Shape(2))
        ));
    }
}
