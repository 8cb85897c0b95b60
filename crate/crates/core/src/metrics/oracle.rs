use std::collections::HashMap;

use super::ValueGrid;
use crate::distance::{Depth, DistanceTable, Method, Provenance};
use crate::games::{BisimConfig, WinningSets};
use crate::model::{Model, StateId};
use crate::truth::Truth;

/// Least winning ε by binary search over grid points and midpoints, solving
/// the game once per probed ε for all pairs at the same time.
struct Oracle<'m> {
    m: &'m Model,
    depth: Depth,
    candidates: Vec<Truth>,
    solved: HashMap<usize, WinningSets>,
}

impl Oracle<'_> {
    fn wins(&mut self, idx: usize, a: StateId, b: StateId) -> bool {
        let (m, depth, eps) = (self.m, self.depth, self.candidates[idx]);
        let sets = self
            .solved
            .entry(idx)
            .or_insert_with(|| WinningSets::solve(m, eps, depth));
        let c = BisimConfig::new(a, b);
        match depth {
            Depth::Bounded(k) => sets.wins_at(k, c),
            Depth::Unbounded => sets.wins_unbounded(c),
        }
    }

    fn distance(&mut self, a: StateId, b: StateId) -> Truth {
        // Duplicator always wins at ε = 1, the last candidate
        let (mut lo, mut hi) = (0, self.candidates.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.wins(mid, a, b) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        self.candidates[lo]
    }
}

fn oracle(m: &Model, depth: Depth) -> Oracle<'_> {
    Oracle {
        m,
        depth,
        candidates: ValueGrid::of_model(m).with_midpoints(),
        solved: HashMap::new(),
    }
}

/// The least ε for which Duplicator wins the game at `(a, b)`, found by solving
/// games only.
pub fn game_distance_oracle(m: &Model, a: StateId, b: StateId, depth: Depth) -> Truth {
    oracle(m, depth).distance(a, b)
}

/// [`game_distance_oracle`] for every pair.
pub fn game_distance_table(m: &Model, depth: Depth) -> DistanceTable {
    let mut o = oracle(m, depth);
    let n = m.num_states();
    let mut rows = vec![vec![Truth::ZERO; n]; n];
    for a in 0..n {
        for b in 0..n {
            rows[a][b] = o.distance(a, b);
        }
    }
    DistanceTable::new(
        m.states().to_vec(),
        rows,
        Provenance {
            method: Method::Game,
            depth,
        },
    )
    .expect("game distances form a pseudometric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fork, loop_and_chain};
    use crate::metrics::depth_distance;

    #[test]
    fn fork_oracle() {
        let m = fork();
        assert_eq!(
            game_distance_oracle(&m, 0, 3, Depth::Bounded(2)),
            Truth::ratio(1, 5)
        );
        assert_eq!(
            game_distance_oracle(&m, 0, 3, Depth::Bounded(1)),
            Truth::ratio(1, 10)
        );
        assert_eq!(
            game_distance_oracle(&m, 0, 3, Depth::Unbounded),
            Truth::ratio(1, 5)
        );
        for a in 0..6 {
            assert!(game_distance_oracle(&m, a, a, Depth::Unbounded).is_zero());
        }
    }

    #[test]
    fn oracle_matches_recurrence() {
        for m in [fork(), loop_and_chain(3)] {
            for n in 0..=4 {
                assert!(
                    game_distance_table(&m, Depth::Bounded(n)).same_values(&depth_distance(&m, n))
                );
            }
        }
    }
}
