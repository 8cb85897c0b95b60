use std::collections::{BTreeMap, VecDeque};

use super::{GameError, Player, Side};
use crate::distance::Depth;
use crate::model::{disjoint_union, Model, StateId};
use crate::truth::Truth;

/// A position `(a, b)` of the bisimulation game; both states live in the arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BisimConfig {
    pub left: StateId,
    pub right: StateId,
}

impl BisimConfig {
    pub fn new(left: StateId, right: StateId) -> BisimConfig {
        BisimConfig { left, right }
    }

    pub fn get(self, side: Side) -> StateId {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    pub fn with(self, side: Side, s: StateId) -> BisimConfig {
        match side {
            Side::Left => BisimConfig { left: s, ..self },
            Side::Right => BisimConfig { right: s, ..self },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpoilerMove {
    pub side: Side,
    pub target: StateId,
}

/// The rules of the ε-game on one arena.
#[derive(Clone, Copy)]
pub(crate) struct Rules<'m> {
    pub m: &'m Model,
    pub eps: Truth,
}

impl<'m> Rules<'m> {
    /// `|p(a) - p(b)| ≤ ε` for every atom.
    pub fn atoms_ok(&self, c: BisimConfig) -> bool {
        (0..self.m.num_atoms())
            .all(|p| self.m.val(c.left, p).abs_diff(self.m.val(c.right, p)) <= self.eps)
    }

    /// Spoiler may move along any edge of weight strictly above ε.
    pub fn spoiler_moves(&self, c: BisimConfig) -> impl Iterator<Item = (SpoilerMove, Truth)> + 'm {
        let eps = self.eps;
        let m = self.m;
        [Side::Left, Side::Right].into_iter().flat_map(move |side| {
            m.successors(c.get(side))
                .iter()
                .filter(move |(_, r)| *r > eps)
                .map(move |&(t, r)| (SpoilerMove { side, target: t }, r))
        })
    }

    /// Duplicator answers with an edge of weight at least `r - ε` on the other side.
    pub fn replies(
        &self,
        c: BisimConfig,
        side: Side,
        r: Truth,
    ) -> impl Iterator<Item = StateId> + 'm {
        let need = r.truncated_sub(self.eps);
        self.m
            .successors(c.get(side.other()))
            .iter()
            .filter(move |(_, w)| *w >= need)
            .map(|&(t, _)| t)
    }

    pub fn is_legal_spoiler(&self, c: BisimConfig, mv: SpoilerMove) -> Option<Truth> {
        let r = self.m.rel(c.get(mv.side), mv.target);
        (mv.target < self.m.num_states() && r > self.eps).then_some(r)
    }

    pub fn after(c: BisimConfig, mv: SpoilerMove, reply: StateId) -> BisimConfig {
        c.with(mv.side, mv.target).with(mv.side.other(), reply)
    }

    /// One round of the game: positions from which Duplicator survives one more
    /// round and then lands in `next`.
    fn step(&self, next: &[bool]) -> Vec<bool> {
        let n = self.m.num_states();
        let mut out = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = BisimConfig::new(a, b);
                out[a * n + b] = self.atoms_ok(c)
                    && self.spoiler_moves(c).all(|(mv, r)| {
                        self.replies(c, mv.side, r).any(|t| {
                            let d = Self::after(c, mv, t);
                            next[d.left * n + d.right]
                        })
                    });
            }
        }
        out
    }
}

/// Duplicator's winning regions `W_0 ⊇ W_1 ⊇ …` of the depth-k games.
#[derive(Debug, Clone)]
pub struct WinningSets {
    n: usize,
    levels: Vec<Vec<bool>>,
    stable: bool,
}

impl WinningSets {
    /// Solves depths `0..=k`, or until the regions stop shrinking when `depth` is
    /// unbounded. The sequence is decreasing, so on a finite arena it becomes
    /// constant after at most `|A|²` strict steps.
    pub fn solve(m: &Model, eps: Truth, depth: Depth) -> WinningSets {
        let rules = Rules { m, eps };
        let n = m.num_states();
        let mut levels = vec![vec![true; n * n]];
        let mut stable = false;
        loop {
            let last = levels.last().unwrap();
            if let Depth::Bounded(k) = depth {
                if levels.len() > k {
                    break;
                }
            }
            let next = rules.step(last);
            if next == *last {
                stable = true;
                if depth == Depth::Unbounded {
                    break;
                }
            }
            levels.push(next);
        }
        WinningSets { n, levels, stable }
    }

    /// Highest solved depth.
    pub fn max_depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn wins_at(&self, k: usize, c: BisimConfig) -> bool {
        let k = k.min(self.max_depth());
        self.levels[k][c.left * self.n + c.right]
    }

    /// Membership in the unbounded region; only meaningful once stabilized.
    pub fn wins_unbounded(&self, c: BisimConfig) -> bool {
        debug_assert!(self.stable);
        self.wins_at(self.max_depth(), c)
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// First depth at which the regions stop changing, if reached.
    pub fn stabilized_at(&self) -> Option<usize> {
        if !self.stable {
            return None;
        }
        (0..self.levels.len())
            .find(|&k| k + 1 < self.levels.len() && self.levels[k] == self.levels[k + 1])
            .or(Some(self.max_depth()))
    }

    /// Least `k` with `c ∉ W_k`.
    fn rank(&self, c: BisimConfig) -> Option<usize> {
        (0..self.levels.len()).find(|&k| !self.levels[k][c.left * self.n + c.right])
    }

    pub fn level(&self, k: usize) -> &[bool] {
        &self.levels[k]
    }
}

/// Solution of one ε-bisimulation game together with a winning strategy.
///
/// Strategies are keyed by configuration and rounds left (`None` in the
/// unbounded game) and cover every position reachable against any opponent.
#[derive(Debug, Clone)]
pub struct GameOutcome {
    pub(crate) arena: Model,
    pub(crate) eps: Truth,
    pub(crate) depth: Depth,
    pub(crate) initial: BisimConfig,
    pub(crate) winner: Player,
    pub(crate) duplicator: BTreeMap<(BisimConfig, Option<usize>, SpoilerMove), StateId>,
    pub(crate) spoiler: BTreeMap<(BisimConfig, Option<usize>), SpoilerMove>,
}

impl GameOutcome {
    pub fn winner(&self) -> Player {
        self.winner
    }

    pub fn arena(&self) -> &Model {
        &self.arena
    }

    pub fn epsilon(&self) -> Truth {
        self.eps
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn initial(&self) -> BisimConfig {
        self.initial
    }

    /// Duplicator's answer to `mv` in `config` with `rounds_left` rounds to go.
    pub fn duplicator_reply(
        &self,
        config: BisimConfig,
        rounds_left: Option<usize>,
        mv: SpoilerMove,
    ) -> Option<StateId> {
        self.duplicator.get(&(config, rounds_left, mv)).copied()
    }

    /// Spoiler's winning move in `config`; `None` where the atom condition already fails.
    pub fn spoiler_move(
        &self,
        config: BisimConfig,
        rounds_left: Option<usize>,
    ) -> Option<SpoilerMove> {
        self.spoiler.get(&(config, rounds_left)).copied()
    }

    /// Spoiler's opening move, if Spoiler wins and needs to move.
    pub fn opening_move(&self) -> Option<SpoilerMove> {
        self.spoiler_move(self.initial, self.rounds_left())
    }

    pub(crate) fn rounds_left(&self) -> Option<usize> {
        match self.depth {
            Depth::Bounded(k) => Some(k),
            Depth::Unbounded => None,
        }
    }

    pub(crate) fn rules(&self) -> Rules<'_> {
        Rules {
            m: &self.arena,
            eps: self.eps,
        }
    }

    pub fn describe_move(&self, mv: SpoilerMove, from: BisimConfig) -> String {
        format!(
            "{} -> {}",
            self.arena.state_name(from.get(mv.side)),
            self.arena.state_name(mv.target)
        )
    }
}

/// Solves the ε-game for `(a, b)` with both states in the same model.
pub fn bisim_game(m: &Model, a: StateId, b: StateId, eps: Truth, depth: Depth) -> GameOutcome {
    let sets = WinningSets::solve(m, eps, depth);
    let initial = BisimConfig::new(a, b);
    let wins = match depth {
        Depth::Bounded(k) => sets.wins_at(k, initial),
        Depth::Unbounded => sets.wins_unbounded(initial),
    };
    let rules = Rules { m, eps };
    let mut outcome = GameOutcome {
        arena: m.clone(),
        eps,
        depth,
        initial,
        winner: if wins {
            Player::Duplicator
        } else {
            Player::Spoiler
        },
        duplicator: BTreeMap::new(),
        spoiler: BTreeMap::new(),
    };
    let start = match depth {
        Depth::Bounded(k) => Some(k),
        Depth::Unbounded => None,
    };
    let mut queue = VecDeque::from([(initial, start)]);
    let mut seen = std::collections::HashSet::new();
    while let Some((c, left)) = queue.pop_front() {
        if !seen.insert((c, left)) || left == Some(0) {
            continue;
        }
        let next_left = left.map(|k| k - 1);
        // Duplicator must land in the region for the remaining rounds
        let target = |d: BisimConfig| match next_left {
            Some(k) => sets.wins_at(k, d),
            None => sets.wins_unbounded(d),
        };
        if wins {
            for (mv, r) in rules.spoiler_moves(c) {
                let reply = rules
                    .replies(c, mv.side, r)
                    .find(|&t| target(Rules::after(c, mv, t)))
                    .expect("winning position has a winning reply");
                outcome.duplicator.insert((c, left, mv), reply);
                queue.push_back((Rules::after(c, mv, reply), next_left));
            }
        } else {
            if !rules.atoms_ok(c) {
                continue;
            }
            // in the unbounded game, play to decrease the rank
            let lose = |d: BisimConfig| match left {
                Some(k) => !sets.wins_at(k - 1, d),
                None => sets.rank(d).is_some_and(|rd| rd < sets.rank(c).unwrap()),
            };
            let (mv, r) = rules
                .spoiler_moves(c)
                .find(|&(mv, r)| {
                    rules
                        .replies(c, mv.side, r)
                        .all(|t| lose(Rules::after(c, mv, t)))
                })
                .expect("losing position has a winning Spoiler move");
            outcome.spoiler.insert((c, left), mv);
            for t in rules.replies(c, mv.side, r) {
                queue.push_back((Rules::after(c, mv, t), next_left));
            }
        }
    }
    outcome
}

/// Solves the ε-game between state `a` of `left` and state `b` of `right`, played
/// on their disjoint union (states tagged `/L` and `/R`).
pub fn bisim_wins(
    left: &Model,
    right: &Model,
    a: &str,
    b: &str,
    eps: Truth,
    depth: Depth,
) -> Result<GameOutcome, GameError> {
    let a = left.require_state(a)?;
    let b = right.require_state(b)?;
    let (arena, inj) = disjoint_union(left, right)?;
    Ok(bisim_game(&arena, inj.left[a], inj.right[b], eps, depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fork, loop_and_chain};

    fn t(n: u64, d: u64) -> Truth {
        Truth::ratio(n, d)
    }

    #[test]
    fn fork_game_examples() {
        let m = fork();
        let g = bisim_wins(&m, &m, "s1", "s4", t(1, 5), Depth::Bounded(2)).unwrap();
        assert_eq!(g.winner(), Player::Duplicator);
        let g = bisim_wins(&m, &m, "s1", "s4", t(19, 100), Depth::Bounded(2)).unwrap();
        assert_eq!(g.winner(), Player::Spoiler);
        let mv = g.opening_move().unwrap();
        assert_eq!(mv.side, Side::Left);
        assert_eq!(g.arena().state_name(mv.target), "s2/L");
        // the same within one model
        let g = bisim_game(&m, 0, 3, t(19, 100), Depth::Bounded(2));
        assert_eq!(g.winner(), Player::Spoiler);
        assert_eq!(
            g.opening_move().unwrap(),
            SpoilerMove {
                side: Side::Left,
                target: 1
            }
        );
        assert_eq!(
            bisim_game(&m, 0, 3, t(1, 5), Depth::Unbounded).winner(),
            Player::Duplicator
        );
    }

    #[test]
    fn depth_zero_is_always_won_by_duplicator() {
        let m = fork();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(
                    bisim_game(&m, a, b, Truth::ZERO, Depth::Bounded(0)).winner(),
                    Player::Duplicator
                );
            }
        }
    }

    #[test]
    fn atom_condition_checked_before_each_round() {
        let m = fork();
        // s2 vs s5: atom gap 1/5, no successors
        assert_eq!(
            bisim_game(&m, 1, 4, t(1, 10), Depth::Bounded(1)).winner(),
            Player::Spoiler
        );
        assert_eq!(
            bisim_game(&m, 1, 4, t(1, 5), Depth::Bounded(1)).winner(),
            Player::Duplicator
        );
        assert!(bisim_game(&m, 1, 4, t(1, 10), Depth::Bounded(1))
            .opening_move()
            .is_none());
    }

    #[test]
    fn loop_versus_chain() {
        let m = loop_and_chain(3);
        for k in 0..=3 {
            assert_eq!(
                bisim_game(&m, 0, 1, Truth::ZERO, Depth::Bounded(k)).winner(),
                Player::Duplicator
            );
        }
        let g = bisim_game(&m, 0, 1, Truth::ZERO, Depth::Bounded(4));
        assert_eq!(g.winner(), Player::Spoiler);
        // Spoiler wins the unbounded game by running the loop
        let g = bisim_game(&m, 0, 1, t(1, 2), Depth::Unbounded);
        assert_eq!(g.winner(), Player::Spoiler);
        assert_eq!(g.opening_move().unwrap().side, Side::Left);
        // every edge has weight 1, so at ε = 1 Spoiler cannot move
        assert_eq!(
            bisim_game(&m, 0, 1, Truth::ONE, Depth::Unbounded).winner(),
            Player::Duplicator
        );
    }

    #[test]
    fn winning_sets_decrease_and_stabilize() {
        let m = loop_and_chain(4);
        let sets = WinningSets::solve(&m, Truth::ZERO, Depth::Unbounded);
        assert!(sets.is_stable());
        let n = m.num_states();
        assert!(sets.max_depth() <= n * n);
        for k in 0..sets.max_depth() {
            assert!(sets
                .level(k + 1)
                .iter()
                .zip(sets.level(k))
                .all(|(a, b)| !*a || *b));
        }
    }

    #[test]
    fn unknown_state_is_an_error() {
        let m = fork();
        assert!(bisim_wins(&m, &m, "s1", "nope", Truth::ZERO, Depth::Bounded(1)).is_err());
    }
}
