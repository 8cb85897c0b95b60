use std::collections::{BTreeMap, HashMap};

use super::{GameError, Player, Side};
use crate::model::{Model, ModelError, StateId};
use crate::truth::Truth;

/// Size limits for the exhaustive EF solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfLimits {
    pub max_rounds: usize,
    /// Bound on `|A| + |B|`.
    pub max_states: usize,
}

impl Default for EfLimits {
    fn default() -> Self {
        EfLimits {
            max_rounds: 4,
            max_states: 12,
        }
    }
}

/// Tuples `ā` in the left model and `b̄` in the right model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EfConfig {
    pub left: Vec<StateId>,
    pub right: Vec<StateId>,
}

/// Spoiler extends the tuple on one side with a state of that model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EfPick {
    pub side: Side,
    pub state: StateId,
}

#[derive(Debug, Clone)]
pub struct EfOutcome {
    pub winner: Player,
    pub rounds: usize,
    pub initial: EfConfig,
    /// Duplicator's answer to each Spoiler pick along reachable configurations.
    pub duplicator: BTreeMap<(EfConfig, EfPick), StateId>,
    /// Spoiler's winning pick; absent where the partial-isomorphism test already fails.
    pub spoiler: BTreeMap<EfConfig, EfPick>,
}

struct Solver<'m> {
    left: &'m Model,
    right: &'m Model,
    eps: Truth,
    // right atom index for each left atom
    atom_map: Vec<usize>,
    memo: HashMap<EfConfig, bool>,
}

impl Solver<'_> {
    /// Equalities agree, and atom and relation values differ by at most ε.
    fn partial_iso(&self, c: &EfConfig) -> bool {
        let (a, b) = (&c.left, &c.right);
        for i in 0..a.len() {
            for (p, &q) in self.atom_map.iter().enumerate() {
                if self.left.val(a[i], p).abs_diff(self.right.val(b[i], q)) > self.eps {
                    return false;
                }
            }
            for j in 0..a.len() {
                if (a[i] == a[j]) != (b[i] == b[j]) {
                    return false;
                }
                if self
                    .left
                    .rel(a[i], a[j])
                    .abs_diff(self.right.rel(b[i], b[j]))
                    > self.eps
                {
                    return false;
                }
            }
        }
        true
    }

    fn extend(c: &EfConfig, pick: EfPick, reply: StateId) -> EfConfig {
        let (x, y) = match pick.side {
            Side::Left => (pick.state, reply),
            Side::Right => (reply, pick.state),
        };
        let mut d = c.clone();
        d.left.push(x);
        d.right.push(y);
        d
    }

    fn size(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left.num_states(),
            Side::Right => self.right.num_states(),
        }
    }

    fn picks(&self) -> Vec<EfPick> {
        [Side::Left, Side::Right]
            .into_iter()
            .flat_map(|side| (0..self.size(side)).map(move |state| EfPick { side, state }))
            .collect()
    }

    fn wins(&mut self, c: &EfConfig, rounds: usize) -> bool {
        if let Some(&w) = self.memo.get(c) {
            return w;
        }
        let w = self.partial_iso(c)
            && (rounds == 0
                || self
                    .picks()
                    .into_iter()
                    .all(|pick| self.reply(c, pick, rounds).is_some()));
        self.memo.insert(c.clone(), w);
        w
    }

    fn reply(&mut self, c: &EfConfig, pick: EfPick, rounds: usize) -> Option<StateId> {
        (0..self.size(pick.side.other()))
            .find(|&t| self.wins(&Self::extend(c, pick, t), rounds - 1))
    }
}

/// Solves the `rounds`-round ε-EF game from `(ā, b̄)`.
///
/// The game is played on the two models directly, since quantifiers range over
/// one structure at a time. Fails when the models exceed `limits` or their atom
/// sets differ.
pub fn ef_wins(
    left: &Model,
    right: &Model,
    a: &[StateId],
    b: &[StateId],
    eps: Truth,
    rounds: usize,
    limits: EfLimits,
) -> Result<EfOutcome, GameError> {
    if a.len() != b.len() {
        return Err(GameError::LengthMismatch(a.len(), b.len()));
    }
    if rounds > limits.max_rounds {
        return Err(GameError::TooLarge(format!(
            "{rounds} rounds exceeds the limit of {}",
            limits.max_rounds
        )));
    }
    let total = left.num_states() + right.num_states();
    if total > limits.max_states {
        return Err(GameError::TooLarge(format!(
            "{total} states exceeds the limit of {}",
            limits.max_states
        )));
    }
    for (&s, m) in a
        .iter()
        .map(|s| (s, left))
        .chain(b.iter().map(|s| (s, right)))
    {
        if s >= m.num_states() {
            return Err(ModelError::UnknownState(format!("#{s}")).into());
        }
    }
    let mismatch = || ModelError::AtomMismatch {
        left: left.atoms().to_vec(),
        right: right.atoms().to_vec(),
    };
    if left.num_atoms() != right.num_atoms() {
        return Err(mismatch().into());
    }
    let atom_map = left
        .atoms()
        .iter()
        .map(|p| right.atom_id(p).ok_or_else(mismatch))
        .collect::<Result<Vec<_>, _>>()?;

    let mut solver = Solver {
        left,
        right,
        eps,
        atom_map,
        memo: HashMap::new(),
    };
    let initial = EfConfig {
        left: a.to_vec(),
        right: b.to_vec(),
    };
    let wins = solver.wins(&initial, rounds);
    let mut outcome = EfOutcome {
        winner: if wins {
            Player::Duplicator
        } else {
            Player::Spoiler
        },
        rounds,
        initial: initial.clone(),
        duplicator: BTreeMap::new(),
        spoiler: BTreeMap::new(),
    };
    let mut stack = vec![(initial, rounds)];
    while let Some((c, k)) = stack.pop() {
        if k == 0 || outcome.spoiler.contains_key(&c) || !solver.partial_iso(&c) {
            continue;
        }
        if wins {
            for pick in solver.picks() {
                if outcome.duplicator.contains_key(&(c.clone(), pick)) {
                    continue;
                }
                let t = solver
                    .reply(&c, pick, k)
                    .expect("winning configuration has a reply");
                outcome.duplicator.insert((c.clone(), pick), t);
                stack.push((Solver::extend(&c, pick, t), k - 1));
            }
        } else {
            let pick = solver
                .picks()
                .into_iter()
                .find(|&pick| solver.reply(&c, pick, k).is_none())
                .expect("losing configuration has a winning pick");
            outcome.spoiler.insert(c.clone(), pick);
            for t in 0..solver.size(pick.side.other()) {
                stack.push((Solver::extend(&c, pick, t), k - 1));
            }
        }
    }
    Ok(outcome)
}
