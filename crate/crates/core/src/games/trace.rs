use std::fmt;

use super::bisim::{BisimConfig, GameOutcome, Rules, SpoilerMove};
use super::{GameError, Player};
use crate::model::StateId;

/// A scripted move for the losing player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptMove {
    Spoiler(SpoilerMove),
    Reply(StateId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayedRound {
    pub before: BisimConfig,
    pub spoiler: SpoilerMove,
    pub reply: StateId,
    pub after: BisimConfig,
}

/// Why a play stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlayEnd {
    /// All rounds were played; Duplicator wins.
    RoundsExhausted,
    /// The atom condition failed in this configuration; Spoiler wins.
    AtomMismatch(BisimConfig),
    /// Spoiler has no edge above ε; Duplicator wins.
    SpoilerStuck,
    /// Duplicator has no legal answer; Spoiler wins.
    DuplicatorStuck,
    /// The script ran out before the game was decided.
    ScriptExhausted,
}

#[derive(Debug, Clone)]
pub struct Transcript {
    pub winner: Player,
    pub rounds: Vec<PlayedRound>,
    pub end: PlayEnd,
    names: Vec<String>,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |s: StateId| self.names[s].as_str();
        for (i, r) in self.rounds.iter().enumerate() {
            let from = r.before.get(r.spoiler.side);
            let other = r.before.get(r.spoiler.side.other());
            writeln!(
                f,
                "round {}: ({}, {})  Spoiler {} -> {}  Duplicator {} -> {}",
                i + 1,
                n(r.before.left),
                n(r.before.right),
                n(from),
                n(r.spoiler.target),
                n(other),
                n(r.reply)
            )?;
        }
        match &self.end {
            PlayEnd::RoundsExhausted => writeln!(f, "end: rounds exhausted"),
            PlayEnd::AtomMismatch(c) => {
                writeln!(f, "end: atom mismatch at ({}, {})", n(c.left), n(c.right))
            }
            PlayEnd::SpoilerStuck => writeln!(f, "end: Spoiler has no move"),
            PlayEnd::DuplicatorStuck => writeln!(f, "end: Duplicator has no reply"),
            PlayEnd::ScriptExhausted => writeln!(f, "end: script exhausted"),
        }?;
        writeln!(f, "winner: {}", self.winner)
    }
}

/// Plays the winner's strategy in `outcome` against `script`, the loser's moves.
///
/// When Duplicator wins the script lists Spoiler moves; otherwise it lists
/// Duplicator replies. Illegal script moves are rejected.
pub fn game_trace(outcome: &GameOutcome, script: &[ScriptMove]) -> Result<Transcript, GameError> {
    let rules: Rules = outcome.rules();
    let m = outcome.arena();
    let mut c = outcome.initial();
    let mut left = outcome.rounds_left();
    let mut rounds = Vec::new();
    let mut script = script.iter();
    let end = loop {
        // the final configuration of a bounded game is not inspected
        if left == Some(0) {
            break PlayEnd::RoundsExhausted;
        }
        if !rules.atoms_ok(c) {
            break PlayEnd::AtomMismatch(c);
        }
        if rules.spoiler_moves(c).next().is_none() {
            break PlayEnd::SpoilerStuck;
        }
        let (mv, reply) = match outcome.winner() {
            Player::Duplicator => {
                let mv = match script.next() {
                    None => break PlayEnd::ScriptExhausted,
                    Some(ScriptMove::Spoiler(mv)) => *mv,
                    Some(ScriptMove::Reply(_)) => {
                        return Err(GameError::WrongScript("expected a Spoiler move".into()))
                    }
                };
                if mv.target >= m.num_states() || rules.is_legal_spoiler(c, mv).is_none() {
                    return Err(GameError::IllegalMove(format!(
                        "Spoiler cannot move {} -> {} at ε = {}",
                        m.state_name(c.get(mv.side)),
                        m.states().get(mv.target).map_or("?", |s| s.as_str()),
                        outcome.epsilon()
                    )));
                }
                let reply = outcome
                    .duplicator_reply(c, left, mv)
                    .expect("strategy covers reachable positions");
                (mv, reply)
            }
            Player::Spoiler => {
                let mv = outcome
                    .spoiler_move(c, left)
                    .expect("strategy covers reachable positions");
                let r = m.rel(c.get(mv.side), mv.target);
                if rules.replies(c, mv.side, r).next().is_none() {
                    break PlayEnd::DuplicatorStuck;
                }
                let reply = match script.next() {
                    None => break PlayEnd::ScriptExhausted,
                    Some(ScriptMove::Reply(t)) => *t,
                    Some(ScriptMove::Spoiler(_)) => {
                        return Err(GameError::WrongScript("expected a Duplicator reply".into()))
                    }
                };
                if !rules.replies(c, mv.side, r).any(|t| t == reply) {
                    return Err(GameError::IllegalMove(format!(
                        "Duplicator cannot answer {} -> {} with {} -> {} at ε = {}",
                        m.state_name(c.get(mv.side)),
                        m.state_name(mv.target),
                        m.state_name(c.get(mv.side.other())),
                        m.states().get(reply).map_or("?", |s| s.as_str()),
                        outcome.epsilon()
                    )));
                }
                (mv, reply)
            }
        };
        let after = Rules::after(c, mv, reply);
        rounds.push(PlayedRound {
            before: c,
            spoiler: mv,
            reply,
            after,
        });
        c = after;
        left = left.map(|k| k - 1);
        if left.is_none() && rounds.len() > m.num_states() * m.num_states() {
            // Duplicator survives forever; stop once every position could have repeated
            break PlayEnd::RoundsExhausted;
        }
    };
    let winner = match end {
        PlayEnd::AtomMismatch(_) | PlayEnd::DuplicatorStuck => Player::Spoiler,
        PlayEnd::RoundsExhausted | PlayEnd::SpoilerStuck => Player::Duplicator,
        PlayEnd::ScriptExhausted => outcome.winner(),
    };
    Ok(Transcript {
        winner,
        rounds,
        end,
        names: m.states().to_vec(),
    })
}
