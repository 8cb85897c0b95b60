//! ε-bisimulation games and ε-Ehrenfeucht-Fraïssé games on finite models.
//!
//! Both games are solved exactly. Two-model bisimulation games are played on the
//! disjoint union of the two models, so every solver works on a single arena.

mod bisim;
mod ef;
mod trace;

use std::fmt;

use thiserror::Error;

use crate::model::ModelError;

pub use bisim::{bisim_game, bisim_wins, BisimConfig, GameOutcome, SpoilerMove, WinningSets};
pub use ef::{ef_wins, EfConfig, EfLimits, EfOutcome, EfPick};
pub use trace::{game_trace, PlayEnd, PlayedRound, ScriptMove, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Spoiler => "Spoiler",
            Player::Duplicator => "Duplicator",
        })
    }
}

/// Which component of a configuration a move is made in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("configuration vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("game too large: {0}")]
    TooLarge(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("script move of the wrong kind: {0}")]
    WrongScript(String),
}
