//! Lower-bound constructions: the leaf-query pricing game and the adaptive
//! fork adversary.

pub mod adversary;
pub mod game;

pub use adversary::{adaptive_fork_adversary, AdaptiveForkAdversary, AdversaryReport};
pub use game::{
    lca_rank, minimax_price, minimax_price_with, play_game, play_with, query_price, GameState,
    GameStep, GameStrategy, QueryRule, Transcript,
};
