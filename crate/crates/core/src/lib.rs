//! Exploring implicit trees with a comparison oracle.
//!
//! An *(n,t)-tree* is a rooted tree with exactly `t` forks (nodes with two
//! children), every other internal node unary, and every leaf within
//! distance `n` of the root. One node is the target. A searcher starts at the
//! root, moves one edge at a time, and may ask an oracle whether the target
//! precedes, follows, or equals a node in inorder.
//!
//! This crate provides:
//!
//! * the tree model, a locality-enforcing [`Walker`](walker::Walker) and an
//!   instrumented [`oracle`];
//! * [`search::bifurcation_search`], which finds the target in `O(n·t/ψ)`
//!   steps with `O(ψ + log n)` oracle calls, plus two baselines;
//! * instance [`generators`];
//! * the lower-bound constructions in [`lowerbound`];
//! * the experiment [`harness`] behind the `bifurcate` command-line tool.
//!
//! ```
//! use bifurcation::env::Session;
//! use bifurcation::generators::{gen_random, place_target, TargetStrategy};
//! use bifurcation::search::{bifurcation_search, SearchParams};
//!
//! let tree = gen_random(256, 16, 7).unwrap();
//! let target = place_target(&tree, TargetStrategy::RandomNode, 7).unwrap();
//! let tree = tree.with_target(target).unwrap();
//!
//! let mut session = Session::new(&tree);
//! let params = SearchParams::with_default_psi(tree.n(), tree.t());
//! let result = bifurcation_search(&mut session, &params).unwrap();
//! assert_eq!(result.found, tree.target());
//! ```

pub mod env;
pub mod error;
pub mod explored;
pub mod generators;
pub mod harness;
pub mod lowerbound;
pub mod model;
pub mod oracle;
pub mod search;
pub mod walker;

pub use error::{GameError, GenError, ModelError, OracleError, SearchError, WalkError};
pub use model::{NodeId, NodeInfo, NodeKind, Side, TreeInstance};
pub use oracle::OracleAnswer;

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/trees-and-oracles.md")]
    mod trees_and_oracles {}
    #[doc = include_str!("../../../book/src/trimming-and-halving.md")]
    mod trimming_and_halving {}
    #[doc = include_str!("../../../book/src/bifurcation.md")]
    mod bifurcation {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/leaf-game.md")]
    mod leaf_game {}
    #[doc = include_str!("../../../book/src/fork-adversary.md")]
    mod fork_adversary {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
