//! Search algorithms over an implicit tree.
//!
//! [`bifurcation_search`] interleaves depth-capped exploration with halving;
//! [`baseline_full`] explores everything and then bisects; [`baseline_rounds`]
//! explores in depth-capped rounds and bisects the explored frontier each
//! round.

mod baseline;
mod bifurcation;
mod ops;

pub use baseline::{baseline_full, baseline_rounds};
pub use bifurcation::{bifurcation_search, SearchParams, DEFAULT_ALPHA};
pub use ops::{dfs_extend, final_binary_search, halve, DfsStats, HalveOutcome};

use serde::Serialize;

use crate::model::NodeId;

/// Instrumentation for one round of [`bifurcation_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub round: u32,
    /// Depth limit of this round's exploration.
    pub depth_limit: u32,
    /// Forks entered for the first time this round.
    pub new_forks: u64,
    pub oracle_calls: u64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub found: NodeId,
    pub steps: u64,
    pub oracle_calls: u64,
    /// Per-round statistics; empty for [`baseline_full`].
    pub rounds: Vec<RoundStats>,
    /// Oracle calls spent in the closing binary search.
    pub final_calls: u64,
}

/// `⌈√x⌉` for non-negative integers.
pub fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::ceil_sqrt;

    #[test]
    fn ceil_sqrt_small_values() {
        let expected = [0, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4];
        for (x, &want) in expected.iter().enumerate() {
            assert_eq!(ceil_sqrt(x as u64), want, "x = {x}");
        }
        assert_eq!(ceil_sqrt(64), 8);
        assert_eq!(ceil_sqrt(65), 9);
        assert_eq!(ceil_sqrt(255), 16);
    }
}
