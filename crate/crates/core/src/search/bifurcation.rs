use crate::env::SearchEnv;
use crate::error::SearchError;
use crate::explored::{ExploredTree, HalvingMode};
use crate::search::ops::{dfs_extend, final_binary_search, halve, HalveOutcome};
use crate::search::{ceil_sqrt, RoundStats, SearchResult};

/// Halving trigger constant: a tree is "too large" above `α·n` nodes.
pub const DEFAULT_ALPHA: u64 = 4;

/// Round parameters derived from `(n, t, ψ)`.
///
/// `leaf_budget = ⌈t/ψ⌉`, `depth_step = ⌈2n/ψ⌉` and
/// `node_budget = leaf_budget · depth_step`, each at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    pub n: u32,
    pub t: u32,
    pub psi: u64,
    pub leaf_budget: u64,
    pub depth_step: u64,
    pub node_budget: u64,
    pub alpha: u64,
}

impl SearchParams {
    pub fn new(n: u32, t: u32, psi: u64) -> Result<Self, SearchError> {
        if psi == 0 {
            return Err(SearchError::Params("psi must be positive".into()));
        }
        if psi > u64::from(t).max(1) {
            return Err(SearchError::Params(format!(
                "psi = {psi} exceeds max(t, 1) = {}",
                t.max(1)
            )));
        }
        let leaf_budget = u64::from(t).div_ceil(psi).max(1);
        let depth_step = (2 * u64::from(n)).div_ceil(psi).max(1);
        Ok(SearchParams {
            n,
            t,
            psi,
            leaf_budget,
            depth_step,
            node_budget: leaf_budget * depth_step,
            alpha: DEFAULT_ALPHA,
        })
    }

    /// `ψ = ⌈√t⌉`, clamped to 1 for forkless trees.
    pub fn default_psi(t: u32) -> u64 {
        ceil_sqrt(u64::from(t)).max(1)
    }

    pub fn with_default_psi(n: u32, t: u32) -> Self {
        Self::new(n, t, Self::default_psi(t)).expect("default psi is always valid")
    }

    /// Depth limit of round `i` (1-based).
    pub fn depth_limit(&self, round: u32) -> u32 {
        (u64::from(round) * self.depth_step).min(u64::from(u32::MAX)) as u32
    }
}

/// Finds the target by rounds of depth-capped exploration and halving,
/// followed by a binary search over what survives.
///
/// Round `i` extends the explored tree down to depth `i·depth_step`, then
/// halves it until it holds at most `node_budget` candidate nodes and at
/// most `leaf_budget` candidate leaves. Rounds stop once the depth limit
/// reaches `n`.
pub fn bifurcation_search<E: SearchEnv>(
    env: &mut E,
    params: &SearchParams,
) -> Result<SearchResult, SearchError> {
    let mut tree = ExploredTree::new(env.root());
    let mut rounds = Vec::new();
    let mut forks_before = 0;

    let finish = |env: &E, found, rounds, final_calls| SearchResult {
        found,
        steps: env.steps(),
        oracle_calls: env.oracle_calls(),
        rounds,
        final_calls,
    };

    for round in 1u32.. {
        let depth_limit = params.depth_limit(round);
        let steps_before = env.steps();
        let calls_before = env.oracle_calls();

        dfs_extend(&mut tree, env, depth_limit)?;
        let new_forks = tree.forks_seen() - forks_before;
        forks_before = tree.forks_seen();

        let mut found = None;
        loop {
            let mode = if tree.node_count() as u64 > params.node_budget {
                HalvingMode::Nodes
            } else if tree.leaf_count() as u64 > params.leaf_budget {
                HalvingMode::Leaves
            } else {
                break;
            };
            if let HalveOutcome::Found(id) = halve(&mut tree, env, mode)? {
                found = Some(id);
                break;
            }
        }

        rounds.push(RoundStats {
            round,
            depth_limit,
            new_forks,
            oracle_calls: env.oracle_calls() - calls_before,
            steps: env.steps() - steps_before,
        });
        if let Some(id) = found {
            return Ok(finish(env, id, rounds, 0));
        }
        if depth_limit >= params.n {
            break;
        }
    }

    let calls_before = env.oracle_calls();
    let found = final_binary_search(&tree, env)?;
    let final_calls = env.oracle_calls() - calls_before;
    Ok(finish(env, found, rounds, final_calls))
}
