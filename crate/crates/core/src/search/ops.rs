use crate::env::SearchEnv;
use crate::error::SearchError;
use crate::explored::{ExploredTree, HalvingMode};
use crate::model::{NodeId, Side};
use crate::oracle::OracleAnswer;
use crate::walker::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DfsStats {
    pub steps: u64,
    pub new_nodes: u64,
    pub new_forks: u64,
}

/// Extends `tree` by a depth-first walk that starts and ends at the tree's
/// root. The walk never enters stubs, descends into unexplored slots of
/// nodes shallower than `depth_limit`, and skips explored subtrees that
/// have nothing left to explore within the limit.
pub fn dfs_extend<E: SearchEnv>(
    tree: &mut ExploredTree,
    env: &mut E,
    depth_limit: u32,
) -> Result<DfsStats, SearchError> {
    let start_steps = env.steps();
    let start_forks = tree.forks_seen();
    let mut new_nodes = 0;

    // Arena indices grow away from the root, so a reverse sweep is a post-order.
    let arena = tree.arena_len();
    let mut pending = vec![false; arena];
    for i in (0..arena).rev() {
        if !tree.is_live_index(i) {
            continue;
        }
        let open_here = tree.node_depth(i) < depth_limit
            && Side::BOTH.iter().any(|&s| tree.slot_is_unexplored(i, s));
        let open_below = Side::BOTH
            .iter()
            .filter_map(|&s| tree.raw_slot(i, s))
            .any(|c| pending[c]);
        pending[i] = open_here || open_below;
    }

    let root = tree.root_index();
    if !pending[root] {
        return Ok(DfsStats::default());
    }
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(top) = stack.last_mut() {
        let (i, next) = *top;
        if next == 2 {
            stack.pop();
            if !stack.is_empty() {
                env.step(Direction::Parent)?;
            }
            continue;
        }
        top.1 += 1;
        let side = Side::BOTH[next];
        let down = Direction::down(tree.node_kind(i), side);
        if let Some(c) = tree.raw_slot(i, side) {
            if c < arena && pending[c] {
                env.step(down)?;
                stack.push((c, 0));
            }
        } else if tree.slot_is_unexplored(i, side) && tree.node_depth(i) < depth_limit {
            let info = env.step(down)?;
            let c = tree.attach_at(i, side, info)?;
            new_nodes += 1;
            stack.push((c, 0));
        }
    }

    Ok(DfsStats {
        steps: env.steps() - start_steps,
        new_nodes,
        new_forks: tree.forks_seen() - start_forks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalveOutcome {
    Found(NodeId),
    Trimmed {
        queried: NodeId,
        answer: OracleAnswer,
    },
}

/// Queries the median (over candidate nodes or candidate leaves) and trims
/// the tree with the answer.
pub fn halve<E: SearchEnv>(
    tree: &mut ExploredTree,
    env: &mut E,
    mode: HalvingMode,
) -> Result<HalveOutcome, SearchError> {
    let u = tree.median(mode)?;
    let answer = env.query(u)?;
    if answer == OracleAnswer::Found {
        return Ok(HalveOutcome::Found(u));
    }
    tree.trim(u, answer)?;
    env.after_trim(tree);
    Ok(HalveOutcome::Trimmed { queried: u, answer })
}

/// Bisects the inorder sequence of candidate nodes. Uses at most
/// `⌊log2 k⌋ + 1` calls for `k` candidates.
pub fn final_binary_search<E: SearchEnv>(
    tree: &ExploredTree,
    env: &mut E,
) -> Result<NodeId, SearchError> {
    bisect(&tree.candidates_inorder(), env)
}

pub(crate) fn bisect<E: SearchEnv>(
    candidates: &[NodeId],
    env: &mut E,
) -> Result<NodeId, SearchError> {
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match env.query(candidates[mid])? {
            OracleAnswer::Found => return Ok(candidates[mid]),
            OracleAnswer::TargetSmaller => hi = mid,
            OracleAnswer::TargetLarger => lo = mid + 1,
        }
    }
    Err(SearchError::Inconsistent(format!(
        "binary search over {} candidates ended without finding the target",
        candidates.len()
    )))
}
