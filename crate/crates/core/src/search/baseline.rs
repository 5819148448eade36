use crate::env::SearchEnv;
use crate::error::SearchError;
use crate::explored::{ExploredTree, SlotState};
use crate::model::{NodeId, Side};
use crate::oracle::OracleAnswer;
use crate::search::ops::{dfs_extend, final_binary_search};
use crate::search::{ceil_sqrt, RoundStats, SearchResult};
use crate::walker::Direction;

/// Explores the whole tree, then bisects all of its nodes.
pub fn baseline_full<E: SearchEnv>(env: &mut E) -> Result<SearchResult, SearchError> {
    let mut tree = ExploredTree::new(env.root());
    dfs_extend(&mut tree, env, u32::MAX)?;
    let found = final_binary_search(&tree, env)?;
    Ok(SearchResult {
        found,
        steps: env.steps(),
        oracle_calls: env.oracle_calls(),
        rounds: Vec::new(),
        final_calls: env.oracle_calls(),
    })
}

/// Depth-capped rounds without decimation.
///
/// Round `i` explores the subtree of the current top node down to depth
/// `i·⌈n/⌈√t⌉⌉`, bisects the explored nodes in inorder, and either finds the
/// target or learns which unexplored child lies in the gap that must hold
/// it. The walker then descends to that child, which is the top node of the
/// next round.
pub fn baseline_rounds<E: SearchEnv>(
    env: &mut E,
    n: u32,
    t: u32,
) -> Result<SearchResult, SearchError> {
    let stride = u64::from(n).div_ceil(ceil_sqrt(u64::from(t)).max(1)).max(1);
    let mut top = env.root();
    let mut top_depth = 0u32;
    let mut rounds = Vec::new();

    for round in 1u32.. {
        let depth_limit = (u64::from(round) * stride).min(u64::from(u32::MAX)) as u32;
        let steps_before = env.steps();
        let calls_before = env.oracle_calls();

        let mut tree = ExploredTree::rooted_at(top, top_depth);
        dfs_extend(&mut tree, env, depth_limit)?;
        // Every round explores a subtree no earlier round entered.
        let new_forks = tree.forks_seen();

        let seq = tree.inorder();
        let (mut lo, mut hi) = (0usize, seq.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match env.query(seq[mid])? {
                OracleAnswer::Found => {
                    rounds.push(RoundStats {
                        round,
                        depth_limit,
                        new_forks,
                        oracle_calls: env.oracle_calls() - calls_before,
                        steps: env.steps() - steps_before,
                    });
                    return Ok(SearchResult {
                        found: seq[mid],
                        steps: env.steps(),
                        oracle_calls: env.oracle_calls(),
                        rounds,
                        final_calls: 0,
                    });
                }
                OracleAnswer::TargetSmaller => hi = mid,
                OracleAnswer::TargetLarger => lo = mid + 1,
            }
        }

        let (parent, side) = gap_slot(&tree, &seq, lo).ok_or_else(|| {
            SearchError::Inconsistent(format!(
                "round {round}: no unexplored subtree in the gap at {lo}"
            ))
        })?;
        descend_to(&tree, env, parent)?;
        let kind = tree.kind(parent).expect("parent is explored");
        top = env.step(Direction::down(kind, side))?;
        top_depth = tree.depth(parent).expect("parent is explored") + 1;

        rounds.push(RoundStats {
            round,
            depth_limit,
            new_forks,
            oracle_calls: env.oracle_calls() - calls_before,
            steps: env.steps() - steps_before,
        });
    }
    unreachable!("the round loop only exits by returning")
}

/// The unexplored slot whose subtree sits between `seq[gap - 1]` and
/// `seq[gap]` in inorder. At most one slot can sit in any gap.
fn gap_slot(tree: &ExploredTree, seq: &[NodeId], gap: usize) -> Option<(NodeId, Side)> {
    if gap > 0 && tree.slot(seq[gap - 1], Side::Right) == Some(SlotState::Unexplored) {
        return Some((seq[gap - 1], Side::Right));
    }
    if gap < seq.len() && tree.slot(seq[gap], Side::Left) == Some(SlotState::Unexplored) {
        return Some((seq[gap], Side::Left));
    }
    None
}

/// Walks from the tree's root down to `node` along explored edges.
fn descend_to<E: SearchEnv>(
    tree: &ExploredTree,
    env: &mut E,
    node: NodeId,
) -> Result<(), SearchError> {
    let mut path = Vec::new();
    let mut at = node;
    while let Some((p, side)) = tree.parent(at) {
        path.push((p, side));
        at = p;
    }
    for &(p, side) in path.iter().rev() {
        let kind = tree.kind(p).expect("path nodes are explored");
        env.step(Direction::down(kind, side))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Session;
    use crate::model::TreeBuilder;

    #[test]
    fn full_baseline_on_seven_edge_path() {
        let mut b = TreeBuilder::new();
        b.add_path(NodeId(0), 7, Side::Right, || Side::Left)
            .unwrap();
        let t = b.build(7).unwrap().with_target(NodeId(5)).unwrap();
        let mut s = Session::new(&t);
        let r = baseline_full(&mut s).unwrap();
        assert_eq!(r.found, NodeId(5));
        assert_eq!(r.steps, 14);
        assert!(r.oracle_calls <= 4);
    }

    #[test]
    fn rounds_with_one_fork_take_at_most_two_rounds() {
        let mut b = TreeBuilder::new();
        let mid = b
            .add_path(NodeId(0), 4, Side::Left, || Side::Right)
            .unwrap();
        let deep = b.add_path(mid, 4, Side::Left, || Side::Left).unwrap();
        b.add_path(mid, 4, Side::Right, || Side::Right).unwrap();
        let t = b.build(8).unwrap().with_target(deep).unwrap();
        let mut s = Session::new(&t);
        let r = baseline_rounds(&mut s, 8, 1).unwrap();
        assert_eq!(r.found, deep);
        assert!(r.rounds.len() <= 2);
    }

    #[test]
    fn rounds_descend_into_the_right_gap() {
        // Fork at the root with long arms; the stride forces several rounds.
        let mut b = TreeBuilder::new();
        b.add_path(NodeId(0), 12, Side::Left, || Side::Right)
            .unwrap();
        let end = b
            .add_path(NodeId(0), 12, Side::Right, || Side::Left)
            .unwrap();
        let t = b.build(12).unwrap().with_target(end).unwrap();
        let mut s = Session::new(&t);
        let r = baseline_rounds(&mut s, 12, 4).unwrap();
        assert_eq!(r.found, end);
        assert!(r.rounds.len() >= 2);
    }
}
