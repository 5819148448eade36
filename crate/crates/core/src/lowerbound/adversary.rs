//! An adaptive oracle on the complete-path family, under a cost model where
//! every oracle call costs `n` steps.
//!
//! The adversary starts from `gen_complete_path(h, ∇)` with `h = ⌈√t⌉` and
//! `∇ = ⌈n/h⌉`, which has far more than `t` forks. Every answer keeps the
//! larger part of the candidate interval alive. As soon as the player has
//! entered `t` forks, every fork it has not entered is demoted to a unary
//! node (keeping the child with more surviving candidates), so the tree
//! actually searched is an `(n,t)`-tree. The target is committed when only
//! one candidate remains and the player queries it.

use serde::Serialize;

use crate::env::SearchEnv;
use crate::error::{OracleError, SearchError, WalkError};
use crate::generators::gen_complete_path;
use crate::harness::Algo;
use crate::model::{NodeId, NodeInfo, NodeKind, Side, TreeBuilder, TreeInstance};
use crate::oracle::{InstrumentedOracle, OracleAnswer, OracleMode};
use crate::search::{baseline_full, baseline_rounds, bifurcation_search, ceil_sqrt, SearchParams};
use crate::walker::Direction;

/// Search environment whose oracle answers adaptively.
#[derive(Debug, Clone)]
pub struct AdaptiveForkAdversary {
    base: TreeInstance,
    fork_budget: u32,
    current: NodeId,
    steps: u64,
    calls: u64,
    revealed: Vec<bool>,
    revealed_forks: u32,
    /// Kept side of every demoted fork.
    demoted: Vec<Option<Side>>,
    /// Liveness indexed by inorder rank.
    alive: Vec<bool>,
    /// `prefix[r]` = live nodes with rank `< r`.
    prefix: Vec<u32>,
    /// Candidate ranks, inclusive.
    lo: u32,
    hi: u32,
    frozen: bool,
    answers: Vec<(NodeId, OracleAnswer)>,
    committed: Option<NodeId>,
}

impl AdaptiveForkAdversary {
    /// Adversary for a player promised an `(n, t)`-tree.
    pub fn new(n: u32, t: u32) -> Result<Self, SearchError> {
        if t == 0 {
            return Err(SearchError::Params(
                "the fork adversary needs t >= 1".into(),
            ));
        }
        let h = (ceil_sqrt(u64::from(t)) as u32).max(1);
        let nabla = n.div_ceil(h).max(1);
        let base = gen_complete_path(h, nabla).map_err(|e| SearchError::Params(e.to_string()))?;
        let len = base.len();
        let mut revealed = vec![false; len];
        revealed[base.root().index()] = true;
        let mut adv = AdaptiveForkAdversary {
            fork_budget: t,
            current: base.root(),
            steps: 0,
            calls: 0,
            revealed,
            revealed_forks: 0,
            demoted: vec![None; len],
            alive: vec![true; len],
            prefix: Vec::new(),
            lo: 0,
            hi: len as u32 - 1,
            frozen: false,
            answers: Vec::new(),
            committed: None,
            base,
        };
        adv.rebuild_prefix();
        adv.note_revealed(adv.base.root());
        Ok(adv)
    }

    pub fn base(&self) -> &TreeInstance {
        &self.base
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn revealed_forks(&self) -> u32 {
        self.revealed_forks
    }

    pub fn answers(&self) -> &[(NodeId, OracleAnswer)] {
        &self.answers
    }

    pub fn committed_target(&self) -> Option<NodeId> {
        self.committed
    }

    fn rebuild_prefix(&mut self) {
        self.prefix = std::iter::once(0)
            .chain(self.alive.iter().scan(0u32, |acc, &a| {
                *acc += u32::from(a);
                Some(*acc)
            }))
            .collect();
    }

    /// Live nodes with rank in `[a, b]` (empty when `a > b`).
    fn live_between(&self, a: i64, b: i64) -> u32 {
        let a = a.max(0);
        let b = b.min(self.alive.len() as i64 - 1);
        if a > b {
            return 0;
        }
        self.prefix[b as usize + 1] - self.prefix[a as usize]
    }

    fn kind(&self, id: NodeId) -> NodeKind {
        match self.demoted[id.index()] {
            Some(side) => NodeKind::Unary { child_side: side },
            None => self.base.kind(id),
        }
    }

    fn note_revealed(&mut self, id: NodeId) {
        if self.kind(id).is_fork() {
            self.revealed_forks += 1;
            if self.revealed_forks >= self.fork_budget && !self.frozen {
                self.freeze();
            }
        }
    }

    /// Demotes every fork the player has not entered.
    fn freeze(&mut self) {
        self.frozen = true;
        let (lo, hi) = (i64::from(self.lo), i64::from(self.hi));
        for id in self.base.ids() {
            let rank = self.base.inorder_rank(id) as usize;
            if !self.alive[rank] || self.revealed[id.index()] || !self.base.kind(id).is_fork() {
                continue;
            }
            let (a, b) = self.base.subtree_span(id);
            let r = i64::from(rank as u32);
            let left = self.live_between(i64::from(a).max(lo), (r - 1).min(hi));
            let right = self.live_between((r + 1).max(lo), i64::from(b).min(hi));
            let keep = if left > right {
                Side::Left
            } else {
                Side::Right
            };
            let drop = self
                .base
                .record(id)
                .child(keep.opposite())
                .expect("forks have both children");
            let (da, db) = self.base.subtree_span(drop);
            self.alive[da as usize..=db as usize]
                .iter_mut()
                .for_each(|a| *a = false);
            self.demoted[id.index()] = Some(keep);
        }
        self.rebuild_prefix();
    }

    fn child(&self, id: NodeId, side: Side) -> Option<NodeId> {
        self.base.record(id).child(side)
    }

    /// The tree actually searched, with the committed target, plus the map
    /// from base ids to ids in that tree.
    pub fn committed_instance(&self) -> Result<(TreeInstance, Vec<Option<NodeId>>), SearchError> {
        let mut map: Vec<Option<NodeId>> = vec![None; self.base.len()];
        let mut b = TreeBuilder::with_capacity(self.prefix[self.alive.len()] as usize);
        map[self.base.root().index()] = Some(b.root());
        for id in self.base.ids() {
            let Some(new_id) = map[id.index()] else {
                continue;
            };
            for side in Side::BOTH {
                if !self.kind(id).has_child(side) {
                    continue;
                }
                let child = self.child(id, side).expect("kind matches structure");
                let new_child = b
                    .add_child(new_id, side)
                    .map_err(|e| SearchError::Inconsistent(e.to_string()))?;
                map[child.index()] = Some(new_child);
            }
        }
        let target = self
            .committed
            .ok_or_else(|| SearchError::Inconsistent("no target committed yet".into()))?;
        let new_target = map[target.index()]
            .ok_or_else(|| SearchError::Inconsistent("target was pruned".into()))?;
        let tree = b
            .build(self.base.n())
            .and_then(|t| t.with_target(new_target))
            .map_err(|e| SearchError::Inconsistent(e.to_string()))?;
        Ok((tree, map))
    }

    /// Replays every answer given against a ground-truth oracle on the
    /// committed tree. Returns the number of mismatches.
    pub fn replay_mismatches(&self) -> Result<usize, SearchError> {
        let (tree, map) = self.committed_instance()?;
        let mut oracle = InstrumentedOracle::new(&tree, OracleMode::AnyNode);
        let mut mismatches = 0;
        for &(q, answer) in &self.answers {
            let mapped = map[q.index()]
                .ok_or_else(|| SearchError::Inconsistent(format!("queried node {q} was pruned")))?;
            if oracle.query(mapped)? != answer {
                mismatches += 1;
            }
        }
        Ok(mismatches)
    }
}

impl SearchEnv for AdaptiveForkAdversary {
    fn root(&self) -> NodeInfo {
        let root = self.base.root();
        NodeInfo {
            id: root,
            kind: self.kind(root),
        }
    }

    fn step(&mut self, direction: Direction) -> Result<NodeInfo, SearchError> {
        let at = self.current;
        let next = match (direction, self.kind(at)) {
            (Direction::Parent, _) => self.base.record(at).parent,
            (Direction::LeftChild, NodeKind::Fork) => self.child(at, Side::Left),
            (Direction::RightChild, NodeKind::Fork) => self.child(at, Side::Right),
            (Direction::OnlyChild, NodeKind::Unary { child_side }) => self.child(at, child_side),
            _ => None,
        };
        let next = next.ok_or(WalkError::NoSuchNeighbor { at, direction })?;
        self.current = next;
        self.steps += 1;
        if !self.revealed[next.index()] {
            self.revealed[next.index()] = true;
            self.note_revealed(next);
        }
        Ok(NodeInfo {
            id: next,
            kind: self.kind(next),
        })
    }

    fn query(&mut self, q: NodeId) -> Result<OracleAnswer, SearchError> {
        if !self.base.contains(q) {
            return Err(OracleError::UnknownNode(q).into());
        }
        if !self.revealed[q.index()] {
            return Err(OracleError::NotRevealed(q).into());
        }
        self.calls += 1;
        let r = self.base.inorder_rank(q);
        let answer = if r < self.lo {
            OracleAnswer::TargetLarger
        } else if r > self.hi {
            OracleAnswer::TargetSmaller
        } else {
            let below = self.live_between(i64::from(self.lo), i64::from(r) - 1);
            let above = self.live_between(i64::from(r) + 1, i64::from(self.hi));
            if below == 0 && above == 0 {
                self.committed = Some(q);
                OracleAnswer::Found
            } else if below > above {
                self.hi = r - 1;
                OracleAnswer::TargetSmaller
            } else {
                self.lo = r + 1;
                OracleAnswer::TargetLarger
            }
        };
        self.answers.push((q, answer));
        Ok(answer)
    }

    fn steps(&self) -> u64 {
        self.steps
    }

    fn oracle_calls(&self) -> u64 {
        self.calls
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdversaryReport {
    pub player: Algo,
    pub n: u32,
    pub t: u32,
    pub h: u32,
    pub nabla: u32,
    pub steps: u64,
    pub oracle_calls: u64,
    /// `steps + n·oracle_calls`.
    pub cost: u64,
    pub froze: bool,
    pub revealed_forks: u32,
    pub replay_mismatches: usize,
}

/// Runs `player` against the adaptive adversary.
pub fn adaptive_fork_adversary(
    n: u32,
    t: u32,
    player: Algo,
) -> Result<AdversaryReport, SearchError> {
    let mut adv = AdaptiveForkAdversary::new(n, t)?;
    let tree_n = adv.base().n();
    let result = match player {
        Algo::Bifurcation => {
            let params = SearchParams::with_default_psi(tree_n, t);
            bifurcation_search(&mut adv, &params)?
        }
        Algo::Rounds => baseline_rounds(&mut adv, tree_n, t)?,
        Algo::Full => baseline_full(&mut adv)?,
    };
    if adv.committed_target() != Some(result.found) {
        return Err(SearchError::Inconsistent(format!(
            "player reported {} but the adversary committed {:?}",
            result.found,
            adv.committed_target()
        )));
    }
    let h = (ceil_sqrt(u64::from(t)) as u32).max(1);
    Ok(AdversaryReport {
        player,
        n,
        t,
        h,
        nabla: tree_n / h,
        steps: result.steps,
        oracle_calls: result.oracle_calls,
        cost: result.steps + u64::from(n) * result.oracle_calls,
        froze: adv.is_frozen(),
        revealed_forks: adv.revealed_forks(),
        replay_mismatches: adv.replay_mismatches()?,
    })
}
