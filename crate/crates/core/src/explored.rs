//! The explored part of the tree, with stubs.
//!
//! Every explored node keeps one slot per side. A slot is empty when the
//! node has no child there, unexplored when the child exists but has not
//! been entered, explored once the child is in the tree, or a stub once an
//! oracle answer proved the target cannot be below it. Stubbing an explored
//! slot drops the whole subtree hanging there.
//!
//! Besides stubs the tree tracks *excluded* nodes: nodes that an answer has
//! ruled out as the target but which stay in the tree because an unexcluded
//! part of it hangs below them. Candidates are the live, unexcluded nodes.
//! An excluded node with nothing open below it is pruned from its parent.

use std::collections::HashMap;

use crate::error::SearchError;
use crate::model::{NodeId, NodeInfo, NodeKind, Side};
use crate::oracle::OracleAnswer;

/// Public view of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotState {
    Absent,
    Unexplored,
    Explored(NodeId),
    Stub,
    Pruned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Absent,
    Unexplored,
    Child(usize),
    Stub,
    Pruned,
}

#[derive(Debug, Clone)]
struct Node {
    id: NodeId,
    kind: NodeKind,
    depth: u32,
    parent: Option<(usize, Side)>,
    slots: [Slot; 2],
    excluded: bool,
    removed: bool,
}

impl Node {
    fn new(info: NodeInfo, depth: u32, parent: Option<(usize, Side)>) -> Self {
        let slot = |side| {
            if info.kind.has_child(side) {
                Slot::Unexplored
            } else {
                Slot::Absent
            }
        };
        Node {
            id: info.id,
            kind: info.kind,
            depth,
            parent,
            slots: [slot(Side::Left), slot(Side::Right)],
            excluded: false,
            removed: false,
        }
    }

    fn has_explored_child(&self) -> bool {
        self.slots.iter().any(|s| matches!(s, Slot::Child(_)))
    }

    fn is_closed(&self) -> bool {
        self.slots
            .iter()
            .all(|s| matches!(s, Slot::Absent | Slot::Stub | Slot::Pruned))
    }
}

/// Which population halving and median selection work over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalvingMode {
    /// All candidate nodes.
    #[default]
    Nodes,
    /// Candidate leaves only.
    Leaves,
}

#[derive(Debug, Clone)]
pub struct ExploredTree {
    nodes: Vec<Node>,
    index: HashMap<NodeId, usize>,
    live: usize,
    candidates: usize,
    forks_seen: u64,
}

impl ExploredTree {
    /// A tree holding only the root.
    pub fn new(root: NodeInfo) -> Self {
        Self::rooted_at(root, 0)
    }

    /// A tree rooted at a node sitting at `depth` in the underlying instance.
    pub fn rooted_at(root: NodeInfo, depth: u32) -> Self {
        let mut index = HashMap::new();
        index.insert(root.id, 0);
        ExploredTree {
            nodes: vec![Node::new(root, depth, None)],
            index,
            live: 1,
            candidates: 1,
            forks_seen: u64::from(root.kind.is_fork()),
        }
    }

    pub fn root(&self) -> NodeId {
        self.nodes[0].id
    }

    pub(crate) fn root_index(&self) -> usize {
        0
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    fn idx(&self, id: NodeId) -> Result<usize, SearchError> {
        self.index.get(&id).copied().ok_or_else(|| {
            SearchError::Inconsistent(format!("node {id} is not in the explored tree"))
        })
    }

    pub fn kind(&self, id: NodeId) -> Option<NodeKind> {
        self.index.get(&id).map(|&i| self.nodes[i].kind)
    }

    pub fn depth(&self, id: NodeId) -> Option<u32> {
        self.index.get(&id).map(|&i| self.nodes[i].depth)
    }

    pub fn parent(&self, id: NodeId) -> Option<(NodeId, Side)> {
        let &i = self.index.get(&id)?;
        self.nodes[i].parent.map(|(p, s)| (self.nodes[p].id, s))
    }

    pub fn slot(&self, id: NodeId, side: Side) -> Option<SlotState> {
        let &i = self.index.get(&id)?;
        Some(self.slot_state(i, side))
    }

    fn slot_state(&self, i: usize, side: Side) -> SlotState {
        match self.nodes[i].slots[side.index()] {
            Slot::Absent => SlotState::Absent,
            Slot::Unexplored => SlotState::Unexplored,
            Slot::Child(c) => SlotState::Explored(self.nodes[c].id),
            Slot::Stub => SlotState::Stub,
            Slot::Pruned => SlotState::Pruned,
        }
    }

    pub fn is_excluded(&self, id: NodeId) -> bool {
        self.index.get(&id).is_some_and(|&i| self.nodes[i].excluded)
    }

    /// Live (non-stubbed) nodes, excluded ones included.
    pub fn live_count(&self) -> usize {
        self.live
    }

    /// Live nodes that may still be the target.
    pub fn node_count(&self) -> usize {
        self.candidates
    }

    /// Candidate nodes without an explored child.
    pub fn leaf_count(&self) -> usize {
        self.live_indices()
            .filter(|&i| self.is_candidate_leaf(i))
            .count()
    }

    /// Number of forks ever entered while building this tree.
    pub fn forks_seen(&self) -> u64 {
        self.forks_seen
    }

    fn is_candidate_leaf(&self, i: usize) -> bool {
        let n = &self.nodes[i];
        !n.excluded && !n.has_explored_child()
    }

    fn live_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| !self.nodes[i].removed)
    }

    /// Adds the node just entered below `parent` on `side`.
    pub fn attach(
        &mut self,
        parent: NodeId,
        side: Side,
        info: NodeInfo,
    ) -> Result<(), SearchError> {
        let p = self.idx(parent)?;
        self.attach_at(p, side, info).map(|_| ())
    }

    pub(crate) fn attach_at(
        &mut self,
        p: usize,
        side: Side,
        info: NodeInfo,
    ) -> Result<usize, SearchError> {
        if self.nodes[p].slots[side.index()] != Slot::Unexplored {
            return Err(SearchError::Inconsistent(format!(
                "cannot attach {} below {} on the {side:?} side",
                info.id, self.nodes[p].id
            )));
        }
        let c = self.nodes.len();
        let depth = self.nodes[p].depth + 1;
        self.nodes.push(Node::new(info, depth, Some((p, side))));
        self.nodes[p].slots[side.index()] = Slot::Child(c);
        self.index.insert(info.id, c);
        self.live += 1;
        self.candidates += 1;
        if info.kind.is_fork() {
            self.forks_seen += 1;
        }
        Ok(c)
    }

    pub(crate) fn arena_len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn is_live_index(&self, i: usize) -> bool {
        !self.nodes[i].removed
    }

    pub(crate) fn node_depth(&self, i: usize) -> u32 {
        self.nodes[i].depth
    }

    pub(crate) fn node_kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    pub(crate) fn raw_slot(&self, i: usize, side: Side) -> Option<usize> {
        match self.nodes[i].slots[side.index()] {
            Slot::Child(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn slot_is_unexplored(&self, i: usize, side: Side) -> bool {
        self.nodes[i].slots[side.index()] == Slot::Unexplored
    }

    fn inorder_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.live);
        let mut stack: Vec<(usize, bool)> = vec![(0, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                out.push(i);
                if let Slot::Child(r) = self.nodes[i].slots[Side::Right.index()] {
                    stack.push((r, false));
                }
            } else {
                stack.push((i, true));
                if let Slot::Child(l) = self.nodes[i].slots[Side::Left.index()] {
                    stack.push((l, false));
                }
            }
        }
        out
    }

    /// Live nodes in inorder.
    pub fn inorder(&self) -> Vec<NodeId> {
        self.inorder_indices()
            .into_iter()
            .map(|i| self.nodes[i].id)
            .collect()
    }

    /// Candidate nodes in inorder.
    pub fn candidates_inorder(&self) -> Vec<NodeId> {
        self.inorder_indices()
            .into_iter()
            .filter(|&i| !self.nodes[i].excluded)
            .map(|i| self.nodes[i].id)
            .collect()
    }

    /// Candidate leaves in inorder.
    pub fn leaves_inorder(&self) -> Vec<NodeId> {
        self.inorder_indices()
            .into_iter()
            .filter(|&i| self.is_candidate_leaf(i))
            .map(|i| self.nodes[i].id)
            .collect()
    }

    /// Stubbed slots of live nodes, as `(parent, side)`.
    pub fn stub_slots(&self) -> impl Iterator<Item = (NodeId, Side)> + '_ {
        self.slots_in_state(Slot::Stub)
    }

    /// Slots of live nodes whose excluded child was pruned.
    pub fn pruned_slots(&self) -> impl Iterator<Item = (NodeId, Side)> + '_ {
        self.slots_in_state(Slot::Pruned)
    }

    fn slots_in_state(&self, state: Slot) -> impl Iterator<Item = (NodeId, Side)> + '_ {
        self.live_indices().flat_map(move |i| {
            Side::BOTH
                .into_iter()
                .filter(move |s| self.nodes[i].slots[s.index()] == state)
                .map(move |s| (self.nodes[i].id, s))
        })
    }

    /// Live nodes with at least one unexplored slot.
    pub fn frontier(&self) -> Vec<NodeId> {
        self.live_indices()
            .filter(|&i| self.nodes[i].slots.contains(&Slot::Unexplored))
            .map(|i| self.nodes[i].id)
            .collect()
    }

    /// The candidate whose counts of smaller and larger candidates differ
    /// the least; ties go to the inorder-smaller node.
    pub fn median_node(&self) -> Result<NodeId, SearchError> {
        Self::median_of(&self.candidates_inorder())
    }

    /// Median over candidate leaves.
    pub fn median_leaf(&self) -> Result<NodeId, SearchError> {
        Self::median_of(&self.leaves_inorder())
    }

    pub fn median(&self, mode: HalvingMode) -> Result<NodeId, SearchError> {
        match mode {
            HalvingMode::Nodes => self.median_node(),
            HalvingMode::Leaves => self.median_leaf(),
        }
    }

    fn median_of(seq: &[NodeId]) -> Result<NodeId, SearchError> {
        if seq.is_empty() {
            return Err(SearchError::Inconsistent(
                "no candidates left to pick a median from".into(),
            ));
        }
        Ok(seq[(seq.len() - 1) / 2])
    }

    /// Applies an oracle answer obtained at `u`.
    ///
    /// Along the root path of `u`, every child on the side the answer rules
    /// out is stubbed unless it is itself on the path. Path nodes on the
    /// ruled-out side of `u`, and `u` itself, become excluded. Excluded nodes
    /// left without any open slot are then pruned, bottom-up.
    pub fn trim(&mut self, u: NodeId, answer: OracleAnswer) -> Result<(), SearchError> {
        let dead = match answer {
            OracleAnswer::TargetLarger => Side::Left,
            OracleAnswer::TargetSmaller => Side::Right,
            OracleAnswer::Found => {
                return Err(SearchError::Inconsistent(format!(
                    "trim at {u} with a found answer"
                )));
            }
        };
        let ui = self.idx(u)?;
        self.stub(ui, dead);
        self.exclude(ui);
        let mut below = ui;
        while let Some((p, side)) = self.nodes[below].parent {
            if side != dead {
                self.stub(p, dead);
                self.exclude(p);
            }
            below = p;
        }
        let mut at = ui;
        while let Some((p, side)) = self.nodes[at].parent {
            if !(self.nodes[at].excluded && self.nodes[at].is_closed()) {
                break;
            }
            self.close(p, side, Slot::Pruned);
            at = p;
        }
        Ok(())
    }

    fn exclude(&mut self, i: usize) {
        if !self.nodes[i].excluded {
            self.nodes[i].excluded = true;
            self.candidates -= 1;
        }
    }

    fn stub(&mut self, i: usize, side: Side) {
        self.close(i, side, Slot::Stub);
    }

    fn close(&mut self, i: usize, side: Side, state: Slot) {
        match self.nodes[i].slots[side.index()] {
            Slot::Absent | Slot::Stub | Slot::Pruned => {}
            Slot::Unexplored => self.nodes[i].slots[side.index()] = state,
            Slot::Child(c) => {
                self.nodes[i].slots[side.index()] = state;
                self.remove_subtree(c);
            }
        }
    }

    fn remove_subtree(&mut self, top: usize) {
        let mut stack = vec![top];
        while let Some(i) = stack.pop() {
            let node = &mut self.nodes[i];
            node.removed = true;
            self.live -= 1;
            if !node.excluded {
                self.candidates -= 1;
            }
            let id = node.id;
            for s in node.slots {
                if let Slot::Child(c) = s {
                    stack.push(c);
                }
            }
            self.index.remove(&id);
        }
    }
}
