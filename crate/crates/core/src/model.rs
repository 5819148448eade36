//! Ground-truth (n,t)-trees.
//!
//! A [`TreeInstance`] is a fully materialized rooted tree in which every
//! internal node is either a fork (two children, one on each side) or a unary
//! node (one child carrying a side label). The side labels induce the inorder
//! used by the target oracle: the subtree hanging on the left side of a node
//! precedes it, the subtree on the right side follows it.
//!
//! Search algorithms never touch a `TreeInstance` directly. They go through a
//! [`Walker`](crate::walker::Walker), which enforces local movement and
//! counts steps, and an [`InstrumentedOracle`](crate::oracle::InstrumentedOracle).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;

/// Index of a node inside one [`TreeInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// What a node looks like once it has been entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Fork,
    /// One child, hanging on `child_side`.
    Unary {
        child_side: Side,
    },
    Leaf,
}

impl NodeKind {
    pub fn is_fork(self) -> bool {
        matches!(self, NodeKind::Fork)
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, NodeKind::Leaf)
    }

    /// Whether a child hangs on `side`.
    pub fn has_child(self, side: Side) -> bool {
        match self {
            NodeKind::Fork => true,
            NodeKind::Unary { child_side } => child_side == side,
            NodeKind::Leaf => false,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NodeKind::Fork => "fork",
            NodeKind::Unary { .. } => "unary",
            NodeKind::Leaf => "leaf",
        }
    }
}

/// A node together with its kind, as disclosed to an exploring algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeInfo {
    pub id: NodeId,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub parent: Option<NodeId>,
    /// Side this node hangs on below its parent; `None` only for the root.
    pub side: Option<Side>,
    pub children: [Option<NodeId>; 2],
}

impl NodeRecord {
    pub fn kind(&self) -> NodeKind {
        match self.children {
            [Some(_), Some(_)] => NodeKind::Fork,
            [Some(_), None] => NodeKind::Unary {
                child_side: Side::Left,
            },
            [None, Some(_)] => NodeKind::Unary {
                child_side: Side::Right,
            },
            [None, None] => NodeKind::Leaf,
        }
    }

    pub fn child(&self, side: Side) -> Option<NodeId> {
        self.children[side.index()]
    }
}

/// Incremental construction of a tree. Node ids are handed out in creation
/// order, so a parent always has a smaller id than its children.
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    nodes: Vec<NodeRecord>,
}

impl TreeBuilder {
    /// Starts a tree consisting of a single root (id 0).
    pub fn new() -> Self {
        TreeBuilder {
            nodes: vec![NodeRecord {
                parent: None,
                side: None,
                children: [None, None],
            }],
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let mut nodes = Vec::with_capacity(capacity.max(1));
        nodes.push(NodeRecord {
            parent: None,
            side: None,
            children: [None, None],
        });
        TreeBuilder { nodes }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn record(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id.index()]
    }

    /// Attaches a fresh child on `side` of `parent`.
    pub fn add_child(&mut self, parent: NodeId, side: Side) -> Result<NodeId, ModelError> {
        let slot = self
            .nodes
            .get(parent.index())
            .ok_or(ModelError::UnknownNode(parent))?
            .child(side);
        if slot.is_some() {
            return Err(ModelError::SideTaken { parent, side });
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(NodeRecord {
            parent: Some(parent),
            side: Some(side),
            children: [None, None],
        });
        self.nodes[parent.index()].children[side.index()] = Some(id);
        Ok(id)
    }

    /// Attaches a path of `len` nodes below `from`. The first node hangs on
    /// `first_side`; subsequent sides are drawn from `sides`. Returns the last
    /// node of the path (or `from` when `len == 0`).
    pub fn add_path(
        &mut self,
        from: NodeId,
        len: u32,
        first_side: Side,
        mut sides: impl FnMut() -> Side,
    ) -> Result<NodeId, ModelError> {
        let mut at = from;
        for k in 0..len {
            let side = if k == 0 { first_side } else { sides() };
            at = self.add_child(at, side)?;
        }
        Ok(at)
    }

    /// Freezes the tree. `n` is the declared depth bound; the target starts at
    /// the root and can be moved with [`TreeInstance::with_target`].
    pub fn build(self, n: u32) -> Result<TreeInstance, ModelError> {
        TreeInstance::from_records(self.nodes, n)
    }
}

/// An immutable (n,t)-tree with a designated target node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeInstance {
    nodes: Vec<NodeRecord>,
    n: u32,
    forks: u32,
    target: NodeId,
    depth: Vec<u32>,
    /// Inorder position of every node.
    rank: Vec<u32>,
    /// Inorder positions `[lo, hi]` covered by each subtree.
    span: Vec<(u32, u32)>,
    inorder: Vec<NodeId>,
}

impl TreeInstance {
    fn from_records(nodes: Vec<NodeRecord>, n: u32) -> Result<Self, ModelError> {
        if nodes.is_empty() {
            return Err(ModelError::Empty);
        }
        let len = nodes.len();
        if nodes[0].parent.is_some() {
            return Err(ModelError::Malformed("node 0 must be the root".into()));
        }
        let mut depth = vec![0u32; len];
        let mut forks = 0u32;
        for (i, rec) in nodes.iter().enumerate() {
            if i > 0 {
                let p = rec
                    .parent
                    .ok_or_else(|| ModelError::Malformed(format!("node {i} has no parent")))?;
                let side = rec
                    .side
                    .ok_or_else(|| ModelError::Malformed(format!("node {i} has no side")))?;
                if p.index() >= i || nodes[p.index()].child(side) != Some(NodeId(i as u32)) {
                    return Err(ModelError::Malformed(format!(
                        "node {i} is not linked from its parent {p}"
                    )));
                }
                depth[i] = depth[p.index()] + 1;
                if depth[i] > n {
                    return Err(ModelError::TooDeep {
                        node: NodeId(i as u32),
                        depth: depth[i],
                        n,
                    });
                }
            }
            for c in rec.children.iter().flatten() {
                if c.index() >= len || nodes[c.index()].parent != Some(NodeId(i as u32)) {
                    return Err(ModelError::Malformed(format!(
                        "child {c} of node {i} does not point back"
                    )));
                }
            }
            if rec.kind().is_fork() {
                forks += 1;
            }
        }

        // Iterative inorder: left-side subtree, node, right-side subtree.
        let mut inorder = Vec::with_capacity(len);
        let mut stack: Vec<(NodeId, bool)> = vec![(NodeId(0), false)];
        while let Some((id, expanded)) = stack.pop() {
            let rec = &nodes[id.index()];
            if expanded {
                inorder.push(id);
                if let Some(r) = rec.child(Side::Right) {
                    stack.push((r, false));
                }
            } else {
                stack.push((id, true));
                if let Some(l) = rec.child(Side::Left) {
                    stack.push((l, false));
                }
            }
        }
        let mut rank = vec![0u32; len];
        for (pos, id) in inorder.iter().enumerate() {
            rank[id.index()] = pos as u32;
        }
        // Children have larger ids than parents, so a reverse sweep is a post-order.
        let mut span: Vec<(u32, u32)> = rank.iter().map(|&r| (r, r)).collect();
        for i in (0..len).rev() {
            let rec = &nodes[i];
            if let Some(l) = rec.child(Side::Left) {
                span[i].0 = span[l.index()].0;
            }
            if let Some(r) = rec.child(Side::Right) {
                span[i].1 = span[r.index()].1;
            }
        }

        Ok(TreeInstance {
            nodes,
            n,
            forks,
            target: NodeId(0),
            depth,
            rank,
            span,
            inorder,
        })
    }

    /// Returns the same tree with a different target.
    pub fn with_target(mut self, target: NodeId) -> Result<Self, ModelError> {
        if target.index() >= self.nodes.len() {
            return Err(ModelError::UnknownNode(target));
        }
        self.target = target;
        Ok(self)
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Declared bound on the root-to-leaf distance.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of forks.
    pub fn t(&self) -> u32 {
        self.forks
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn record(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id.index()]
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.nodes[id.index()].kind()
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        self.depth[id.index()]
    }

    pub fn height(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn inorder_rank(&self, id: NodeId) -> u32 {
        self.rank[id.index()]
    }

    pub fn inorder(&self) -> &[NodeId] {
        &self.inorder
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids().filter(|&id| self.kind(id).is_leaf())
    }

    /// Whether `node` lies in the subtree rooted at `root`.
    pub fn in_subtree(&self, root: NodeId, node: NodeId) -> bool {
        let (lo, hi) = self.span[root.index()];
        let r = self.rank[node.index()];
        lo <= r && r <= hi
    }

    /// Inorder positions covered by the subtree of `id`.
    pub fn subtree_span(&self, id: NodeId) -> (u32, u32) {
        self.span[id.index()]
    }

    /// Compares two nodes by their inorder position.
    pub fn inorder_compare(&self, a: NodeId, b: NodeId) -> Ordering {
        self.rank[a.index()].cmp(&self.rank[b.index()])
    }

    /// One line per node, `id kind parent side`, root first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for id in self.ids() {
            let rec = self.record(id);
            let parent = rec
                .parent
                .map_or_else(|| "-".to_string(), |p| p.to_string());
            let side = match rec.side {
                Some(Side::Left) => "L",
                Some(Side::Right) => "R",
                None => "-",
            };
            out.push_str(&format!("{id} {} {parent} {side}\n", rec.kind().name()));
        }
        out
    }

    /// Parses the output of [`dump`](Self::dump). The kind column is checked
    /// against the reconstructed structure.
    pub fn parse_dump(text: &str, n: u32) -> Result<Self, ModelError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || ModelError::Parse {
                line: lineno + 1,
                content: line.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(bad());
            }
            let id = u32::from_str(fields[0]).map_err(|_| bad())?;
            let kind = fields[1];
            let parent = match fields[2] {
                "-" => None,
                p => Some(NodeId(u32::from_str(p).map_err(|_| bad())?)),
            };
            let side = match fields[3] {
                "L" => Some(Side::Left),
                "R" => Some(Side::Right),
                "-" => None,
                _ => return Err(bad()),
            };
            if id as usize != rows.len() || !matches!(kind, "fork" | "unary" | "leaf") {
                return Err(bad());
            }
            rows.push((kind.to_string(), parent, side, lineno + 1));
        }
        let mut nodes: Vec<NodeRecord> = rows
            .iter()
            .map(|(_, parent, side, _)| NodeRecord {
                parent: *parent,
                side: *side,
                children: [None, None],
            })
            .collect();
        for i in 0..nodes.len() {
            if let (Some(p), Some(s)) = (nodes[i].parent, nodes[i].side) {
                let parent = nodes.get_mut(p.index()).ok_or(ModelError::UnknownNode(p))?;
                if parent.children[s.index()].is_some() {
                    return Err(ModelError::SideTaken { parent: p, side: s });
                }
                parent.children[s.index()] = Some(NodeId(i as u32));
            }
        }
        for (rec, (kind, _, _, line)) in nodes.iter().zip(&rows) {
            if rec.kind().name() != kind {
                return Err(ModelError::Parse {
                    line: *line,
                    content: format!("kind {kind} disagrees with structure"),
                });
            }
        }
        Self::from_records(nodes, n)
    }
}
