#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use bifurcation::env::SearchEnv;
use bifurcation::error::SearchError;
use bifurcation::explored::{ExploredTree, SlotState};
use bifurcation::model::{NodeId, NodeInfo, Side, TreeInstance};
use bifurcation::oracle::OracleAnswer;
use bifurcation::walker::Direction;
use rand::Rng;

/// Inorder sequence computed by plain recursion over the child records.
pub fn recursive_inorder(tree: &TreeInstance) -> Vec<NodeId> {
    fn visit(tree: &TreeInstance, id: NodeId, out: &mut Vec<NodeId>) {
        let rec = tree.record(id);
        if let Some(l) = rec.children[0] {
            visit(tree, l, out);
        }
        out.push(id);
        if let Some(r) = rec.children[1] {
            visit(tree, r, out);
        }
    }
    let mut out = Vec::new();
    visit(tree, tree.root(), &mut out);
    out
}

/// Position of every node in `order`, indexed by id.
pub fn positions(order: &[NodeId]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; order.len()];
    for (i, id) in order.iter().enumerate() {
        pos[id.index()] = i;
    }
    pos
}

/// Oracle with full knowledge of the instance and no walker. Lets tests
/// build explored trees directly and still run the search operations.
pub struct Omniscient<'a> {
    pub tree: &'a TreeInstance,
    pos: Vec<usize>,
    pub calls: u64,
}

impl<'a> Omniscient<'a> {
    pub fn new(tree: &'a TreeInstance) -> Self {
        Omniscient {
            tree,
            pos: positions(&recursive_inorder(tree)),
            calls: 0,
        }
    }

    pub fn answer(&self, q: NodeId) -> OracleAnswer {
        match self.pos[self.tree.target().index()].cmp(&self.pos[q.index()]) {
            Ordering::Equal => OracleAnswer::Found,
            Ordering::Less => OracleAnswer::TargetSmaller,
            Ordering::Greater => OracleAnswer::TargetLarger,
        }
    }
}

impl SearchEnv for Omniscient<'_> {
    fn root(&self) -> NodeInfo {
        info(self.tree, self.tree.root())
    }

    fn step(&mut self, _direction: Direction) -> Result<NodeInfo, SearchError> {
        Err(SearchError::Inconsistent(
            "this environment does not walk".into(),
        ))
    }

    fn query(&mut self, q: NodeId) -> Result<OracleAnswer, SearchError> {
        self.calls += 1;
        Ok(self.answer(q))
    }

    fn steps(&self) -> u64 {
        0
    }

    fn oracle_calls(&self) -> u64 {
        self.calls
    }
}

pub fn info(tree: &TreeInstance, id: NodeId) -> NodeInfo {
    NodeInfo {
        id,
        kind: tree.kind(id),
    }
}

/// Explores `size` nodes (or everything reachable), each time entering a
/// uniformly random unexplored child slot.
pub fn grow(tree: &TreeInstance, explored: &mut ExploredTree, size: usize, rng: &mut impl Rng) {
    let mut open: Vec<(NodeId, Side)> = explored
        .frontier()
        .into_iter()
        .flat_map(|id| Side::BOTH.map(|side| (id, side)))
        .filter(|&(id, side)| explored.slot(id, side) == Some(SlotState::Unexplored))
        .collect();
    while explored.live_count() < size && !open.is_empty() {
        let k = rng.gen_range(0..open.len());
        let (parent, side) = open.swap_remove(k);
        let child = tree
            .record(parent)
            .child(side)
            .expect("unexplored slot has a child");
        explored.attach(parent, side, info(tree, child)).unwrap();
        for s in Side::BOTH {
            if explored.slot(child, s) == Some(SlotState::Unexplored) {
                open.push((child, s));
            }
        }
    }
}

/// Checks the structural invariants every generated instance must satisfy.
pub fn validate(tree: &TreeInstance, n: u32, t: u32) -> Result<(), String> {
    let forks = tree.ids().filter(|&id| tree.kind(id).is_fork()).count();
    if forks != t as usize {
        return Err(format!("{forks} forks, expected {t}"));
    }
    let mut roots = 0;
    for id in tree.ids() {
        let rec = tree.record(id);
        match rec.parent {
            None => roots += 1,
            Some(p) => {
                let side = rec.side.ok_or(format!("{id} has a parent but no side"))?;
                if tree.record(p).child(side) != Some(id) {
                    return Err(format!("{id} is not the {side:?} child of its parent {p}"));
                }
            }
        }
        let mut depth = 0;
        let mut at = id;
        while let Some(p) = tree.record(at).parent {
            depth += 1;
            at = p;
        }
        if depth > n {
            return Err(format!("{id} at depth {depth} > {n}"));
        }
    }
    if roots != 1 {
        return Err(format!("{roots} roots"));
    }
    Ok(())
}

/// Edges on the root path of leaf `q`, each named by (depth, prefix).
pub fn root_path_edges(q: u64, h: u32) -> BTreeSet<(u32, u64)> {
    (1..=h).map(|d| (d, q >> (h - d))).collect()
}

pub fn edge_set_price(q: u64, history: &[u64], h: u32) -> u32 {
    let walked: BTreeSet<_> = history
        .iter()
        .flat_map(|&p| root_path_edges(p, h))
        .collect();
    root_path_edges(q, h).difference(&walked).count() as u32
}

/// Exhaustive game tree: the player may query any unqueried label, in or out
/// of the active range. Prices come from the edge-set oracle.
pub fn brute_force_minimax(h: u32) -> u64 {
    fn solve(
        h: u32,
        queried: u32,
        lo: u64,
        hi: u64,
        memo: &mut HashMap<(u32, u64, u64), u64>,
    ) -> u64 {
        if lo == hi {
            return 0;
        }
        if let Some(&v) = memo.get(&(queried, lo, hi)) {
            return v;
        }
        let history: Vec<u64> = (0..1u64 << h).filter(|&p| queried >> p & 1 == 1).collect();
        let mut best = u64::MAX;
        for q in (0..1u64 << h).filter(|&q| queried >> q & 1 == 0) {
            let price = u64::from(edge_set_price(q, &history, h));
            let (a, b) = if q < lo || q > hi {
                (lo, hi)
            } else if q - lo > hi - q {
                (lo, q - 1)
            } else {
                (q + 1, hi)
            };
            best = best.min(price + solve(h, queried | 1 << q, a, b, memo));
        }
        memo.insert((queried, lo, hi), best);
        best
    }
    solve(h, 0, 0, (1 << h) - 1, &mut HashMap::new())
}

/// Floor on the price of a query `q` strictly inside a flanked range
/// `[lo, hi]`.
pub fn trap_floor(q: u64, lo: u64, hi: u64) -> f64 {
    let left = ((q - (lo - 1)) as f64).log2();
    let right = ((hi + 1 - q) as f64).log2();
    left.min(right).max(1.0)
}
