//! Instance families and target placement.
//!
//! Every generator is a pure function of its parameters and a 64-bit seed.
//! Randomness comes from ChaCha8 with one stream per purpose, so the tree
//! shape and the target placement never share random draws.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::model::{NodeId, Side, TreeBuilder, TreeInstance};

const SHAPE_STREAM: u64 = 0;
const TARGET_STREAM: u64 = 1;

/// Largest instance [`gen_complete_path`] will materialize.
pub const MAX_COMPLETE_PATH_NODES: u64 = 1 << 24;

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_side(rng: &mut impl Rng) -> Side {
    if rng.gen::<bool>() {
        Side::Left
    } else {
        Side::Right
    }
}

fn check_fork_capacity(n: u32, t: u32) -> Result<(), GenError> {
    let capacity = if n >= 32 { u64::MAX } else { (1u64 << n) - 1 };
    if u64::from(t) > capacity {
        return Err(GenError::Infeasible(format!(
            "{t} forks do not fit within depth {n}"
        )));
    }
    Ok(())
}

/// A random (n,t)-tree: a spine of length `n`, then `t` forks inserted at
/// uniformly random depths, each sprouting a branch of random length that
/// stays within depth `n`.
pub fn gen_random(n: u32, t: u32, seed: u64) -> Result<TreeInstance, GenError> {
    check_fork_capacity(n, t)?;
    let mut rng = rng(seed, SHAPE_STREAM);
    let mut b = TreeBuilder::new();
    let mut depth: Vec<u32> = vec![0];
    // Unary nodes bucketed by depth; these are the places a fork can go.
    let mut unary: Vec<Vec<NodeId>> = vec![Vec::new(); n as usize];

    let extend = |b: &mut TreeBuilder,
                  depth: &mut Vec<u32>,
                  unary: &mut Vec<Vec<NodeId>>,
                  rng: &mut ChaCha8Rng,
                  from: NodeId,
                  len: u32,
                  first: Side|
     -> Result<(), GenError> {
        let mut at = from;
        for k in 0..len {
            let side = if k == 0 { first } else { random_side(rng) };
            let child = b.add_child(at, side)?;
            let d = depth[at.index()] + 1;
            depth.push(d);
            if k + 1 < len {
                unary[d as usize].push(child);
            }
            at = child;
        }
        Ok(())
    };

    if n > 0 {
        let first = random_side(&mut rng);
        let root = b.root();
        unary[0].push(root);
        extend(&mut b, &mut depth, &mut unary, &mut rng, root, n, first)?;
    }

    for _ in 0..t {
        let v = match pick_unary(&mut unary, &mut rng) {
            Some(v) => v,
            None => {
                // Everything left is a fork or a leaf: grow a shallow leaf first.
                let leaf = (0..b.len() as u32)
                    .map(NodeId)
                    .find(|&id| b.record(id).kind().is_leaf() && depth[id.index()] < n)
                    .ok_or_else(|| {
                        GenError::Infeasible(format!("no room for {t} forks within depth {n}"))
                    })?;
                let side = random_side(&mut rng);
                extend(&mut b, &mut depth, &mut unary, &mut rng, leaf, 1, side)?;
                leaf
            }
        };
        let d = depth[v.index()];
        let free = match b.record(v).kind() {
            crate::model::NodeKind::Unary { child_side } => child_side.opposite(),
            _ => unreachable!("fork sites are unary"),
        };
        let len = rng.gen_range(1..=n - d);
        extend(&mut b, &mut depth, &mut unary, &mut rng, v, len, free)?;
    }
    Ok(b.build(n)?)
}

fn pick_unary(unary: &mut [Vec<NodeId>], rng: &mut impl Rng) -> Option<NodeId> {
    if unary.is_empty() {
        return None;
    }
    for _ in 0..64 {
        let d = rng.gen_range(0..unary.len());
        if !unary[d].is_empty() {
            let k = rng.gen_range(0..unary[d].len());
            return Some(unary[d].swap_remove(k));
        }
    }
    let nonempty: Vec<usize> = (0..unary.len()).filter(|&d| !unary[d].is_empty()).collect();
    let &d = nonempty.choose(rng)?;
    let k = rng.gen_range(0..unary[d].len());
    Some(unary[d].swap_remove(k))
}

/// A single path of `n` edges with random side labels.
pub fn gen_path(n: u32, seed: u64) -> Result<TreeInstance, GenError> {
    gen_random(n, 0, seed)
}

/// A spine of length `n` with `t` forks at depths `s, 2s, …, ts` where
/// `s = ⌊n/(t+1)⌋`; every fork sprouts a path down to depth `n`.
pub fn gen_comb(n: u32, t: u32, seed: u64) -> Result<TreeInstance, GenError> {
    let spacing = n / (t + 1);
    if t > 0 && spacing == 0 {
        return Err(GenError::Infeasible(format!(
            "cannot space {t} forks along a spine of length {n}"
        )));
    }
    let mut rng = rng(seed, SHAPE_STREAM);
    let mut b = TreeBuilder::with_capacity(n as usize * (t as usize + 1) + 1);
    let mut spine = vec![b.root()];
    for _ in 0..n {
        let side = random_side(&mut rng);
        let next = b.add_child(*spine.last().expect("spine is non-empty"), side)?;
        spine.push(next);
    }
    for k in 1..=t {
        let d = k * spacing;
        let v = spine[d as usize];
        let free = match b.record(v).kind() {
            crate::model::NodeKind::Unary { child_side } => child_side.opposite(),
            _ => unreachable!("spine nodes above depth n are unary"),
        };
        b.add_path(v, n - d, free, || random_side(&mut rng))?;
    }
    Ok(b.build(n)?)
}

/// A complete binary tree of height `h` whose every edge is replaced by a
/// path of `delta` edges. Path nodes keep the side of the edge they replace.
pub fn gen_complete_path(h: u32, delta: u32) -> Result<TreeInstance, GenError> {
    if h == 0 || delta == 0 {
        return Err(GenError::Infeasible(
            "complete_path needs h >= 1 and delta >= 1".into(),
        ));
    }
    let nodes = if h >= 40 {
        u64::MAX
    } else {
        ((1u64 << (h + 1)) - 2) * u64::from(delta) + 1
    };
    if nodes > MAX_COMPLETE_PATH_NODES {
        return Err(GenError::Infeasible(format!(
            "complete_path(h={h}, delta={delta}) would have {nodes} nodes, above {MAX_COMPLETE_PATH_NODES}"
        )));
    }
    let mut b = TreeBuilder::with_capacity(nodes as usize);
    let mut level = vec![b.root()];
    for _ in 0..h {
        let mut next = Vec::with_capacity(level.len() * 2);
        for &fork in &level {
            for side in Side::BOTH {
                next.push(b.add_path(fork, delta, side, || side)?);
            }
        }
        level = next;
    }
    Ok(b.build(h * delta)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    Path,
    Comb,
    CompletePath,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Path => "path",
            Family::Comb => "comb",
            Family::CompletePath => "complete_path",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Family::Random),
            "path" => Ok(Family::Path),
            "comb" => Ok(Family::Comb),
            "complete_path" | "complete-path" => Ok(Family::CompletePath),
            other => Err(format!(
                "unknown family `{other}` (random, path, comb, complete_path)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetStrategy {
    RandomNode,
    RandomLeaf,
    /// A deepest leaf.
    AdversarialDeep,
    /// The k-th node in inorder.
    Fixed(u64),
}

impl fmt::Display for TargetStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetStrategy::RandomNode => f.write_str("random_node"),
            TargetStrategy::RandomLeaf => f.write_str("random_leaf"),
            TargetStrategy::AdversarialDeep => f.write_str("adversarial_deep"),
            TargetStrategy::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

impl FromStr for TargetStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random_node" => Ok(TargetStrategy::RandomNode),
            "random_leaf" => Ok(TargetStrategy::RandomLeaf),
            "adversarial_deep" => Ok(TargetStrategy::AdversarialDeep),
            other => other
                .strip_prefix("fixed:")
                .and_then(|k| k.parse().ok())
                .map(TargetStrategy::Fixed)
                .ok_or_else(|| {
                    format!("unknown target strategy `{other}` (random_node, random_leaf, adversarial_deep, fixed:K)")
                }),
        }
    }
}

/// Chooses a target node for `instance`.
pub fn place_target(
    instance: &TreeInstance,
    strategy: TargetStrategy,
    seed: u64,
) -> Result<NodeId, GenError> {
    let mut rng = rng(seed, TARGET_STREAM);
    match strategy {
        TargetStrategy::RandomNode => Ok(NodeId(rng.gen_range(0..instance.len() as u32))),
        TargetStrategy::RandomLeaf => {
            let leaves: Vec<NodeId> = instance.leaves().collect();
            Ok(*leaves.choose(&mut rng).expect("every tree has a leaf"))
        }
        TargetStrategy::AdversarialDeep => {
            let h = instance.height();
            let deepest: Vec<NodeId> = instance
                .leaves()
                .filter(|&l| instance.depth(l) == h)
                .collect();
            Ok(*deepest.choose(&mut rng).expect("a deepest leaf exists"))
        }
        TargetStrategy::Fixed(k) => {
            instance
                .inorder()
                .get(k as usize)
                .copied()
                .ok_or(GenError::TargetOutOfRange {
                    k,
                    len: instance.len(),
                })
        }
    }
}

/// Everything needed to rebuild one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
    pub t: u32,
    pub seed: u64,
    pub target: TargetStrategy,
}

impl FamilySpec {
    /// Generates the tree and places the target.
    ///
    /// For `complete_path`, `t` must be a perfect square `h²`; the tree is
    /// `gen_complete_path(h, ⌊n/h⌋)`.
    pub fn build(&self) -> Result<TreeInstance, GenError> {
        let tree = match self.family {
            Family::Random => gen_random(self.n, self.t, self.seed)?,
            Family::Path => gen_path(self.n, self.seed)?,
            Family::Comb => gen_comb(self.n, self.t, self.seed)?,
            Family::CompletePath => {
                let h = crate::search::ceil_sqrt(u64::from(self.t)) as u32;
                if h == 0 || h * h != self.t {
                    return Err(GenError::Infeasible(format!(
                        "complete_path needs t = h², got t = {}",
                        self.t
                    )));
                }
                if self.n < h {
                    return Err(GenError::Infeasible(format!(
                        "complete_path needs n >= h = {h}"
                    )));
                }
                gen_complete_path(h, self.n / h)?
            }
        };
        let target = place_target(&tree, self.target, self.seed)?;
        Ok(tree.with_target(target)?)
    }
}
