mod common;

use std::cmp::Ordering;

use bifurcation::generators::{gen_random, place_target, TargetStrategy};
use bifurcation::model::{NodeId, Side, TreeBuilder, TreeInstance};
use bifurcation::oracle::{InstrumentedOracle, OracleAnswer, OracleMode};
use bifurcation::walker::{Direction, Walker};
use common::{positions, recursive_inorder};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Preorder codes `(has_left, has_right)` of every binary tree shape with
/// `size` nodes. A node with one child is a unary node with that side label.
fn shapes(size: usize, memo: &mut Vec<Vec<Vec<(bool, bool)>>>) -> Vec<Vec<(bool, bool)>> {
    while memo.len() <= size {
        let k = memo.len();
        let mut all = Vec::new();
        if k == 0 {
            all.push(Vec::new());
        } else {
            for left in 0..k {
                let right = k - 1 - left;
                for l in &memo[left] {
                    for r in &memo[right] {
                        let mut code = vec![(left > 0, right > 0)];
                        code.extend_from_slice(l);
                        code.extend_from_slice(r);
                        all.push(code);
                    }
                }
            }
        }
        memo.push(all);
    }
    memo[size].clone()
}

/// Builds the shape; ids follow preorder. Also returns the inorder read
/// straight off the code.
fn build(code: &[(bool, bool)]) -> (TreeInstance, Vec<NodeId>) {
    fn place(
        code: &[(bool, bool)],
        at: &mut usize,
        b: &mut TreeBuilder,
        me: NodeId,
        order: &mut Vec<NodeId>,
    ) {
        let (l, r) = code[*at];
        *at += 1;
        if l {
            let c = b.add_child(me, Side::Left).unwrap();
            place(code, at, b, c, order);
        }
        order.push(me);
        if r {
            let c = b.add_child(me, Side::Right).unwrap();
            place(code, at, b, c, order);
        }
    }
    let mut b = TreeBuilder::new();
    let mut order = Vec::new();
    let root = b.root();
    place(code, &mut 0, &mut b, root, &mut order);
    (b.build(code.len() as u32).unwrap(), order)
}

#[test]
fn inorder_is_a_strict_total_order_on_every_small_shape() {
    let mut memo = Vec::new();
    let mut checked = 0usize;
    for size in 1..=12 {
        for code in shapes(size, &mut memo) {
            let (tree, order) = build(&code);
            let pos = positions(&order);
            for a in tree.ids() {
                for b in tree.ids() {
                    let expected = pos[a.index()].cmp(&pos[b.index()]);
                    assert_eq!(tree.inorder_compare(a, b), expected, "{code:?}: {a} vs {b}");
                }
            }
            if size <= 7 {
                for a in tree.ids() {
                    for b in tree.ids() {
                        for c in tree.ids() {
                            if tree.inorder_compare(a, b) == Ordering::Less
                                && tree.inorder_compare(b, c) == Ordering::Less
                            {
                                assert_eq!(tree.inorder_compare(a, c), Ordering::Less);
                            }
                        }
                    }
                }
            }
            checked += 1;
        }
    }
    // Catalan numbers 1 through 12.
    assert_eq!(
        checked,
        1 + 2 + 5 + 14 + 42 + 132 + 429 + 1430 + 4862 + 16796 + 58786 + 208012
    );
}

#[test]
fn all_left_path_puts_the_root_last() {
    let mut b = TreeBuilder::new();
    b.add_path(NodeId(0), 6, Side::Left, || Side::Left).unwrap();
    let tree = b.build(6).unwrap().with_target(NodeId(0)).unwrap();
    let mut oracle = InstrumentedOracle::new(&tree, OracleMode::AnyNode);
    assert_eq!(oracle.query(NodeId(6)), Ok(OracleAnswer::TargetLarger));
    assert_eq!(
        tree.inorder_compare(NodeId(0), NodeId(6)),
        Ordering::Greater
    );
    assert_eq!(tree.inorder().last(), Some(&NodeId(0)));
}

#[test]
fn oracle_agrees_with_recursive_inorder_on_random_pairs() {
    let mut pairs = 0;
    for seed in 0..50u64 {
        let tree = gen_random(20 + seed as u32, (seed % 9) as u32, seed).unwrap();
        let target = place_target(&tree, TargetStrategy::RandomNode, seed).unwrap();
        let tree = tree.with_target(target).unwrap();
        let pos = positions(&recursive_inorder(&tree));
        let mut oracle = InstrumentedOracle::new(&tree, OracleMode::AnyNode);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for q in (0..20).map(|_| NodeId(rng.gen_range(0..tree.len() as u32))) {
            let expected = match pos[target.index()].cmp(&pos[q.index()]) {
                Ordering::Equal => OracleAnswer::Found,
                Ordering::Less => OracleAnswer::TargetSmaller,
                Ordering::Greater => OracleAnswer::TargetLarger,
            };
            assert_eq!(oracle.query(q), Ok(expected));
            pairs += 1;
        }
        assert_eq!(oracle.calls(), 20);
    }
    assert_eq!(pairs, 1000);
}

#[test]
fn random_fifty_node_instance_matches_recursive_inorder() {
    let tree = gen_random(24, 8, 50).unwrap();
    assert!(tree.len() >= 50, "{} nodes", tree.len());
    assert_eq!(tree.inorder(), recursive_inorder(&tree).as_slice());
}

#[test]
fn leaves_only_mode_rejects_internal_nodes() {
    let tree = gen_random(10, 2, 3).unwrap();
    let mut oracle = InstrumentedOracle::new(&tree, OracleMode::LeavesOnly);
    assert!(oracle.query(tree.root()).is_err());
    assert_eq!(oracle.calls(), 0);
    let leaf = tree.leaves().next().unwrap();
    assert!(oracle.query(leaf).is_ok());
    assert_eq!(oracle.calls(), 1);
}

proptest! {
    #[test]
    fn oracle_answers_are_path_consistent(n in 4u32..40, t in 0u32..10, seed: u64, p: usize, q: usize) {
        let tree = gen_random(n, t, seed).unwrap();
        let target = place_target(&tree, TargetStrategy::RandomNode, seed).unwrap();
        let tree = tree.with_target(target).unwrap();
        let (p, q) = (NodeId((p % tree.len()) as u32), NodeId((q % tree.len()) as u32));
        let mut oracle = InstrumentedOracle::new(&tree, OracleMode::AnyNode);
        if oracle.query(q).unwrap() == OracleAnswer::TargetSmaller
            && oracle.query(p).unwrap() == OracleAnswer::TargetLarger
        {
            prop_assert_eq!(tree.inorder_compare(p, q), Ordering::Less);
        }
    }

    #[test]
    fn steps_count_successful_moves(n in 3u32..30, t in 0u32..6, seed: u64, moves in prop::collection::vec(0u8..4, 0..60)) {
        let tree = gen_random(n, t, seed).unwrap();
        let mut walker = Walker::new(&tree);
        let mut ok = 0;
        for m in moves {
            let dir = [Direction::Parent, Direction::LeftChild, Direction::RightChild, Direction::OnlyChild][m as usize];
            if walker.move_to(dir).is_ok() {
                ok += 1;
            }
            prop_assert_eq!(walker.steps(), ok);
            prop_assert!(walker.is_revealed(walker.current()));
        }
    }

    #[test]
    fn dump_round_trips(n in 3u32..30, t in 0u32..8, seed: u64) {
        let tree = gen_random(n, t, seed).unwrap();
        let back = TreeInstance::parse_dump(&tree.dump(), n).unwrap();
        prop_assert_eq!(back.dump(), tree.dump());
        prop_assert_eq!(back.inorder(), tree.inorder());
    }
}
