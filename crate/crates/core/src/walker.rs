//! Local movement over a [`TreeInstance`].

use crate::error::WalkError;
use crate::model::{NodeId, NodeInfo, NodeKind, Side, TreeInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Parent,
    LeftChild,
    RightChild,
    /// The single child of a unary node.
    OnlyChild,
}

impl Direction {
    /// Direction that descends into the child on `side` of a node of `kind`.
    pub fn down(kind: NodeKind, side: Side) -> Direction {
        match kind {
            NodeKind::Unary { .. } => Direction::OnlyChild,
            _ => match side {
                Side::Left => Direction::LeftChild,
                Side::Right => Direction::RightChild,
            },
        }
    }
}

/// A cursor that can only move along edges. Every successful move costs one
/// step; a node's kind is disclosed the first time it is entered.
#[derive(Debug, Clone)]
pub struct Walker<'a> {
    instance: &'a TreeInstance,
    current: NodeId,
    steps: u64,
    revealed: Vec<bool>,
}

impl<'a> Walker<'a> {
    pub fn new(instance: &'a TreeInstance) -> Self {
        let mut revealed = vec![false; instance.len()];
        revealed[instance.root().index()] = true;
        Walker {
            instance,
            current: instance.root(),
            steps: 0,
            revealed,
        }
    }

    pub fn current(&self) -> NodeId {
        self.current
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn root_info(&self) -> NodeInfo {
        let root = self.instance.root();
        NodeInfo {
            id: root,
            kind: self.instance.kind(root),
        }
    }

    pub fn is_revealed(&self, id: NodeId) -> bool {
        self.revealed.get(id.index()).copied().unwrap_or(false)
    }

    pub fn kind_of(&self, id: NodeId) -> Result<NodeKind, WalkError> {
        if self.is_revealed(id) {
            Ok(self.instance.kind(id))
        } else {
            Err(WalkError::NotRevealed(id))
        }
    }

    /// Moves to a neighbor of the current node.
    pub fn move_to(&mut self, direction: Direction) -> Result<NodeInfo, WalkError> {
        let rec = self.instance.record(self.current);
        let kind = rec.kind();
        let next = match (direction, kind) {
            (Direction::Parent, _) => rec.parent,
            (Direction::LeftChild, NodeKind::Fork) => rec.child(Side::Left),
            (Direction::RightChild, NodeKind::Fork) => rec.child(Side::Right),
            (Direction::OnlyChild, NodeKind::Unary { child_side }) => rec.child(child_side),
            _ => None,
        };
        let next = next.ok_or(WalkError::NoSuchNeighbor {
            at: self.current,
            direction,
        })?;
        self.current = next;
        self.steps += 1;
        self.revealed[next.index()] = true;
        Ok(NodeInfo {
            id: next,
            kind: self.instance.kind(next),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TreeBuilder;

    fn path(len: u32) -> TreeInstance {
        let mut b = TreeBuilder::new();
        b.add_path(NodeId(0), len, Side::Left, || Side::Right)
            .unwrap();
        b.build(len).unwrap()
    }

    #[test]
    fn single_edge_costs_one_step() {
        let t = path(1);
        let mut w = Walker::new(&t);
        let info = w.move_to(Direction::OnlyChild).unwrap();
        assert_eq!(info.id, NodeId(1));
        assert_eq!(info.kind, NodeKind::Leaf);
        assert_eq!(w.steps(), 1);
    }

    #[test]
    fn round_trip_costs_two_steps() {
        let t = path(1);
        let mut w = Walker::new(&t);
        w.move_to(Direction::OnlyChild).unwrap();
        w.move_to(Direction::Parent).unwrap();
        assert_eq!(w.current(), t.root());
        assert_eq!(w.steps(), 2);
    }

    #[test]
    fn dfs_of_seven_edge_path() {
        let t = path(7);
        let mut w = Walker::new(&t);
        while !w.kind_of(w.current()).unwrap().is_leaf() {
            w.move_to(Direction::OnlyChild).unwrap();
        }
        while w.current() != t.root() {
            w.move_to(Direction::Parent).unwrap();
        }
        assert_eq!(w.steps(), 14);
    }

    #[test]
    fn invalid_moves_are_rejected_without_cost() {
        let t = path(1);
        let mut w = Walker::new(&t);
        assert!(w.move_to(Direction::Parent).is_err());
        assert!(w.move_to(Direction::LeftChild).is_err());
        w.move_to(Direction::OnlyChild).unwrap();
        assert!(w.move_to(Direction::OnlyChild).is_err());
        assert_eq!(w.steps(), 1);
    }

    #[test]
    fn kinds_are_hidden_until_entered() {
        let t = path(2);
        let mut w = Walker::new(&t);
        assert!(w.kind_of(NodeId(0)).is_ok());
        assert_eq!(w.kind_of(NodeId(1)), Err(WalkError::NotRevealed(NodeId(1))));
        w.move_to(Direction::OnlyChild).unwrap();
        assert!(w.kind_of(NodeId(1)).is_ok());
    }
}
