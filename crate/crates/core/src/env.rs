//! The interface search algorithms run against.
//!
//! Algorithms only see a [`SearchEnv`]: a walker position that moves one edge
//! at a time and an oracle. [`Session`] backs it with a ground-truth
//! [`TreeInstance`]; the lower-bound adversary provides its own implementation.

use crate::error::{OracleError, SearchError};
use crate::explored::ExploredTree;
use crate::model::{NodeId, NodeInfo, TreeInstance};
use crate::oracle::{InstrumentedOracle, OracleAnswer, OracleMode};
use crate::walker::{Direction, Walker};

pub trait SearchEnv {
    /// The root, which is revealed before the search starts.
    fn root(&self) -> NodeInfo;

    fn step(&mut self, direction: Direction) -> Result<NodeInfo, SearchError>;

    fn query(&mut self, q: NodeId) -> Result<OracleAnswer, SearchError>;

    fn steps(&self) -> u64;

    fn oracle_calls(&self) -> u64;

    /// Hook invoked after every trim of an explored tree.
    fn after_trim(&mut self, _tree: &ExploredTree) {}
}

/// Checks, after every trim, that the target did not end up inside a stubbed
/// subtree or among the nodes ruled out by earlier answers.
#[derive(Debug, Clone, Default)]
pub struct TrimAudit {
    pub checks: u64,
    pub violations: Vec<String>,
}

impl TrimAudit {
    pub fn check(&mut self, instance: &TreeInstance, tree: &ExploredTree) {
        self.checks += 1;
        let target = instance.target();
        for (parent, side) in tree.stub_slots().chain(tree.pruned_slots()) {
            match instance.record(parent).child(side) {
                Some(child) if instance.in_subtree(child, target) => self.violations.push(format!(
                    "target {target} lies below closed child {child} ({side:?} of {parent})"
                )),
                Some(_) => {}
                None => self
                    .violations
                    .push(format!("closed slot on missing {side:?} child of {parent}")),
            }
        }
        if tree.is_excluded(target) {
            self.violations
                .push(format!("target {target} was excluded"));
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A walker and an oracle over one ground-truth instance.
#[derive(Debug, Clone)]
pub struct Session<'a> {
    instance: &'a TreeInstance,
    walker: Walker<'a>,
    oracle: InstrumentedOracle<'a>,
    audit: Option<TrimAudit>,
}

impl<'a> Session<'a> {
    pub fn new(instance: &'a TreeInstance) -> Self {
        Self::with_mode(instance, OracleMode::AnyNode)
    }

    pub fn with_mode(instance: &'a TreeInstance, mode: OracleMode) -> Self {
        Session {
            instance,
            walker: Walker::new(instance),
            oracle: InstrumentedOracle::new(instance, mode),
            audit: None,
        }
    }

    /// A session that audits every trim against the ground truth.
    pub fn audited(instance: &'a TreeInstance) -> Self {
        Session {
            audit: Some(TrimAudit::default()),
            ..Self::new(instance)
        }
    }

    pub fn instance(&self) -> &'a TreeInstance {
        self.instance
    }

    pub fn walker(&self) -> &Walker<'a> {
        &self.walker
    }

    pub fn audit(&self) -> Option<&TrimAudit> {
        self.audit.as_ref()
    }
}

impl SearchEnv for Session<'_> {
    fn root(&self) -> NodeInfo {
        self.walker.root_info()
    }

    fn step(&mut self, direction: Direction) -> Result<NodeInfo, SearchError> {
        Ok(self.walker.move_to(direction)?)
    }

    fn query(&mut self, q: NodeId) -> Result<OracleAnswer, SearchError> {
        if !self.instance.contains(q) {
            return Err(OracleError::UnknownNode(q).into());
        }
        if !self.walker.is_revealed(q) {
            return Err(OracleError::NotRevealed(q).into());
        }
        Ok(self.oracle.query(q)?)
    }

    fn steps(&self) -> u64 {
        self.walker.steps()
    }

    fn oracle_calls(&self) -> u64 {
        self.oracle.calls()
    }

    fn after_trim(&mut self, tree: &ExploredTree) {
        if let Some(audit) = self.audit.as_mut() {
            audit.check(self.instance, tree);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Side, TreeBuilder};

    #[test]
    fn unrevealed_nodes_cannot_be_queried() {
        let mut b = TreeBuilder::new();
        b.add_child(NodeId(0), Side::Left).unwrap();
        let t = b.build(1).unwrap();
        let mut s = Session::new(&t);
        assert_eq!(
            s.query(NodeId(1)),
            Err(SearchError::Oracle(OracleError::NotRevealed(NodeId(1))))
        );
        assert_eq!(s.oracle_calls(), 0);
        s.step(Direction::OnlyChild).unwrap();
        assert_eq!(s.query(NodeId(1)), Ok(OracleAnswer::TargetLarger));
        assert_eq!(s.steps(), 1);
    }
}
