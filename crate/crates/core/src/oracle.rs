//! The target oracle.

use std::cmp::Ordering;

use crate::error::OracleError;
use crate::model::{NodeId, TreeInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleAnswer {
    Found,
    /// The target precedes the queried node in inorder.
    TargetSmaller,
    /// The target follows the queried node in inorder.
    TargetLarger,
}

impl OracleAnswer {
    /// Answer a consistent oracle gives for `query` when the target compares
    /// as `target_vs_query` against it.
    pub fn from_ordering(target_vs_query: Ordering) -> Self {
        match target_vs_query {
            Ordering::Less => OracleAnswer::TargetSmaller,
            Ordering::Equal => OracleAnswer::Found,
            Ordering::Greater => OracleAnswer::TargetLarger,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OracleAnswer::Found => "found",
            OracleAnswer::TargetSmaller => "smaller",
            OracleAnswer::TargetLarger => "larger",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleMode {
    #[default]
    AnyNode,
    LeavesOnly,
}

/// Ground-truth oracle that counts accepted queries.
#[derive(Debug, Clone)]
pub struct InstrumentedOracle<'a> {
    instance: &'a TreeInstance,
    calls: u64,
    mode: OracleMode,
}

impl<'a> InstrumentedOracle<'a> {
    pub fn new(instance: &'a TreeInstance, mode: OracleMode) -> Self {
        InstrumentedOracle {
            instance,
            calls: 0,
            mode,
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn query(&mut self, q: NodeId) -> Result<OracleAnswer, OracleError> {
        if !self.instance.contains(q) {
            return Err(OracleError::UnknownNode(q));
        }
        if self.mode == OracleMode::LeavesOnly && !self.instance.kind(q).is_leaf() {
            return Err(OracleError::NotALeaf(q));
        }
        self.calls += 1;
        Ok(OracleAnswer::from_ordering(
            self.instance.inorder_compare(self.instance.target(), q),
        ))
    }
}
