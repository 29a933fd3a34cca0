//! Game arenas: dense directed graphs whose nodes are owned by one of two players.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;

/// The two players. `Exists` is the even (maximizing) player.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Exists,
    Forall,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Exists => Player::Forall,
            Player::Forall => Player::Exists,
        }
    }

    /// The player who wins a play whose dominant priority is `priority`.
    pub fn of_parity(priority: u32) -> Player {
        if priority.is_multiple_of(2) {
            Player::Exists
        } else {
            Player::Forall
        }
    }

    /// 0 for `Exists`, 1 for `Forall` (the pgsolver owner encoding).
    pub fn index(self) -> usize {
        match self {
            Player::Exists => 0,
            Player::Forall => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::Exists),
            1 => Some(Player::Forall),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Exists => f.write_str("exists"),
            Player::Forall => f.write_str("forall"),
        }
    }
}

/// A single broken arena invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSuccessor { node: NodeId },
    SuccessorOutOfRange { node: NodeId, successor: NodeId },
    OwnerCountMismatch { owners: usize, nodes: usize },
    PredecessorMismatch { node: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSuccessor { node } => write!(f, "node {node} has no successor"),
            Violation::SuccessorOutOfRange { node, successor } => {
                write!(f, "node {node}: successor {successor} out of range")
            }
            Violation::OwnerCountMismatch { owners, nodes } => {
                write!(f, "{owners} owners given for {nodes} nodes")
            }
            Violation::PredecessorMismatch { node } => {
                write!(f, "node {node}: predecessor list is not the transpose of the edges")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid arena: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ArenaError {
    pub violations: Vec<Violation>,
}

/// Checks the raw parts of an arena without building it.
pub fn validate_arena(owner: &[Player], successors: &[Vec<NodeId>]) -> Vec<Violation> {
    let n = successors.len();
    let mut report = Vec::new();
    if owner.len() != n {
        report.push(Violation::OwnerCountMismatch {
            owners: owner.len(),
            nodes: n,
        });
    }
    for (node, succ) in successors.iter().enumerate() {
        if succ.is_empty() {
            report.push(Violation::NoSuccessor { node });
        }
        for &successor in succ {
            if successor >= n {
                report.push(Violation::SuccessorOutOfRange { node, successor });
            }
        }
    }
    report
}

/// An immutable arena. Every node has at least one successor and all
/// successor indices are in range; predecessors are derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    owner: Vec<Player>,
    successors: Vec<Vec<NodeId>>,
    predecessors: Vec<Vec<NodeId>>,
}

impl Arena {
    pub fn new(owner: Vec<Player>, successors: Vec<Vec<NodeId>>) -> Result<Arena, ArenaError> {
        let violations = validate_arena(&owner, &successors);
        if !violations.is_empty() {
            return Err(ArenaError { violations });
        }
        let predecessors = transpose(&successors);
        Ok(Arena {
            owner,
            successors,
            predecessors,
        })
    }

    /// Re-checks every invariant, including the predecessor transpose.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = validate_arena(&self.owner, &self.successors);
        let expected = transpose(&self.successors);
        for (node, (have, want)) in self.predecessors.iter().zip(&expected).enumerate() {
            if have != want {
                report.push(Violation::PredecessorMismatch { node });
            }
        }
        report
    }

    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    pub fn owner(&self, v: NodeId) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.successors[v]
    }

    pub fn predecessors(&self, v: NodeId) -> &[NodeId] {
        &self.predecessors[v]
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.successors
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }
}

fn transpose(successors: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let mut pred = vec![Vec::new(); successors.len()];
    for (v, succ) in successors.iter().enumerate() {
        for &w in succ {
            pred[w].push(v);
        }
    }
    pred
}
