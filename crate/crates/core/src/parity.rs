//! Parity games and positional strategies.

use thiserror::Error;

use crate::arena::{Arena, NodeId, Player};
use crate::set::NodeSet;

pub type Priority = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("{nodes} nodes but {priorities} priorities")]
    PriorityCount { nodes: usize, priorities: usize },
    #[error("node {node} has priority 0; normalize priorities first")]
    ZeroPriority { node: NodeId },
}

/// A max-parity game with priorities in `1..=k`, `k` even.
///
/// `Exists` wins a play iff the largest priority seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    arena: Arena,
    priority: Vec<Priority>,
    k: Priority,
    levels: Vec<NodeSet>,
}

impl ParityGame {
    /// Builds a game from already-normalized priorities (all `>= 1`).
    /// `k` is the maximum priority rounded up to the next even number.
    pub fn new(arena: Arena, priority: Vec<Priority>) -> Result<ParityGame, GameError> {
        if priority.len() != arena.node_count() {
            return Err(GameError::PriorityCount {
                nodes: arena.node_count(),
                priorities: priority.len(),
            });
        }
        if let Some(node) = priority.iter().position(|&p| p == 0) {
            return Err(GameError::ZeroPriority { node });
        }
        let max = priority.iter().copied().max().unwrap_or(0);
        let k = (max + max % 2).max(2);
        let n = arena.node_count();
        let mut levels = vec![NodeSet::empty(n); k as usize + 1];
        for (v, &p) in priority.iter().enumerate() {
            levels[p as usize].insert(v);
        }
        Ok(ParityGame {
            arena,
            priority,
            k,
            levels,
        })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn node_count(&self) -> usize {
        self.arena.node_count()
    }

    pub fn priority(&self, v: NodeId) -> Priority {
        self.priority[v]
    }

    pub fn priorities(&self) -> &[Priority] {
        &self.priority
    }

    /// The (even) number of priority levels.
    pub fn k(&self) -> Priority {
        self.k
    }

    /// Nodes with priority exactly `i`; empty outside `1..=k`.
    pub fn level(&self, i: Priority) -> &NodeSet {
        static EMPTY: std::sync::OnceLock<NodeSet> = std::sync::OnceLock::new();
        self.levels
            .get(i as usize)
            .unwrap_or_else(|| EMPTY.get_or_init(|| NodeSet::empty(0)))
    }

    pub fn owner(&self, v: NodeId) -> Player {
        self.arena.owner(v)
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        self.arena.successors(v)
    }
}

/// Brings arbitrary non-negative priorities into `1..=k` with `k` even.
///
/// If priority 0 occurs every priority is shifted by 2, which keeps parities
/// and therefore winners unchanged.
pub fn normalize_priorities(arena: Arena, raw: &[Priority]) -> Result<ParityGame, GameError> {
    let shift = if raw.contains(&0) { 2 } else { 0 };
    ParityGame::new(arena, raw.iter().map(|&p| p + shift).collect())
}

/// Per-node winners of a solved game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinnerMap(pub Vec<Player>);

impl WinnerMap {
    pub fn from_region(n: usize, exists_region: &NodeSet) -> WinnerMap {
        WinnerMap(
            (0..n)
                .map(|v| {
                    if exists_region.contains(v) {
                        Player::Exists
                    } else {
                        Player::Forall
                    }
                })
                .collect(),
        )
    }

    pub fn winner(&self, v: NodeId) -> Player {
        self.0[v]
    }

    pub fn region(&self, player: Player) -> NodeSet {
        NodeSet::from_iter(
            self.0.len(),
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &p)| p == player)
                .map(|(v, _)| v),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A memoryless strategy for one player, defined on part of that player's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalStrategy {
    pub player: Player,
    moves: Vec<Option<NodeId>>,
}

impl PositionalStrategy {
    pub fn new(player: Player, node_count: usize) -> Self {
        PositionalStrategy {
            player,
            moves: vec![None; node_count],
        }
    }

    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.moves.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: NodeId, w: NodeId) {
        self.moves[v] = Some(w);
    }

    pub fn clear(&mut self, v: NodeId) {
        self.moves[v] = None;
    }

    pub fn domain(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.moves
            .iter()
            .enumerate()
            .filter_map(|(v, m)| m.map(|_| v))
    }
}
