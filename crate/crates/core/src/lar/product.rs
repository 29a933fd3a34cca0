use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::arena::{Arena, NodeId, Player};
use crate::dag::DagDecomposition;
use crate::parity::{normalize_priorities, ParityGame, Priority};
use crate::set::NodeSet;

use super::{EmersonLeiGame, Permutation};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("product exceeds the budget of {0} nodes")]
    Product(usize),
    #[error("oracle would enumerate more than {0} strategies")]
    Oracle(u64),
}

/// Priority of `(v, π)`: with `p` the rightmost 1-based position of `π`
/// holding a color of `v` (0 if `v` is colorless), `2p` if the first `p`
/// colors satisfy the objective and `2p + 1` otherwise.
pub fn lar_priority(game: &EmersonLeiGame, v: NodeId, pi: &Permutation) -> Priority {
    let colors = game.coloring(v);
    let p = (0..pi.len())
        .rev()
        .find(|&i| colors.contains(pi.get(i)))
        .map_or(0, |i| i + 1);
    let base = 2 * p as Priority;
    if game.objective().eval(pi.prefix(p)) {
        base
    } else {
        base + 1
    }
}

/// The reachable part of the later-appearance-record product.
#[derive(Clone, Debug)]
pub struct ProductGame {
    parity: ParityGame,
    raw_priority: Vec<Priority>,
    states: Vec<(NodeId, Permutation)>,
    index: HashMap<(NodeId, Permutation), usize>,
    initial: Permutation,
}

impl ProductGame {
    /// The normalized parity game over product node ids.
    pub fn parity(&self) -> &ParityGame {
        &self.parity
    }

    /// Priorities before normalization, in `0..=2|C|+1`.
    pub fn raw_priorities(&self) -> &[Priority] {
        &self.raw_priority
    }

    pub fn node_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, id: usize) -> (NodeId, &Permutation) {
        let (v, ref pi) = self.states[id];
        (v, pi)
    }

    pub fn id(&self, v: NodeId, pi: &Permutation) -> Option<usize> {
        self.index.get(&(v, pi.clone())).copied()
    }

    pub fn initial_permutation(&self) -> &Permutation {
        &self.initial
    }

    /// Id of `(v, π0)`, if it was an initial or reachable node.
    pub fn initial_id(&self, v: NodeId) -> Option<usize> {
        self.id(v, &self.initial)
    }
}

/// Breadth-first closure of `{(v, π0) | v ∈ initials}` under
/// `(v, π) -> (w, π@γ(v))`. Fails once more than `budget` nodes are found.
pub fn build_product(
    game: &EmersonLeiGame,
    initials: &[NodeId],
    budget: usize,
) -> Result<ProductGame, BudgetError> {
    let initial = game.initial_permutation();
    let mut states: Vec<(NodeId, Permutation)> = Vec::new();
    let mut index: HashMap<(NodeId, Permutation), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |v: NodeId, pi: Permutation, states: &mut Vec<_>, queue: &mut VecDeque<usize>| {
        if let Some(&id) = index.get(&(v, pi.clone())) {
            return Ok(id);
        }
        if states.len() >= budget {
            return Err(BudgetError::Product(budget));
        }
        let id = states.len();
        index.insert((v, pi.clone()), id);
        states.push((v, pi));
        queue.push_back(id);
        Ok(id)
    };
    for &v in initials {
        intern(v, initial.clone(), &mut states, &mut queue)?;
    }
    let mut successors: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (v, pi) = states[id].clone();
        let next = pi.at(game.coloring(v));
        let mut out = Vec::with_capacity(game.arena().successors(v).len());
        for &w in game.arena().successors(v) {
            out.push(intern(w, next.clone(), &mut states, &mut queue)?);
        }
        if successors.len() <= id {
            successors.resize(id + 1, Vec::new());
        }
        successors[id] = out;
    }
    successors.resize(states.len(), Vec::new());
    let owner: Vec<Player> = states.iter().map(|(v, _)| game.arena().owner(*v)).collect();
    let raw_priority: Vec<Priority> = states.iter().map(|(v, pi)| lar_priority(game, *v, pi)).collect();
    let arena = Arena::new(owner, successors).expect("product edges mirror a valid arena");
    let parity = normalize_priorities(arena, &raw_priority).expect("one priority per node");
    let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    Ok(ProductGame {
        parity,
        raw_priority,
        states,
        index,
        initial,
    })
}

/// Outcome of lifting a DAG `W` of the original arena to the product.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DagPreservation {
    /// Product nodes whose original node lies in `W`.
    pub lifted: usize,
    pub acyclic: bool,
    /// `Exists`-owned lifted nodes with no real entry.
    pub zero_entry: Vec<usize>,
    /// `Exists`-owned lifted nodes with two or more real entries.
    pub multi_entry: Vec<usize>,
}

impl DagPreservation {
    pub fn is_positional_dag(&self) -> bool {
        self.acyclic && self.zero_entry.is_empty() && self.multi_entry.is_empty()
    }
}

pub fn dag_preservation_report(
    game: &EmersonLeiGame,
    dag: &DagDecomposition,
    product: &ProductGame,
) -> DagPreservation {
    let n = product.node_count();
    let lifted = NodeSet::from_iter(n, (0..n).filter(|&id| dag.is_dag(product.state(id).0)));
    let arena = product.parity().arena();
    let mut report = DagPreservation {
        lifted: lifted.len(),
        ..Default::default()
    };
    let Ok(d) = DagDecomposition::from_set(arena, lifted) else {
        return report;
    };
    report.acyclic = true;
    for id in d.dag_nodes().iter() {
        if game.arena().owner(product.state(id).0) != Player::Exists {
            continue;
        }
        match d.real_entries(id).len() {
            0 => report.zero_entry.push(id),
            1 => {}
            _ => report.multi_entry.push(id),
        }
    }
    report
}

/// Whether `W × Π(C)`, restricted to the product's reachable nodes, is a
/// positional DAG of the product arena.
pub fn check_dag_preservation(
    game: &EmersonLeiGame,
    dag: &DagDecomposition,
    product: &ProductGame,
) -> bool {
    dag_preservation_report(game, dag, product).is_positional_dag()
}
