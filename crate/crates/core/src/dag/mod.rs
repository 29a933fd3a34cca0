//! Acyclic sub-structures ("DAGs") in games and solving over the remaining
//! real nodes.
//!
//! A DAG is a node set `W` whose induced subgraph has no cycle. Every play
//! therefore leaves `W` after finitely many steps, so attraction through `W`
//! can be summarized as one large step between real nodes `V \ W`.

mod accel;
mod attractor;
mod summary;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arena::{Arena, NodeId, Player};
use crate::scc::{is_nontrivial, strongly_connected_components, topological_order};
use crate::set::NodeSet;

pub use accel::{extend_to_dag, solve_accelerated, solve_summarized, AcceleratedSolution};
pub use attractor::{
    dag_attractor, verify_attraction_witness, AttractionWitness, DagAttractor,
};
pub use summary::SummarizedAttractor;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DagError {
    #[error("node set contains a cycle through node {0}")]
    Cyclic(NodeId),
    #[error("target set {index} contains DAG node {node}")]
    TargetNotReal { index: usize, node: NodeId },
    #[error("expected {expected} target sets, got {got}")]
    TargetCount { expected: usize, got: usize },
    #[error("set capacity {got} does not match node count {expected}")]
    Capacity { expected: usize, got: usize },
}

/// A DAG `W` together with its real nodes, a topological order of `W`, and
/// for each DAG node the real nodes that reach it through `W` alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagDecomposition {
    dag: NodeSet,
    real: NodeSet,
    topo_order: Vec<NodeId>,
    real_entries: Vec<Vec<NodeId>>,
    real_nodes: Vec<NodeId>,
    real_index: Vec<Option<usize>>,
    cycle_breaks: Vec<NodeId>,
    demotions: Vec<NodeId>,
}

impl DagDecomposition {
    /// The trivial decomposition `W = ∅`.
    pub fn empty(arena: &Arena) -> Self {
        Self::from_set(arena, NodeSet::empty(arena.node_count())).expect("empty set is acyclic")
    }

    /// Wraps an arbitrary acyclic set. Positionality is not required; see
    /// [`DagDecomposition::is_positional`].
    pub fn from_set(arena: &Arena, dag: NodeSet) -> Result<Self, DagError> {
        let n = arena.node_count();
        if dag.capacity() != n {
            return Err(DagError::Capacity {
                expected: n,
                got: dag.capacity(),
            });
        }
        let members: Vec<bool> = (0..n).map(|v| dag.contains(v)).collect();
        let topo_order = match topological_order(arena.adjacency(), &members) {
            Some(order) => order,
            None => {
                let witness = (0..n)
                    .find(|&v| members[v] && arena.successors(v).contains(&v))
                    .or_else(|| dag.iter().next())
                    .unwrap_or(0);
                return Err(DagError::Cyclic(witness));
            }
        };
        let real = dag.complement();
        let real_nodes = real.to_vec();
        let mut real_index = vec![None; n];
        for (i, &v) in real_nodes.iter().enumerate() {
            real_index[v] = Some(i);
        }
        let real_entries = entries(arena, &dag, &topo_order);
        Ok(DagDecomposition {
            dag,
            real,
            topo_order,
            real_entries,
            real_nodes,
            real_index,
            cycle_breaks: Vec::new(),
            demotions: Vec::new(),
        })
    }

    pub fn dag_nodes(&self) -> &NodeSet {
        &self.dag
    }

    pub fn real_nodes(&self) -> &NodeSet {
        &self.real
    }

    /// Real nodes in ascending order; position `i` is the node's index in the
    /// restricted fixpoint domain.
    pub fn real_list(&self) -> &[NodeId] {
        &self.real_nodes
    }

    pub fn real_index(&self, v: NodeId) -> Option<usize> {
        self.real_index[v]
    }

    pub fn is_dag(&self, v: NodeId) -> bool {
        self.dag.contains(v)
    }

    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo_order
    }

    /// Real nodes from which `w` is reachable without visiting another real
    /// node; empty for real `w`.
    pub fn real_entries(&self, w: NodeId) -> &[NodeId] {
        &self.real_entries[w]
    }

    /// Every `Exists` node of `W` has exactly one real entry.
    pub fn is_positional(&self, arena: &Arena) -> bool {
        self.dag
            .iter()
            .filter(|&w| arena.owner(w) == Player::Exists)
            .all(|w| self.real_entries[w].len() == 1)
    }

    /// Nodes made real to break cycles during detection.
    pub fn cycle_breaks(&self) -> &[NodeId] {
        &self.cycle_breaks
    }

    /// `Exists` nodes made real during detection because they did not have
    /// exactly one real entry.
    pub fn positionality_demotions(&self) -> &[NodeId] {
        &self.demotions
    }

    /// Edges with at least one endpoint in `W`.
    pub fn incident_edge_count(&self, arena: &Arena) -> usize {
        arena
            .nodes()
            .map(|v| {
                arena
                    .successors(v)
                    .iter()
                    .filter(|&&w| self.dag.contains(v) || self.dag.contains(w))
                    .count()
            })
            .sum()
    }
}

fn entries(arena: &Arena, dag: &NodeSet, topo_order: &[NodeId]) -> Vec<Vec<NodeId>> {
    let mut result: Vec<Vec<NodeId>> = vec![Vec::new(); arena.node_count()];
    for &w in topo_order {
        let mut acc = BTreeSet::new();
        for &u in arena.predecessors(w) {
            if dag.contains(u) {
                acc.extend(result[u].iter().copied());
            } else {
                acc.insert(u);
            }
        }
        result[w] = acc.into_iter().collect();
    }
    result
}

/// Finds a positional DAG.
///
/// Starting from all nodes without a self-loop, cycles are broken greedily:
/// in every non-trivial strongly connected component of the remaining set the
/// node with the largest `in * out` degree inside the component (smallest id
/// on ties) becomes real, until the set is acyclic. Nodes on no cycle are never
/// removed. Then, in topological order, every `Exists` node whose number of
/// real entries is not exactly one becomes real.
pub fn detect_positional_dag(arena: &Arena) -> DagDecomposition {
    let n = arena.node_count();
    let mut in_dag: Vec<bool> = (0..n).map(|v| !arena.successors(v).contains(&v)).collect();
    let mut cycle_breaks: Vec<NodeId> = (0..n).filter(|&v| !in_dag[v]).collect();

    loop {
        let adj: Vec<Vec<NodeId>> = (0..n)
            .map(|v| {
                if in_dag[v] {
                    arena.successors(v).iter().copied().filter(|&w| in_dag[w]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let mut broke = false;
        for comp in strongly_connected_components(&adj) {
            if !is_nontrivial(&comp, &adj) {
                continue;
            }
            let inside: BTreeSet<NodeId> = comp.iter().copied().collect();
            let pick = comp
                .iter()
                .copied()
                .max_by_key(|&v| {
                    let out = adj[v].iter().filter(|w| inside.contains(w)).count();
                    let inn = arena
                        .predecessors(v)
                        .iter()
                        .filter(|u| inside.contains(u) && in_dag[**u])
                        .count();
                    (out * inn, std::cmp::Reverse(v))
                })
                .expect("non-trivial component is non-empty");
            in_dag[pick] = false;
            cycle_breaks.push(pick);
            broke = true;
        }
        if !broke {
            break;
        }
    }

    let topo = topological_order(arena.adjacency(), &in_dag).expect("cycles were broken");
    let mut entry_sets: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    let mut demotions = Vec::new();
    for &w in &topo {
        let mut acc = BTreeSet::new();
        for &u in arena.predecessors(w) {
            if in_dag[u] {
                acc.extend(entry_sets[u].iter().copied());
            } else {
                acc.insert(u);
            }
        }
        if arena.owner(w) == Player::Exists && acc.len() != 1 {
            in_dag[w] = false;
            demotions.push(w);
        } else {
            entry_sets[w] = acc;
        }
    }

    let dag = NodeSet::from_iter(n, (0..n).filter(|&v| in_dag[v]));
    let mut decomposition =
        DagDecomposition::from_set(arena, dag).expect("subset of an acyclic set is acyclic");
    cycle_breaks.sort_unstable();
    decomposition.cycle_breaks = cycle_breaks;
    decomposition.demotions = demotions;
    decomposition
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::random_parity;
    use proptest::prelude::*;

    #[test]
    fn self_loop_is_real() {
        let arena = Arena::new(vec![Player::Exists], vec![vec![0]]).unwrap();
        let d = detect_positional_dag(&arena);
        assert!(d.dag_nodes().is_empty());
    }

    #[test]
    fn forall_chain_between_loops() {
        // r0 -> w1 -> w2 -> r3, r0 and r3 carry self-loops
        let arena = Arena::new(
            vec![Player::Exists, Player::Forall, Player::Forall, Player::Exists],
            vec![vec![0, 1], vec![2], vec![3], vec![3]],
        )
        .unwrap();
        let d = detect_positional_dag(&arena);
        assert_eq!(d.dag_nodes().to_vec(), vec![1, 2]);
        assert_eq!(d.real_entries(1), &[0]);
        assert_eq!(d.real_entries(2), &[0]);
        assert!(d.is_positional(&arena));
    }

    #[test]
    fn diamond_demotes_shared_exists_node() {
        // r0, r1 (loops) both reach Exists node 2, which moves to r3 (loop)
        let arena = Arena::new(
            vec![Player::Forall, Player::Forall, Player::Exists, Player::Forall],
            vec![vec![0, 2], vec![1, 2], vec![3], vec![3]],
        )
        .unwrap();
        let d = detect_positional_dag(&arena);
        assert!(!d.is_dag(2));
        assert_eq!(d.positionality_demotions(), &[2]);
    }

    #[test]
    fn cycle_is_broken_at_hub() {
        // hub 0 with two 2-cycles through 1 and 2
        let arena = Arena::new(
            vec![Player::Forall; 3],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        let d = detect_positional_dag(&arena);
        assert_eq!(d.cycle_breaks(), &[0]);
        assert_eq!(d.dag_nodes().to_vec(), vec![1, 2]);
    }

    #[test]
    fn from_set_rejects_cycles() {
        let arena = Arena::new(vec![Player::Forall; 2], vec![vec![1], vec![0]]).unwrap();
        assert!(matches!(
            DagDecomposition::from_set(&arena, NodeSet::full(2)),
            Err(DagError::Cyclic(_))
        ));
    }

    proptest! {
        #[test]
        fn detected_dags_are_acyclic_and_positional(seed in any::<u64>()) {
            let g = random_parity(seed, 20, 3, 4);
            let d = detect_positional_dag(g.arena());
            let members: Vec<bool> = (0..20).map(|v| d.is_dag(v)).collect();
            prop_assert!(topological_order(g.arena().adjacency(), &members).is_some());
            prop_assert!(d.is_positional(g.arena()));
            // nodes on no cycle are always kept
            let comps = strongly_connected_components(g.arena().adjacency());
            for comp in comps {
                if !is_nontrivial(&comp, g.arena().adjacency()) {
                    for v in comp {
                        if g.arena().owner(v) == Player::Forall {
                            prop_assert!(d.is_dag(v));
                        }
                    }
                }
            }
        }
    }
}
