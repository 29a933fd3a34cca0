//! Closed-form DAG attraction for DAGs without `Exists` choices.
//!
//! When every `Exists` node inside the DAG has a single successor, the plays
//! leaving a real node through one of its edges are fixed up to `Forall`'s
//! branching, so the set of `(exit, accumulated priority)` pairs per edge can
//! be computed once. Each attractor call then only looks at these summaries,
//! independent of how long the DAG paths are.

use std::collections::BTreeSet;

use crate::arena::Player;
use crate::parity::{ParityGame, Priority};
use crate::set::NodeSet;

use super::DagDecomposition;

pub struct SummarizedAttractor {
    owners: Vec<Player>,
    /// Per real node (compact order), per outgoing edge: `(exit index, q)`.
    exits: Vec<Vec<Vec<(usize, Priority)>>>,
    cost_per_call: u64,
}

impl SummarizedAttractor {
    /// `None` if some `Exists` node of the DAG has more than one successor.
    pub fn new(game: &ParityGame, dag: &DagDecomposition) -> Option<Self> {
        let n = game.node_count();
        if dag
            .dag_nodes()
            .iter()
            .any(|w| game.owner(w) == Player::Exists && game.successors(w).len() > 1)
        {
            return None;
        }
        // exits reachable from a DAG node, with the max priority seen from it on
        let mut from_dag: Vec<BTreeSet<(usize, Priority)>> = vec![BTreeSet::new(); n];
        for &w in dag.topo_order().iter().rev() {
            let own = game.priority(w);
            let mut acc = BTreeSet::new();
            for &y in game.successors(w) {
                match dag.real_index(y) {
                    Some(idx) => {
                        acc.insert((idx, own));
                    }
                    None => acc.extend(from_dag[y].iter().map(|&(e, p)| (e, p.max(own)))),
                }
            }
            from_dag[w] = acc;
        }
        let exits: Vec<Vec<Vec<(usize, Priority)>>> = dag
            .real_list()
            .iter()
            .map(|&v| {
                let own = game.priority(v);
                game.successors(v)
                    .iter()
                    .map(|&y| match dag.real_index(y) {
                        Some(idx) => vec![(idx, own)],
                        None => from_dag[y]
                            .iter()
                            .map(|&(e, p)| (e, p.max(own)))
                            .collect::<BTreeSet<_>>()
                            .into_iter()
                            .collect(),
                    })
                    .collect()
            })
            .collect();
        let cost_per_call = exits.iter().flatten().map(Vec::len).sum::<usize>() as u64;
        Some(SummarizedAttractor {
            owners: dag.real_list().iter().map(|&v| game.owner(v)).collect(),
            exits,
            cost_per_call,
        })
    }

    /// Summary entries inspected by one call.
    pub fn cost_per_call(&self) -> u64 {
        self.cost_per_call
    }

    /// Same contract as [`super::DagAttractor::apply`].
    pub fn apply(&self, targets: &[NodeSet]) -> NodeSet {
        let edge_ok = |edge: &Vec<(usize, Priority)>| {
            edge.iter().all(|&(e, q)| targets[q as usize - 1].contains(e))
        };
        NodeSet::from_iter(
            self.exits.len(),
            self.exits.iter().enumerate().filter_map(|(i, edges)| {
                let ok = match self.owners[i] {
                    Player::Exists => edges.iter().any(edge_ok),
                    Player::Forall => edges.iter().all(edge_ok),
                };
                ok.then_some(i)
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::{detect_positional_dag, DagAttractor};
    use crate::testing::{random_parity, random_targets};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_dag_attractor(seed in any::<u64>()) {
            let g = random_parity(seed, 18, 2, 4);
            let d = detect_positional_dag(g.arena());
            if let Some(s) = SummarizedAttractor::new(&g, &d) {
                let a = DagAttractor::new(&g, &d);
                let targets: Vec<NodeSet> = random_targets(seed, &g, &d)
                    .iter()
                    .map(|t| NodeSet::from_iter(d.real_list().len(), t.iter().filter_map(|v| d.real_index(v))))
                    .collect();
                prop_assert_eq!(s.apply(&targets), a.apply(&targets));
            }
        }
    }
}
