//! Multi-step attraction through a DAG.
//!
//! For a real node `v` and target sets `V_1..V_k` of real nodes, `Exists`
//! attracts from `v` if it can force every play leaving `v` to reach a real
//! node `v'` (the first real node after `v`, possibly `v` itself) with
//! `v' ∈ V_p`, where `p` is the largest priority among `v` and the DAG nodes
//! strictly between `v` and `v'`. The exit node's own priority is not counted;
//! with an empty DAG this is exactly one application of the parity fixpoint
//! body.
//!
//! Evaluation is a backward pass over the DAG in reverse topological order.
//! Each DAG node gets a bit mask over accumulated priorities `q` saying
//! whether attraction succeeds when the node is entered with accumulated
//! priority `q`, so each DAG edge is inspected once per call.

use std::collections::{BTreeMap, BTreeSet};

use crate::arena::{NodeId, Player};
use crate::parity::{ParityGame, Priority};
use crate::set::NodeSet;

use super::{DagDecomposition, DagError};

/// A strategy and its outcomes for attraction from one real node.
///
/// Moves are keyed by `(node, q)` where `q` is the accumulated priority
/// including `node`; the source itself is keyed with its own priority.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttractionWitness {
    pub source: NodeId,
    pub choice: BTreeMap<(NodeId, Priority), NodeId>,
    /// Every `(exit node, accumulated priority)` reachable under `choice`.
    pub exits: BTreeSet<(NodeId, Priority)>,
}

/// Attractor evaluator prepared for one game and one decomposition. Target
/// sets and results live in the compact real-node domain (`0..m`, in the
/// order of [`DagDecomposition::real_list`]).
pub struct DagAttractor<'a> {
    game: &'a ParityGame,
    dag: &'a DagDecomposition,
    words: usize,
    cost_per_call: u64,
}

struct Masks {
    words: usize,
    bits: Vec<u64>,
}

impl Masks {
    fn get(&self, v: NodeId, q: Priority) -> bool {
        let q = q as usize;
        self.bits[v * self.words + q / 64] >> (q % 64) & 1 == 1
    }
}

impl<'a> DagAttractor<'a> {
    pub fn new(game: &'a ParityGame, dag: &'a DagDecomposition) -> Self {
        let arena = game.arena();
        let cost_per_call = arena
            .nodes()
            .map(|v| {
                if dag.is_dag(v) {
                    arena.successors(v).len()
                } else {
                    arena.successors(v).iter().filter(|&&w| dag.is_dag(w)).count()
                }
            })
            .sum::<usize>() as u64;
        DagAttractor {
            game,
            dag,
            words: (game.k() as usize + 1).div_ceil(64),
            cost_per_call,
        }
    }

    pub fn game(&self) -> &ParityGame {
        self.game
    }

    pub fn decomposition(&self) -> &DagDecomposition {
        self.dag
    }

    /// DAG edges inspected by one call of [`DagAttractor::apply`].
    pub fn cost_per_call(&self) -> u64 {
        self.cost_per_call
    }

    fn target_contains(&self, targets: &[NodeSet], q: Priority, real: NodeId) -> bool {
        let idx = self.dag.real_index(real).expect("real node");
        targets[q as usize - 1].contains(idx)
    }

    fn masks(&self, targets: &[NodeSet]) -> Masks {
        let game = self.game;
        let k = game.k();
        let n = game.node_count();
        let words = self.words;
        let mut bits = vec![0u64; n * words];
        let mut scratch = vec![0u64; words];
        let mut real_row = vec![0u64; words];
        let all_ones: Vec<u64> = {
            let mut row = vec![0u64; words];
            for q in 1..=k as usize {
                row[q / 64] |= 1 << (q % 64);
            }
            row
        };
        for &x in self.dag.topo_order().iter().rev() {
            let exists = game.owner(x) == Player::Exists;
            if exists {
                scratch.fill(0);
            } else {
                scratch.copy_from_slice(&all_ones);
            }
            for &y in game.successors(x) {
                let row: &[u64] = if self.dag.is_dag(y) {
                    &bits[y * words..(y + 1) * words]
                } else {
                    real_row.fill(0);
                    for q in 1..=k {
                        if self.target_contains(targets, q, y) {
                            real_row[q as usize / 64] |= 1 << (q as usize % 64);
                        }
                    }
                    &real_row
                };
                for (acc, r) in scratch.iter_mut().zip(row) {
                    if exists {
                        *acc |= r;
                    } else {
                        *acc &= r;
                    }
                }
            }
            // entering with q below the node's own priority behaves like q = Ω(x)
            let own = game.priority(x) as usize;
            let at_own = scratch[own / 64] >> (own % 64) & 1;
            for q in 1..own {
                let (w, b) = (q / 64, q % 64);
                scratch[w] = (scratch[w] & !(1 << b)) | (at_own << b);
            }
            bits[x * words..(x + 1) * words].copy_from_slice(&scratch);
        }
        Masks { words, bits }
    }

    fn ok(&self, masks: &Masks, targets: &[NodeSet], y: NodeId, q: Priority) -> bool {
        if self.dag.is_dag(y) {
            masks.get(y, q)
        } else {
            self.target_contains(targets, q, y)
        }
    }

    fn attracts(&self, masks: &Masks, targets: &[NodeSet], v: NodeId) -> bool {
        let q = self.game.priority(v);
        let mut succ = self.game.successors(v).iter();
        match self.game.owner(v) {
            Player::Exists => succ.any(|&y| self.ok(masks, targets, y, q)),
            Player::Forall => succ.all(|&y| self.ok(masks, targets, y, q)),
        }
    }

    /// Real nodes (compact indices) from which `Exists` attracts to `targets`.
    /// `targets[i - 1]` is `V_i`.
    pub fn apply(&self, targets: &[NodeSet]) -> NodeSet {
        let masks = self.masks(targets);
        let reals = self.dag.real_list();
        NodeSet::from_iter(
            reals.len(),
            reals
                .iter()
                .enumerate()
                .filter(|&(_, &v)| self.attracts(&masks, targets, v))
                .map(|(i, _)| i),
        )
    }

    /// Like [`DagAttractor::apply`], also returning a witness per attracted node
    /// (keyed by original node id).
    pub fn apply_with_witnesses(
        &self,
        targets: &[NodeSet],
    ) -> (NodeSet, BTreeMap<NodeId, AttractionWitness>) {
        let masks = self.masks(targets);
        let reals = self.dag.real_list();
        let mut result = NodeSet::empty(reals.len());
        let mut witnesses = BTreeMap::new();
        for (i, &v) in reals.iter().enumerate() {
            if self.attracts(&masks, targets, v) {
                result.insert(i);
                witnesses.insert(v, self.witness(&masks, targets, v));
            }
        }
        (result, witnesses)
    }

    fn witness(&self, masks: &Masks, targets: &[NodeSet], v: NodeId) -> AttractionWitness {
        let mut w = AttractionWitness {
            source: v,
            ..Default::default()
        };
        let mut seen = BTreeSet::new();
        let mut todo = vec![(v, self.game.priority(v))];
        while let Some((x, q)) = todo.pop() {
            let moves: Vec<NodeId> = if self.game.owner(x) == Player::Exists {
                let y = *self
                    .game
                    .successors(x)
                    .iter()
                    .find(|&&y| self.ok(masks, targets, y, q))
                    .expect("attracting exists node has a good successor");
                w.choice.insert((x, q), y);
                vec![y]
            } else {
                self.game.successors(x).to_vec()
            };
            for y in moves {
                if self.dag.is_dag(y) {
                    let next = (y, q.max(self.game.priority(y)));
                    if seen.insert(next) {
                        todo.push(next);
                    }
                } else {
                    w.exits.insert((y, q));
                }
            }
        }
        w
    }
}

fn check_targets(
    game: &ParityGame,
    dag: &DagDecomposition,
    targets: &[NodeSet],
) -> Result<(), DagError> {
    let k = game.k() as usize;
    if targets.len() != k {
        return Err(DagError::TargetCount {
            expected: k,
            got: targets.len(),
        });
    }
    for (index, t) in targets.iter().enumerate() {
        if t.capacity() != game.node_count() {
            return Err(DagError::Capacity {
                expected: game.node_count(),
                got: t.capacity(),
            });
        }
        if let Some(node) = t.iter().find(|&v| dag.is_dag(v)) {
            return Err(DagError::TargetNotReal {
                index: index + 1,
                node,
            });
        }
    }
    Ok(())
}

fn compact(dag: &DagDecomposition, set: &NodeSet) -> NodeSet {
    NodeSet::from_iter(
        dag.real_list().len(),
        set.iter().map(|v| dag.real_index(v).expect("checked real")),
    )
}

/// The DAG attractor on node-indexed sets. `targets[i - 1]` is `V_i` and must
/// contain only real nodes. Returns the attracted real nodes and a witness for
/// each of them.
pub fn dag_attractor(
    game: &ParityGame,
    dag: &DagDecomposition,
    targets: &[NodeSet],
) -> Result<(NodeSet, BTreeMap<NodeId, AttractionWitness>), DagError> {
    check_targets(game, dag, targets)?;
    let compact_targets: Vec<NodeSet> = targets.iter().map(|t| compact(dag, t)).collect();
    let attr = DagAttractor::new(game, dag);
    let (result, witnesses) = attr.apply_with_witnesses(&compact_targets);
    let expanded = NodeSet::from_iter(
        game.node_count(),
        result.iter().map(|i| dag.real_list()[i]),
    );
    Ok((expanded, witnesses))
}

/// Checks a witness by enumerating every play from `v`: `Exists` follows the
/// witness, `Forall` tries every edge, and each play stops at the first real
/// node after `v`. Every such exit `(v', p)` must satisfy `v' ∈ V_p`.
pub fn verify_attraction_witness(
    game: &ParityGame,
    dag: &DagDecomposition,
    targets: &[NodeSet],
    v: NodeId,
    witness: &AttractionWitness,
) -> bool {
    if witness.source != v || dag.is_dag(v) || targets.len() != game.k() as usize {
        return false;
    }

    fn walk(
        game: &ParityGame,
        dag: &DagDecomposition,
        targets: &[NodeSet],
        witness: &AttractionWitness,
        x: NodeId,
        q: Priority,
    ) -> bool {
        let moves: Vec<NodeId> = if game.owner(x) == Player::Exists {
            match witness.choice.get(&(x, q)) {
                Some(&y) if game.successors(x).contains(&y) => vec![y],
                _ => return false,
            }
        } else {
            game.successors(x).to_vec()
        };
        moves.into_iter().all(|y| {
            if dag.is_dag(y) {
                walk(game, dag, targets, witness, y, q.max(game.priority(y)))
            } else {
                targets[q as usize - 1].contains(y)
            }
        })
    }

    walk(game, dag, targets, witness, v, game.priority(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;
    use crate::dag::detect_positional_dag;
    use crate::solve::walukiewicz_step;
    use crate::testing::{random_parity, random_targets};
    use proptest::prelude::*;

    /// v (Exists, 1) -> w (Forall, 3, DAG) -> u (real, loop)
    fn chain() -> (ParityGame, DagDecomposition) {
        let arena = Arena::new(
            vec![Player::Exists, Player::Forall, Player::Exists],
            vec![vec![1], vec![2], vec![2, 0]],
        )
        .unwrap();
        let game = ParityGame::new(arena, vec![1, 3, 2]).unwrap();
        let dag = DagDecomposition::from_set(game.arena(), NodeSet::from_iter(3, [1])).unwrap();
        (game, dag)
    }

    fn targets(n: usize, k: usize, entries: &[(usize, usize)]) -> Vec<NodeSet> {
        let mut t = vec![NodeSet::empty(n); k];
        for &(i, v) in entries {
            t[i - 1].insert(v);
        }
        t
    }

    #[test]
    fn chain_accumulates_dag_priority() {
        let (g, d) = chain();
        let t = targets(3, 4, &[(3, 2)]);
        let (r, wit) = dag_attractor(&g, &d, &t).unwrap();
        assert!(r.contains(0));
        assert_eq!(wit[&0].exits, BTreeSet::from([(2, 3)]));
        assert!(verify_attraction_witness(&g, &d, &t, 0, &wit[&0]));
    }

    #[test]
    fn chain_rejects_wrong_level() {
        let (g, d) = chain();
        let t = targets(3, 4, &[(1, 2)]);
        let (r, _) = dag_attractor(&g, &d, &t).unwrap();
        assert!(!r.contains(0));
    }

    #[test]
    fn dag_nodes_in_targets_are_rejected() {
        let (g, d) = chain();
        let t = targets(3, 4, &[(1, 1)]);
        assert_eq!(
            dag_attractor(&g, &d, &t),
            Err(DagError::TargetNotReal { index: 1, node: 1 })
        );
    }

    #[test]
    fn tampered_witness_fails() {
        // Exists node 0 -> {1, 2}, both real loops; only 1 is a target
        let arena = Arena::new(
            vec![Player::Exists, Player::Exists, Player::Exists],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let g = ParityGame::new(arena, vec![2, 2, 2]).unwrap();
        let d = DagDecomposition::empty(g.arena());
        let t = targets(3, 2, &[(2, 1)]);
        let (r, wit) = dag_attractor(&g, &d, &t).unwrap();
        assert!(r.contains(0));
        let mut w = wit[&0].clone();
        assert!(verify_attraction_witness(&g, &d, &t, 0, &w));
        w.choice.insert((0, 2), 2);
        assert!(!verify_attraction_witness(&g, &d, &t, 0, &w));
    }

    /// Game-tree recursion over plays, without masks or memoization.
    fn attracts_by_recursion(g: &ParityGame, d: &DagDecomposition, t: &[NodeSet], x: NodeId, q: Priority) -> bool {
        let ok = |y: NodeId| {
            if d.is_dag(y) {
                attracts_by_recursion(g, d, t, y, q.max(g.priority(y)))
            } else {
                t[q as usize - 1].contains(y)
            }
        };
        match g.owner(x) {
            Player::Exists => g.successors(x).iter().any(|&y| ok(y)),
            Player::Forall => g.successors(x).iter().all(|&y| ok(y)),
        }
    }

    proptest! {
        #[test]
        fn masks_match_play_recursion(seed in any::<u64>(), tseed in any::<u64>()) {
            let g = random_parity(seed, 14, 3, 4);
            let d = detect_positional_dag(g.arena());
            let t = random_targets(tseed, &g, &d);
            let (r, _) = dag_attractor(&g, &d, &t).unwrap();
            for v in d.real_nodes().iter() {
                prop_assert_eq!(r.contains(v), attracts_by_recursion(&g, &d, &t, v, g.priority(v)));
            }
        }

        #[test]
        fn empty_dag_equals_parity_body(seed in any::<u64>(), tseed in any::<u64>()) {
            let g = random_parity(seed, 6, 2, 4);
            let d = DagDecomposition::empty(g.arena());
            let t = random_targets(tseed, &g, &d);
            let (r, wit) = dag_attractor(&g, &d, &t).unwrap();
            prop_assert_eq!(&r, &walukiewicz_step(&g, &t));
            for (v, w) in &wit {
                prop_assert!(verify_attraction_witness(&g, &d, &t, *v, w));
            }
        }

        #[test]
        fn witnesses_verify_on_detected_dags(seed in any::<u64>(), tseed in any::<u64>()) {
            let g = random_parity(seed, 14, 3, 4);
            let d = detect_positional_dag(g.arena());
            let t = random_targets(tseed, &g, &d);
            let (r, wit) = dag_attractor(&g, &d, &t).unwrap();
            prop_assert_eq!(r.len(), wit.len());
            for (v, w) in &wit {
                prop_assert!(verify_attraction_witness(&g, &d, &t, *v, w));
            }
        }
    }
}
