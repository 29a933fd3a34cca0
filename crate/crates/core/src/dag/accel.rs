use crate::arena::{NodeId, Player};
use crate::fixpoint::NestedFixpointSpec;
use crate::parity::{ParityGame, WinnerMap};
use crate::set::NodeSet;
use crate::solve::SolveStats;

use super::{DagAttractor, DagDecomposition, SummarizedAttractor};

/// Winners on the real nodes, as computed over the restricted domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceleratedSolution {
    /// `Exists`-won real nodes (node-indexed, subset of the real nodes).
    pub exists_real: NodeSet,
    pub real: NodeSet,
    pub stats: SolveStats,
}

impl AcceleratedSolution {
    /// `None` for DAG nodes.
    pub fn winner(&self, v: NodeId) -> Option<Player> {
        if !self.real.contains(v) {
            None
        } else if self.exists_real.contains(v) {
            Some(Player::Exists)
        } else {
            Some(Player::Forall)
        }
    }
}

/// A large-step function over the compact real-node domain.
pub(crate) trait RealStep {
    fn apply(&self, targets: &[NodeSet]) -> NodeSet;
    fn cost_per_call(&self) -> u64;
}

impl RealStep for DagAttractor<'_> {
    fn apply(&self, targets: &[NodeSet]) -> NodeSet {
        DagAttractor::apply(self, targets)
    }

    fn cost_per_call(&self) -> u64 {
        DagAttractor::cost_per_call(self)
    }
}

impl RealStep for SummarizedAttractor {
    fn apply(&self, targets: &[NodeSet]) -> NodeSet {
        SummarizedAttractor::apply(self, targets)
    }

    fn cost_per_call(&self) -> u64 {
        SummarizedAttractor::cost_per_call(self)
    }
}

pub(crate) fn solve_with_step(
    game: &ParityGame,
    dag: &DagDecomposition,
    step: &dyn RealStep,
) -> AcceleratedSolution {
    let m = dag.real_list().len();
    let mut spec = NestedFixpointSpec::new(m, game.k() as usize, |ys: &[NodeSet]| step.apply(ys))
        .expect("normalized games have even k >= 2");
    let result = spec.evaluate();
    let exists_real = NodeSet::from_iter(
        game.node_count(),
        result.value.iter().map(|i| dag.real_list()[i]),
    );
    AcceleratedSolution {
        exists_real,
        real: dag.real_nodes().clone(),
        stats: SolveStats {
            f_evaluations: result.evaluations,
            cpre_evaluations: 0,
            attractor_cost: result.evaluations * step.cost_per_call(),
        },
    }
}

/// Solves the real nodes by the nested fixpoint of the DAG attractor over
/// `V \ W` only.
pub fn solve_accelerated(game: &ParityGame, dag: &DagDecomposition) -> AcceleratedSolution {
    solve_with_step(game, dag, &DagAttractor::new(game, dag))
}

/// [`solve_accelerated`] with the closed-form attractor of
/// [`SummarizedAttractor`]; `None` if the DAG has an `Exists` choice.
pub fn solve_summarized(game: &ParityGame, dag: &DagDecomposition) -> Option<AcceleratedSolution> {
    SummarizedAttractor::new(game, dag).map(|step| solve_with_step(game, dag, &step))
}

/// Extends real-node winners to the DAG nodes. A DAG node is won by `Exists`
/// iff `Exists` can force the play through the DAG into an `Exists`-won real
/// node.
pub fn extend_to_dag(game: &ParityGame, dag: &DagDecomposition, exists_real: &NodeSet) -> WinnerMap {
    let n = game.node_count();
    let mut won = exists_real.intersection(dag.real_nodes());
    for &w in dag.topo_order().iter().rev() {
        let mut succ = game.successors(w).iter();
        let wins = match game.owner(w) {
            Player::Exists => succ.any(|&y| won.contains(y)),
            Player::Forall => succ.all(|&y| won.contains(y)),
        };
        if wins {
            won.insert(w);
        }
    }
    WinnerMap::from_region(n, &won)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;
    use crate::dag::detect_positional_dag;
    use crate::solve::{solve_baseline, solve_zielonka};
    use crate::testing::random_parity;
    use proptest::prelude::*;

    #[test]
    fn empty_dag_matches_baseline_exactly() {
        let g = random_parity(7, 12, 3, 4);
        let d = DagDecomposition::empty(g.arena());
        let acc = solve_accelerated(&g, &d);
        let (w, stats) = solve_baseline(&g);
        assert_eq!(acc.exists_real, w.region(Player::Exists));
        assert_eq!(acc.stats.f_evaluations, stats.f_evaluations);
        assert_eq!(acc.stats.attractor_cost, 0);
    }

    #[test]
    fn two_cycle_with_hanging_chain() {
        // real 0 (Exists, 1) <-> 1 (Forall, 2); 0 also enters a 10-node Forall
        // chain 2..=11 of priority 1 that returns to 1
        let mut owner = vec![Player::Exists, Player::Forall];
        let mut succ = vec![vec![1, 2], vec![0]];
        for i in 2..12 {
            owner.push(Player::Forall);
            succ.push(vec![if i == 11 { 1 } else { i + 1 }]);
        }
        let mut prio = vec![1, 2];
        prio.extend(std::iter::repeat_n(1, 10));
        let g = ParityGame::new(Arena::new(owner, succ).unwrap(), prio).unwrap();
        let d = detect_positional_dag(g.arena());
        assert!((2..12).all(|v| d.is_dag(v)));
        let acc = solve_accelerated(&g, &d);
        let (w, base) = solve_baseline(&g);
        for v in d.real_nodes().iter() {
            assert_eq!(acc.winner(v), Some(w.winner(v)));
        }
        assert!(acc.stats.f_evaluations < base.f_evaluations);
        let sum = solve_summarized(&g, &d).unwrap();
        assert_eq!(sum.exists_real, acc.exists_real);
        assert_eq!(sum.stats.f_evaluations, acc.stats.f_evaluations);
        assert!(sum.stats.attractor_cost < acc.stats.attractor_cost);
        assert_eq!(extend_to_dag(&g, &d, &acc.exists_real), w);
    }

    #[test]
    fn extension_examples() {
        // Forall 2 -> {0, 1}; Exists 3 -> {0, 4}; 0, 1 won by Exists, 4 by Forall
        let arena = Arena::new(
            vec![Player::Exists, Player::Exists, Player::Forall, Player::Exists, Player::Exists],
            vec![vec![0], vec![1], vec![0, 1], vec![0, 4], vec![4]],
        )
        .unwrap();
        let g = ParityGame::new(arena, vec![2, 2, 1, 1, 1]).unwrap();
        let d = DagDecomposition::from_set(g.arena(), NodeSet::from_iter(5, [2, 3])).unwrap();
        let w = extend_to_dag(&g, &d, &NodeSet::from_iter(5, [0, 1]));
        assert_eq!(w.winner(2), Player::Exists);
        assert_eq!(w.winner(3), Player::Exists);
    }

    proptest! {
        #[test]
        fn accelerated_agrees_with_zielonka(seed in any::<u64>()) {
            let g = random_parity(seed, 16, 3, 4);
            let d = detect_positional_dag(g.arena());
            let acc = solve_accelerated(&g, &d);
            let z = solve_zielonka(&g).winners;
            for v in d.real_nodes().iter() {
                prop_assert_eq!(acc.winner(v), Some(z.winner(v)));
            }
            prop_assert_eq!(extend_to_dag(&g, &d, &acc.exists_real), z);
            prop_assert!(
                acc.stats.attractor_cost
                    <= acc.stats.f_evaluations * d.incident_edge_count(g.arena()) as u64
            );
        }

        #[test]
        fn maximal_acyclic_sets_also_work(seed in any::<u64>()) {
            // every node except one per cycle: take the complement of the
            // cycle breakers without positionality demotions
            let g = random_parity(seed, 12, 2, 4);
            let d = detect_positional_dag(g.arena());
            let mut w = d.dag_nodes().clone();
            for &v in d.positionality_demotions() {
                w.insert(v);
            }
            let wide = DagDecomposition::from_set(g.arena(), w).unwrap();
            let acc = solve_accelerated(&g, &wide);
            let (base, _) = solve_baseline(&g);
            for v in wide.real_nodes().iter() {
                prop_assert_eq!(acc.winner(v), Some(base.winner(v)));
            }
        }
    }
}
