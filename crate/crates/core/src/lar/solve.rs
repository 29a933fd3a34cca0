use std::collections::{BTreeMap, HashMap};

use crate::arena::{NodeId, Player};
use crate::dag::{detect_positional_dag, extend_to_dag, solve_accelerated};
use crate::parity::WinnerMap;
use crate::scc::{is_nontrivial, strongly_connected_components};
use crate::set::NodeSet;
use crate::solve::{solve_baseline, solve_zielonka, Engine, SolveStats};

use super::product::{build_product, BudgetError};
use super::{ColorSet, EmersonLeiGame, ObjectiveFormula, Permutation};

/// Largest number of positional strategies [`el_oracle`] will enumerate.
pub const ORACLE_STRATEGY_LIMIT: u64 = 1 << 20;

/// An `Exists` strategy with permutation memory: the memory is updated by
/// `π -> π@γ(v)` when leaving `v`, and moves depend on node and memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryStrategy {
    initial: Permutation,
    moves: BTreeMap<(NodeId, Permutation), NodeId>,
}

impl MemoryStrategy {
    pub fn new(initial: Permutation) -> MemoryStrategy {
        MemoryStrategy {
            initial,
            moves: BTreeMap::new(),
        }
    }

    pub fn initial(&self) -> &Permutation {
        &self.initial
    }

    pub fn update(&self, game: &EmersonLeiGame, pi: &Permutation, v: NodeId) -> Permutation {
        pi.at(game.coloring(v))
    }

    pub fn get_move(&self, v: NodeId, pi: &Permutation) -> Option<NodeId> {
        self.moves.get(&(v, pi.clone())).copied()
    }

    pub fn set_move(&mut self, v: NodeId, pi: Permutation, w: NodeId) {
        self.moves.insert((v, pi), w);
    }

    pub fn moves(&self) -> impl Iterator<Item = (NodeId, &Permutation, NodeId)> + '_ {
        self.moves.iter().map(|((v, pi), &w)| (*v, pi, w))
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ElSolution {
    /// Winner of `v`, i.e. of `(v, π0)` in the product.
    pub winners: WinnerMap,
    pub strategy: MemoryStrategy,
    pub stats: SolveStats,
    pub product_nodes: usize,
}

/// [`solve_el_with`] using Zielonka on the product.
pub fn solve_el(game: &EmersonLeiGame, budget: usize) -> Result<ElSolution, BudgetError> {
    solve_el_with(game, Engine::Zielonka, budget)
}

/// Solves the product from every `(v, π0)` with `engine`. The memory strategy
/// always comes from Zielonka's positional strategy on the product.
pub fn solve_el_with(
    game: &EmersonLeiGame,
    engine: Engine,
    budget: usize,
) -> Result<ElSolution, BudgetError> {
    let n = game.node_count();
    let all: Vec<NodeId> = (0..n).collect();
    let product = build_product(game, &all, budget)?;
    let pg = product.parity();
    let z = solve_zielonka(pg);
    let (product_winners, stats) = match engine {
        Engine::Zielonka => (z.winners.clone(), SolveStats::default()),
        Engine::Baseline => solve_baseline(pg),
        Engine::Accelerated => {
            let dag = detect_positional_dag(pg.arena());
            let acc = solve_accelerated(pg, &dag);
            (extend_to_dag(pg, &dag, &acc.exists_real), acc.stats)
        }
    };
    let winners = WinnerMap(
        (0..n)
            .map(|v| product_winners.winner(product.initial_id(v).expect("every node is initial")))
            .collect(),
    );
    let mut strategy = MemoryStrategy::new(product.initial_permutation().clone());
    for id in 0..product.node_count() {
        let (v, pi) = product.state(id);
        if game.arena().owner(v) != Player::Exists || z.winners.winner(id) != Player::Exists {
            continue;
        }
        if let Some(to) = z.exists_strategy.get(id) {
            strategy.set_move(v, pi.clone(), product.state(to).0);
        }
    }
    Ok(ElSolution {
        winners,
        strategy,
        stats,
        product_nodes: product.node_count(),
    })
}

/// Whether some strongly connected set of `alive` nodes with an internal
/// edge has a color union violating `phi`.
///
/// Any such set lies in an SCC. If that SCC's union differs from the set's,
/// removing the nodes of one extra color keeps the set intact, so recursing
/// on color removals finds every achievable union.
fn has_losing_cycle(
    adj: &[Vec<usize>],
    colors: &[ColorSet],
    phi: &ObjectiveFormula,
    alive: &[bool],
) -> bool {
    let restricted: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(x, out)| {
            if alive[x] {
                out.iter().copied().filter(|&y| alive[y]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    for comp in strongly_connected_components(&restricted) {
        if !alive[comp[0]] || !is_nontrivial(&comp, &restricted) {
            continue;
        }
        let union = comp.iter().fold(ColorSet::EMPTY, |u, &x| u.union(colors[x]));
        if !phi.eval(union) {
            return true;
        }
        for c in union.iter() {
            let mut sub = vec![false; adj.len()];
            for &x in &comp {
                sub[x] = !colors[x].contains(c);
            }
            if has_losing_cycle(adj, colors, phi, &sub) {
                return true;
            }
        }
    }
    false
}

/// Memory states `(v, π)` reachable from the starts when `Exists` plays
/// `choose` and `Forall` takes every edge. `None` if `choose` has no move.
fn restricted_closure(
    game: &EmersonLeiGame,
    starts: impl IntoIterator<Item = NodeId>,
    mut choose: impl FnMut(NodeId, &Permutation) -> Option<NodeId>,
) -> Option<(Vec<Vec<usize>>, Vec<ColorSet>)> {
    let pi0 = game.initial_permutation();
    let mut index: HashMap<(NodeId, Permutation), usize> = HashMap::new();
    let mut states: Vec<(NodeId, Permutation)> = Vec::new();
    let mut stack = Vec::new();
    for v in starts {
        let key = (v, pi0.clone());
        if !index.contains_key(&key) {
            index.insert(key.clone(), states.len());
            stack.push(states.len());
            states.push(key);
        }
    }
    let mut adj: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = stack.pop() {
        let (v, pi) = states[id].clone();
        let next = pi.at(game.coloring(v));
        let targets: Vec<NodeId> = match game.arena().owner(v) {
            Player::Exists => {
                let w = choose(v, &pi)?;
                if !game.arena().successors(v).contains(&w) {
                    return None;
                }
                vec![w]
            }
            Player::Forall => game.arena().successors(v).to_vec(),
        };
        let mut out = Vec::new();
        for w in targets {
            let key = (w, next.clone());
            let to = match index.get(&key) {
                Some(&to) => to,
                None => {
                    let to = states.len();
                    index.insert(key.clone(), to);
                    states.push(key);
                    stack.push(to);
                    to
                }
            };
            out.push(to);
        }
        if adj.len() < states.len() {
            adj.resize(states.len(), Vec::new());
        }
        adj[id] = out;
    }
    adj.resize(states.len(), Vec::new());
    let colors = states.iter().map(|(v, _)| game.coloring(*v)).collect();
    Some((adj, colors))
}

/// Whether `strategy` wins every node of `region` (started with the initial
/// memory) for `Exists`.
pub fn verify_el_strategy(game: &EmersonLeiGame, strategy: &MemoryStrategy, region: &NodeSet) -> bool {
    let Some((adj, colors)) = restricted_closure(game, region.iter(), |v, pi| strategy.get_move(v, pi))
    else {
        return false;
    };
    let alive = vec![true; adj.len()];
    !has_losing_cycle(&adj, &colors, game.objective(), &alive)
}

/// Brute force: `Exists` wins `v` iff some positional strategy on the
/// reachable memory states makes every reachable cycle's color union satisfy
/// the objective.
pub fn el_oracle(game: &EmersonLeiGame, v: NodeId) -> Result<Player, BudgetError> {
    // every move of Exists kept, to find the states a strategy may visit
    let mut choice_points: Vec<(NodeId, Permutation)> = Vec::new();
    {
        let pi0 = game.initial_permutation();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(v, pi0)];
        while let Some((x, pi)) = stack.pop() {
            if !seen.insert((x, pi.clone())) {
                continue;
            }
            if game.arena().owner(x) == Player::Exists && game.arena().successors(x).len() > 1 {
                choice_points.push((x, pi.clone()));
            }
            let next = pi.at(game.coloring(x));
            for &w in game.arena().successors(x) {
                stack.push((w, next.clone()));
            }
        }
    }
    choice_points.sort();
    let total = choice_points.iter().try_fold(1u64, |acc, (x, _)| {
        acc.checked_mul(game.arena().successors(*x).len() as u64)
            .filter(|&t| t <= ORACLE_STRATEGY_LIMIT)
    });
    if total.is_none() {
        return Err(BudgetError::Oracle(ORACLE_STRATEGY_LIMIT));
    }
    let slot: HashMap<(NodeId, Permutation), usize> =
        choice_points.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut digits = vec![0usize; choice_points.len()];
    loop {
        let choose = |x: NodeId, pi: &Permutation| {
            let succ = game.arena().successors(x);
            match slot.get(&(x, pi.clone())) {
                Some(&i) => Some(succ[digits[i]]),
                None => Some(succ[0]),
            }
        };
        let (adj, colors) = restricted_closure(game, [v], choose).expect("choices are successors");
        if !has_losing_cycle(&adj, &colors, game.objective(), &vec![true; adj.len()]) {
            return Ok(Player::Exists);
        }
        // odometer over the choice points
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(Player::Forall);
            }
            digits[i] += 1;
            if digits[i] < game.arena().successors(choice_points[i].0).len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;
    use crate::lar::{parity_to_el, DEFAULT_BUDGET};
    use crate::testing::{random_el, random_parity};
    use proptest::prelude::*;

    fn one_loop(phi: ObjectiveFormula) -> EmersonLeiGame {
        EmersonLeiGame::new(
            Arena::new(vec![Player::Exists], vec![vec![0]]).unwrap(),
            vec!["a".into()],
            vec![ColorSet::singleton(0)],
            phi,
        )
        .unwrap()
    }

    #[test]
    fn single_loop() {
        let g = one_loop(ObjectiveFormula::Inf(0));
        assert_eq!(solve_el(&g, DEFAULT_BUDGET).unwrap().winners.winner(0), Player::Exists);
        assert_eq!(el_oracle(&g, 0), Ok(Player::Exists));
        let g = one_loop(ObjectiveFormula::fin(0));
        assert_eq!(solve_el(&g, DEFAULT_BUDGET).unwrap().winners.winner(0), Player::Forall);
        assert_eq!(el_oracle(&g, 0), Ok(Player::Forall));
    }

    #[test]
    fn forall_cycle_with_fin() {
        let g = EmersonLeiGame::new(
            Arena::new(vec![Player::Forall; 2], vec![vec![1], vec![0]]).unwrap(),
            vec!["a".into()],
            vec![ColorSet::singleton(0), ColorSet::EMPTY],
            ObjectiveFormula::fin(0),
        )
        .unwrap();
        assert_eq!(el_oracle(&g, 0), Ok(Player::Forall));
        assert_eq!(el_oracle(&g, 1), Ok(Player::Forall));
    }

    #[test]
    fn bad_strategy_is_rejected() {
        // Exists at 0 may loop on a-colored 0 or move to colorless loop 1
        let g = EmersonLeiGame::new(
            Arena::new(vec![Player::Exists; 2], vec![vec![0, 1], vec![1]]).unwrap(),
            vec!["a".into()],
            vec![ColorSet::singleton(0), ColorSet::EMPTY],
            ObjectiveFormula::fin(0),
        )
        .unwrap();
        let pi0 = g.initial_permutation();
        let mut s = MemoryStrategy::new(pi0.clone());
        s.set_move(0, pi0.clone(), 0);
        assert!(!verify_el_strategy(&g, &s, &NodeSet::from_iter(2, [0])));
        assert!(verify_el_strategy(&g, &s, &NodeSet::empty(2)));
        let sol = solve_el(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.winners.0, vec![Player::Exists, Player::Exists]);
        assert!(verify_el_strategy(&g, &sol.strategy, &sol.winners.region(Player::Exists)));
    }

    #[test]
    fn engines_agree_on_products() {
        for seed in 0..20 {
            let g = random_el(seed, 5, 2, 2);
            let z = solve_el(&g, DEFAULT_BUDGET).unwrap();
            for e in [Engine::Baseline, Engine::Accelerated] {
                assert_eq!(solve_el_with(&g, e, DEFAULT_BUDGET).unwrap().winners, z.winners);
            }
        }
    }

    proptest! {
        #[test]
        fn solve_el_matches_oracle(seed in any::<u64>()) {
            let g = random_el(seed, 5, 2, 2);
            let sol = solve_el(&g, DEFAULT_BUDGET).unwrap();
            for v in 0..g.node_count() {
                prop_assert_eq!(Ok(sol.winners.winner(v)), el_oracle(&g, v));
            }
            prop_assert!(verify_el_strategy(&g, &sol.strategy, &sol.winners.region(Player::Exists)));
        }

        #[test]
        fn parity_encoding_round_trip(seed in any::<u64>()) {
            let g = random_parity(seed, 4, 2, 4);
            let el = parity_to_el(&g);
            let sol = solve_el(&el, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(sol.winners, solve_zielonka(&g).winners);
        }
    }
}
