use std::collections::VecDeque;

use crate::arena::{Arena, Player};
use crate::parity::{ParityGame, PositionalStrategy, Priority, WinnerMap};
use crate::set::NodeSet;

use super::max_priority_in;

/// Winners plus positional strategies winning on the respective regions.
#[derive(Clone, Debug)]
pub struct ZielonkaSolution {
    pub winners: WinnerMap,
    pub exists_strategy: PositionalStrategy,
    pub forall_strategy: PositionalStrategy,
}

impl ZielonkaSolution {
    pub fn strategy(&self, player: Player) -> &PositionalStrategy {
        match player {
            Player::Exists => &self.exists_strategy,
            Player::Forall => &self.forall_strategy,
        }
    }
}

/// Recursive attractor decomposition on a normalized game.
pub fn solve_zielonka(game: &ParityGame) -> ZielonkaSolution {
    solve_zielonka_with_priorities(game.arena(), game.priorities())
}

/// Zielonka on arbitrary non-negative priorities (0 allowed).
pub fn solve_zielonka_with_priorities(arena: &Arena, priority: &[Priority]) -> ZielonkaSolution {
    let n = arena.node_count();
    let mut strategies = [
        PositionalStrategy::new(Player::Exists, n),
        PositionalStrategy::new(Player::Forall, n),
    ];
    let [win_exists, _] = recurse(arena, priority, NodeSet::full(n), &mut strategies);
    let [exists_strategy, forall_strategy] = strategies;
    ZielonkaSolution {
        winners: WinnerMap::from_region(n, &win_exists),
        exists_strategy,
        forall_strategy,
    }
}

/// Attractor of `target` for `player` inside `subgame`. Records attracting
/// moves for `player`'s nodes outside `target` into `strategy` when given.
pub fn attractor(
    arena: &Arena,
    subgame: &NodeSet,
    target: &NodeSet,
    player: Player,
    mut strategy: Option<&mut PositionalStrategy>,
) -> NodeSet {
    let n = arena.node_count();
    let mut attr = target.intersection(subgame);
    let mut remaining: Vec<usize> = (0..n)
        .map(|v| {
            if subgame.contains(v) {
                arena.successors(v).iter().filter(|&&w| subgame.contains(w)).count()
            } else {
                0
            }
        })
        .collect();
    let mut queue: VecDeque<usize> = attr.iter().collect();
    while let Some(w) = queue.pop_front() {
        for &v in arena.predecessors(w) {
            if !subgame.contains(v) || attr.contains(v) {
                continue;
            }
            let captured = if arena.owner(v) == player {
                if let Some(s) = strategy.as_deref_mut() {
                    s.set(v, w);
                }
                true
            } else {
                remaining[v] -= 1;
                remaining[v] == 0
            };
            if captured {
                attr.insert(v);
                queue.push_back(v);
            }
        }
    }
    attr
}

fn recurse(
    arena: &Arena,
    priority: &[Priority],
    subgame: NodeSet,
    strategies: &mut [PositionalStrategy; 2],
) -> [NodeSet; 2] {
    let n = arena.node_count();
    let Some(d) = max_priority_in(priority, &subgame) else {
        return [NodeSet::empty(n), NodeSet::empty(n)];
    };
    let player = Player::of_parity(d);
    let opponent = player.opponent();
    let top = NodeSet::from_iter(n, subgame.iter().filter(|&v| priority[v] == d));

    let a = attractor(arena, &subgame, &top, player, Some(&mut strategies[player.index()]));
    let sub = recurse(arena, priority, subgame.difference(&a), strategies);

    if sub[opponent.index()].is_empty() {
        // player wins everywhere; top nodes of player just stay inside
        for v in top.iter().filter(|&v| arena.owner(v) == player) {
            let w = arena
                .successors(v)
                .iter()
                .copied()
                .find(|&w| subgame.contains(w))
                .expect("subgames keep a successor for every node");
            strategies[player.index()].set(v, w);
        }
        let mut win = [NodeSet::empty(n), NodeSet::empty(n)];
        win[player.index()] = subgame;
        return win;
    }

    let b = attractor(
        arena,
        &subgame,
        &sub[opponent.index()],
        opponent,
        Some(&mut strategies[opponent.index()]),
    );
    let mut rest = recurse(arena, priority, subgame.difference(&b), strategies);
    rest[opponent.index()].union_with(&b);
    rest
}
