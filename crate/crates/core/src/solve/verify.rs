use thiserror::Error;

use crate::arena::{NodeId, Player};
use crate::parity::{ParityGame, PositionalStrategy};
use crate::scc::{is_nontrivial, strongly_connected_components};
use crate::set::NodeSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy has no move at node {0}")]
    MissingMove(NodeId),
    #[error("strategy moves from {from} to {to}, which is not a successor")]
    NotASuccessor { from: NodeId, to: NodeId },
    #[error("strategy moves from {from} to {to}, leaving the region")]
    LeavesRegion { from: NodeId, to: NodeId },
}

/// Checks that `strategy` wins every node of `region` for `player`.
///
/// In the graph where `player` follows the strategy and the opponent keeps
/// every edge, the region must be closed and every cycle must have a
/// dominant priority of `player`'s parity.
pub fn verify_strategy(
    game: &ParityGame,
    region: &NodeSet,
    strategy: &PositionalStrategy,
    player: Player,
) -> Result<bool, StrategyError> {
    let n = game.node_count();
    let mut adj = vec![Vec::new(); n];
    for v in region.iter() {
        if game.owner(v) == player {
            let w = strategy.get(v).ok_or(StrategyError::MissingMove(v))?;
            if !game.successors(v).contains(&w) {
                return Err(StrategyError::NotASuccessor { from: v, to: w });
            }
            if !region.contains(w) {
                return Err(StrategyError::LeavesRegion { from: v, to: w });
            }
            adj[v].push(w);
        } else {
            for &w in game.successors(v) {
                if !region.contains(w) {
                    return Ok(false);
                }
                adj[v].push(w);
            }
        }
    }

    let opponent = player.opponent();
    for bad in (1..=game.k()).filter(|&p| Player::of_parity(p) == opponent) {
        if game.level(bad).is_disjoint(region) {
            continue;
        }
        let restricted: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if region.contains(v) && game.priority(v) <= bad {
                    adj[v]
                        .iter()
                        .copied()
                        .filter(|&w| game.priority(w) <= bad)
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        for comp in strongly_connected_components(&restricted) {
            if is_nontrivial(&comp, &restricted) && comp.iter().any(|&v| game.priority(v) == bad) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
