//! Parity game solvers: the nested-fixpoint baseline built on controllable
//! predecessors, and Zielonka's recursive algorithm as an independent oracle.

mod verify;
mod zielonka;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arena::Player;
use crate::fixpoint::NestedFixpointSpec;
use crate::parity::{ParityGame, Priority, WinnerMap};
use crate::set::NodeSet;

pub use verify::{verify_strategy, StrategyError};
pub use zielonka::{attractor, solve_zielonka, solve_zielonka_with_priorities, ZielonkaSolution};

/// Work counters of a solver run. All counters are deterministic per input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveStats {
    pub f_evaluations: u64,
    pub cpre_evaluations: u64,
    /// Edges touched inside DAG attraction; zero for the baseline.
    pub attractor_cost: u64,
}

/// Which solver to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Baseline,
    #[serde(rename = "accel")]
    Accelerated,
    Zielonka,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Engine::Baseline),
            "accel" | "accelerated" => Ok(Engine::Accelerated),
            "zielonka" => Ok(Engine::Zielonka),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Baseline => "baseline",
            Engine::Accelerated => "accel",
            Engine::Zielonka => "zielonka",
        })
    }
}

fn cpre_holds(game: &ParityGame, v: usize, x: &NodeSet) -> bool {
    let mut succ = game.successors(v).iter();
    match game.owner(v) {
        Player::Exists => succ.any(|&w| x.contains(w)),
        Player::Forall => succ.all(|&w| x.contains(w)),
    }
}

/// Controllable predecessor: nodes from which `Exists` forces a move into `x`.
pub fn cpre(game: &ParityGame, x: &NodeSet) -> NodeSet {
    NodeSet::from_iter(
        game.node_count(),
        game.arena().nodes().filter(|&v| cpre_holds(game, v, x)),
    )
}

/// One application of the parity fixpoint body:
/// the union over `i` of `level(i) ∩ cpre(xs[i-1])`.
///
/// Panics if `xs.len() != k`.
pub fn walukiewicz_step(game: &ParityGame, xs: &[NodeSet]) -> NodeSet {
    assert_eq!(xs.len(), game.k() as usize, "one argument per priority");
    let mut out = NodeSet::empty(game.node_count());
    for i in 1..=game.k() {
        let x = &xs[i as usize - 1];
        for v in game.level(i).iter() {
            if cpre_holds(game, v, x) {
                out.insert(v);
            }
        }
    }
    out
}

fn nonempty_levels(game: &ParityGame) -> u64 {
    (1..=game.k()).filter(|&i| !game.level(i).is_empty()).count() as u64
}

/// Solves by evaluating the nested fixpoint of [`walukiewicz_step`] over all
/// nodes. The `Forall` region is the complement.
pub fn solve_baseline(game: &ParityGame) -> (WinnerMap, SolveStats) {
    let mut spec = NestedFixpointSpec::new(game.node_count(), game.k() as usize, |xs: &[NodeSet]| {
        walukiewicz_step(game, xs)
    })
    .expect("normalized games have even k >= 2");
    let result = spec.evaluate();
    let stats = SolveStats {
        f_evaluations: result.evaluations,
        cpre_evaluations: result.evaluations * nonempty_levels(game),
        attractor_cost: 0,
    };
    (WinnerMap::from_region(game.node_count(), &result.value), stats)
}

/// Largest priority in `game`; used by the Zielonka recursion.
pub(crate) fn max_priority_in(priority: &[Priority], set: &NodeSet) -> Option<Priority> {
    set.iter().map(|v| priority[v]).max()
}
