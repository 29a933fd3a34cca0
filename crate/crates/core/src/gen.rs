//! Seeded game generators.
//!
//! The same family, parameters and seed always give the same game.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{Arena, NodeId, Player};
use crate::lar::{ColorSet, EmersonLeiGame, ObjectiveFormula, MAX_COLORS};
use crate::parity::{ParityGame, Priority};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family `{0}` (expected random-parity, dag-chain or random-el)")]
    UnknownFamily(String),
    #[error("family {family} needs parameter `{param}`")]
    MissingParam { family: Family, param: &'static str },
    #[error("family {family} has no parameter `{param}`")]
    UnknownParam { family: Family, param: String },
    #[error("parameter `{param}` must be {rule}, got {value}")]
    BadParam {
        param: &'static str,
        rule: &'static str,
        value: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    RandomParity,
    DagChain,
    RandomEl,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::RandomParity => "random-parity",
            Family::DagChain => "dag-chain",
            Family::RandomEl => "random-el",
        }
    }

    /// Parameter names, in the order used for display.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Family::RandomParity => &["n", "outDegree", "k"],
            Family::DagChain => &["m", "depth", "width", "k"],
            Family::RandomEl => &["n", "outDegree", "colors"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-parity" => Ok(Family::RandomParity),
            "dag-chain" => Ok(Family::DagChain),
            "random-el" => Ok(Family::RandomEl),
            _ => Err(GenError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Parity(ParityGame),
    El(EmersonLeiGame),
}

/// Generates a game of `family` from named parameters.
pub fn generate(family: Family, params: &BTreeMap<String, u64>, seed: u64) -> Result<Generated, GenError> {
    if let Some(extra) = params.keys().find(|k| !family.params().contains(&k.as_str())) {
        return Err(GenError::UnknownParam {
            family,
            param: extra.clone(),
        });
    }
    let get = |param: &'static str| {
        params
            .get(param)
            .copied()
            .ok_or(GenError::MissingParam { family, param })
    };
    Ok(match family {
        Family::RandomParity => Generated::Parity(random_parity(
            seed,
            get("n")? as usize,
            get("outDegree")? as usize,
            get("k")? as Priority,
        )?),
        Family::DagChain => Generated::Parity(dag_chain(
            seed,
            get("m")? as usize,
            get("depth")? as usize,
            get("width")? as usize,
            get("k")? as Priority,
        )?),
        Family::RandomEl => Generated::El(random_el(
            seed,
            get("n")? as usize,
            get("outDegree")? as usize,
            get("colors")? as usize,
        )?),
    })
}

fn positive(param: &'static str, value: usize) -> Result<(), GenError> {
    if value == 0 {
        return Err(GenError::BadParam {
            param,
            rule: "at least 1",
            value: 0,
        });
    }
    Ok(())
}

fn random_owner(rng: &mut ChaCha8Rng) -> Player {
    if rng.random_bool(0.5) {
        Player::Exists
    } else {
        Player::Forall
    }
}

fn random_successors(rng: &mut ChaCha8Rng, n: usize, out_degree: usize) -> Vec<NodeId> {
    let d = rng.random_range(1..=out_degree.min(n));
    sample(rng, n, d).into_vec()
}

/// `n` nodes with random owners, priorities in `1..=k`, and between 1 and
/// `out_degree` distinct successors each.
pub fn random_parity(seed: u64, n: usize, out_degree: usize, k: Priority) -> Result<ParityGame, GenError> {
    positive("n", n)?;
    positive("outDegree", out_degree)?;
    positive("k", k as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    for _ in 0..n {
        owner.push(random_owner(&mut rng));
        priority.push(rng.random_range(1..=k));
        successors.push(random_successors(&mut rng, n, out_degree));
    }
    let arena = Arena::new(owner, successors).expect("generated successors are in range");
    Ok(ParityGame::new(arena, priority).expect("priorities are positive"))
}

/// A core of `m` real nodes `0..m`, each with a self-loop and an edge to the
/// next core node, plus `width` chains of `depth` `Forall` nodes of priority 1.
/// Each chain leaves a random core node and returns to a random core node.
///
/// All random draws happen before the chains are laid out, so changing
/// `depth` only lengthens the chains. Chain node `i` of chain `j` is node
/// `m + j * depth + i`.
pub fn dag_chain(seed: u64, m: usize, depth: usize, width: usize, k: Priority) -> Result<ParityGame, GenError> {
    positive("m", m)?;
    positive("depth", depth)?;
    positive("width", width)?;
    positive("k", k as usize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m + depth * width;
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut successors: Vec<Vec<NodeId>> = Vec::with_capacity(n);
    for v in 0..m {
        owner.push(random_owner(&mut rng));
        priority.push(rng.random_range(1..=k));
        let mut succ = vec![v];
        if m > 1 {
            succ.push((v + 1) % m);
        }
        successors.push(succ);
    }
    let ends: Vec<(NodeId, NodeId)> = (0..width)
        .map(|_| (rng.random_range(0..m), rng.random_range(0..m)))
        .collect();
    for (j, &(from, to)) in ends.iter().enumerate() {
        let first = m + j * depth;
        successors[from].push(first);
        for i in 0..depth {
            owner.push(Player::Forall);
            priority.push(1);
            successors.push(vec![if i + 1 == depth { to } else { first + i + 1 }]);
        }
    }
    let arena = Arena::new(owner, successors).expect("generated successors are in range");
    Ok(ParityGame::new(arena, priority).expect("priorities are positive"))
}

/// Color names `a`..`z`, then `c26`, `c27`, ...
pub fn color_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("c{i}")
    }
}

fn random_formula(rng: &mut ChaCha8Rng, colors: usize, depth: u32) -> ObjectiveFormula {
    if depth == 0 || rng.random_bool(0.35) {
        let c = rng.random_range(0..colors);
        return if rng.random_bool(0.5) {
            ObjectiveFormula::Inf(c)
        } else {
            ObjectiveFormula::fin(c)
        };
    }
    let a = random_formula(rng, colors, depth - 1);
    let b = random_formula(rng, colors, depth - 1);
    let f = if rng.random_bool(0.5) {
        ObjectiveFormula::and(a, b)
    } else {
        ObjectiveFormula::or(a, b)
    };
    if rng.random_bool(0.15) {
        ObjectiveFormula::not(f)
    } else {
        f
    }
}

/// `n` nodes with random owners, each color present at a node with
/// probability 1/2, and a random objective of depth at most 3.
pub fn random_el(seed: u64, n: usize, out_degree: usize, colors: usize) -> Result<EmersonLeiGame, GenError> {
    positive("n", n)?;
    positive("outDegree", out_degree)?;
    positive("colors", colors)?;
    if colors > MAX_COLORS {
        return Err(GenError::BadParam {
            param: "colors",
            rule: "at most 64",
            value: colors as u64,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner = Vec::with_capacity(n);
    let mut coloring = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    for _ in 0..n {
        owner.push(random_owner(&mut rng));
        coloring.push((0..colors).filter(|_| rng.random_bool(0.5)).collect::<ColorSet>());
        successors.push(random_successors(&mut rng, n, out_degree));
    }
    let objective = random_formula(&mut rng, colors, 3);
    let arena = Arena::new(owner, successors).expect("generated successors are in range");
    Ok(EmersonLeiGame::new(arena, (0..colors).map(color_name).collect(), coloring, objective)
        .expect("colors are declared by construction"))
}
