//! `parity <max-id>;` followed by `<id> <priority> <owner> <succ>,...
//! ["name"];` statements. Owner 0 is `Exists`, 1 is `Forall`.

use std::fmt::Write as _;

use crate::arena::{Arena, Player};
use crate::parity::{normalize_priorities, ParityGame, Priority};

use super::lexer::Cursor;
use super::{arena_error, dense_ids, owner_from_code, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgNode {
    pub id: u64,
    pub priority: Priority,
    pub owner: Player,
    pub successors: Vec<u64>,
    pub name: Option<String>,
}

/// A parsed file, nodes in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgFile {
    pub max_id: u64,
    pub nodes: Vec<PgNode>,
}

/// A validated game with the file's own priorities kept for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedParity {
    pub game: ParityGame,
    pub raw_priorities: Vec<Priority>,
    pub names: Vec<Option<String>>,
}

/// Parses and checks ids. Arena validity is checked by [`PgFile::to_game`].
pub fn parse_pgsolver(text: &str) -> Result<PgFile, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.keyword("parity")?;
    let max_id = cur.number("the maximum node id")?;
    cur.sym(';')?;
    let mut nodes = Vec::new();
    while !cur.at_end() {
        let id = cur.number("a node id")?;
        let pos = cur.pos();
        let priority = cur.number("a priority")?;
        let priority = Priority::try_from(priority)
            .map_err(|_| ParseError::syntax(pos, format!("priority {priority} is too large")))?;
        let pos = cur.pos();
        let code = cur.number("an owner (0 or 1)")?;
        let owner = owner_from_code(code)
            .ok_or_else(|| ParseError::syntax(pos, format!("owner must be 0 or 1, got {code}")))?;
        let successors = cur.number_list()?;
        let name = cur.optional_string();
        cur.sym(';')?;
        nodes.push(PgNode {
            id,
            priority,
            owner,
            successors,
            name,
        });
    }
    let order = dense_ids(max_id, &nodes.iter().map(|n| n.id).collect::<Vec<_>>())?;
    let mut slots: Vec<Option<PgNode>> = nodes.into_iter().map(Some).collect();
    let nodes = order.into_iter().map(|i| slots[i].take().expect("each index once")).collect();
    Ok(PgFile { max_id, nodes })
}

impl PgFile {
    pub fn to_game(&self) -> Result<ParsedParity, ParseError> {
        let n = self.nodes.len() as u64;
        let mut successors = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut succ = Vec::with_capacity(node.successors.len());
            for &s in &node.successors {
                if s >= n {
                    return Err(ParseError::Invalid(format!(
                        "node {}: successor {s} out of range",
                        node.id
                    )));
                }
                succ.push(s as usize);
            }
            successors.push(succ);
        }
        let owners = self.nodes.iter().map(|n| n.owner).collect();
        let arena = Arena::new(owners, successors).map_err(arena_error)?;
        let raw: Vec<Priority> = self.nodes.iter().map(|n| n.priority).collect();
        let game = normalize_priorities(arena, &raw).map_err(|e| ParseError::Invalid(e.to_string()))?;
        Ok(ParsedParity {
            game,
            raw_priorities: raw,
            names: self.nodes.iter().map(|n| n.name.clone()).collect(),
        })
    }
}

/// Parses and validates in one step.
pub fn read_parity_game(text: &str) -> Result<ParsedParity, ParseError> {
    parse_pgsolver(text)?.to_game()
}

/// The file model of a game, without names.
pub fn pg_from_game(game: &ParityGame) -> PgFile {
    PgFile {
        max_id: game.node_count().saturating_sub(1) as u64,
        nodes: (0..game.node_count())
            .map(|v| PgNode {
                id: v as u64,
                priority: game.priority(v),
                owner: game.owner(v),
                successors: game.successors(v).iter().map(|&w| w as u64).collect(),
                name: None,
            })
            .collect(),
    }
}

/// Canonical text: one statement per line, nodes in ascending id order.
pub fn write_pgsolver(file: &PgFile) -> String {
    let mut out = format!("parity {};\n", file.max_id);
    for node in &file.nodes {
        let succ: Vec<String> = node.successors.iter().map(u64::to_string).collect();
        write!(out, "{} {} {}", node.id, node.priority, node.owner.index()).unwrap();
        if !succ.is_empty() {
            write!(out, " {}", succ.join(",")).unwrap();
        }
        if let Some(name) = &node.name {
            write!(out, " \"{name}\"").unwrap();
        }
        out.push_str(";\n");
    }
    out
}
