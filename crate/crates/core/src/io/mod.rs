//! Text formats: pgsolver for parity games and `elgame` for Emerson-Lei
//! games.

mod elgame;
mod formula;
mod lexer;
mod pgsolver;

use thiserror::Error;

pub use elgame::{el_from_game, parse_elgame, read_el_game, write_elgame, ElFile, ElNode};
pub use formula::{parse_formula, write_formula};
pub use pgsolver::{
    parse_pgsolver, pg_from_game, read_parity_game, write_pgsolver, ParsedParity, PgFile, PgNode,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown color `{name}`")]
    UnknownColor { line: usize, column: usize, name: String },
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub(crate) fn syntax(pos: lexer::Pos, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }

    /// 2 for syntax errors, 1 for well-formed but invalid games.
    pub fn exit_code(&self) -> i32 {
        match self {
            ParseError::Syntax { .. } => 2,
            ParseError::UnknownColor { .. } | ParseError::Invalid(_) => 1,
        }
    }
}

/// Owner code in both formats: 0 for `Exists`, 1 for `Forall`.
pub(crate) fn owner_from_code(code: u64) -> Option<crate::arena::Player> {
    crate::arena::Player::from_index(code as usize).filter(|_| code <= 1)
}

/// Checks that ids are exactly `0..=max_id`, each defined once, and returns
/// the record indices sorted by id.
pub(crate) fn dense_ids(max_id: u64, ids: &[u64]) -> Result<Vec<usize>, ParseError> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by_key(|&i| ids[i]);
    for (expected, &i) in order.iter().enumerate() {
        let id = ids[i];
        if id > max_id {
            return Err(ParseError::Invalid(format!("node {id} exceeds the declared maximum id {max_id}")));
        }
        if id < expected as u64 {
            return Err(ParseError::Invalid(format!("node {id} is defined twice")));
        }
        if id > expected as u64 {
            return Err(ParseError::Invalid(format!("node {expected} is not defined")));
        }
    }
    if (ids.len() as u64) <= max_id {
        return Err(ParseError::Invalid(format!("node {} is not defined", ids.len())));
    }
    Ok(order)
}

pub(crate) fn arena_error(e: crate::arena::ArenaError) -> ParseError {
    ParseError::Invalid(
        e.violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; "),
    )
}
