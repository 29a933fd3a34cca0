//! ```text
//! elgame <max-id>;
//! colors c(,c)*;
//! objective <formula>;
//! <id> <owner> <colorset|-> <succ>(,<succ>)* ["name"];
//! ```
//!
//! Owner 0 is `Exists`, 1 is `Forall`; `-` is the empty color set.

use std::fmt::Write as _;

use crate::arena::{Arena, Player};
use crate::lar::{Color, ColorSet, EmersonLeiGame, ObjectiveFormula, MAX_COLORS};

use super::formula::{color, parse_or, write_formula};
use super::lexer::Cursor;
use super::{arena_error, dense_ids, owner_from_code, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElNode {
    pub id: u64,
    pub owner: Player,
    /// Color indices in written order.
    pub colors: Vec<Color>,
    pub successors: Vec<u64>,
    pub name: Option<String>,
}

/// A parsed file, nodes in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElFile {
    pub max_id: u64,
    pub colors: Vec<String>,
    pub objective: ObjectiveFormula,
    pub nodes: Vec<ElNode>,
}

pub fn parse_elgame(text: &str) -> Result<ElFile, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.keyword("elgame")?;
    let max_id = cur.number("the maximum node id")?;
    cur.sym(';')?;

    cur.keyword("colors")?;
    let mut colors: Vec<String> = Vec::new();
    loop {
        let (name, _) = cur.ident("a color name")?;
        if colors.contains(&name) {
            return Err(ParseError::Invalid(format!("color `{name}` is declared twice")));
        }
        colors.push(name);
        if !cur.eat_sym(',') {
            break;
        }
    }
    if colors.len() > MAX_COLORS {
        return Err(ParseError::Invalid(format!(
            "at most {MAX_COLORS} colors are supported, got {}",
            colors.len()
        )));
    }
    cur.sym(';')?;

    cur.keyword("objective")?;
    let objective = parse_or(&mut cur, &colors)?;
    cur.sym(';')?;

    let mut nodes = Vec::new();
    while !cur.at_end() {
        let id = cur.number("a node id")?;
        let pos = cur.pos();
        let code = cur.number("an owner (0 or 1)")?;
        let owner = owner_from_code(code)
            .ok_or_else(|| ParseError::syntax(pos, format!("owner must be 0 or 1, got {code}")))?;
        let mut node_colors = Vec::new();
        if !cur.eat_sym('-') {
            node_colors.push(color(&mut cur, &colors)?);
            while cur.eat_sym(',') {
                node_colors.push(color(&mut cur, &colors)?);
            }
        }
        let successors = cur.number_list()?;
        let name = cur.optional_string();
        cur.sym(';')?;
        nodes.push(ElNode {
            id,
            owner,
            colors: node_colors,
            successors,
            name,
        });
    }
    let order = dense_ids(max_id, &nodes.iter().map(|n| n.id).collect::<Vec<_>>())?;
    let mut slots: Vec<Option<ElNode>> = nodes.into_iter().map(Some).collect();
    let nodes = order.into_iter().map(|i| slots[i].take().expect("each index once")).collect();
    Ok(ElFile {
        max_id,
        colors,
        objective,
        nodes,
    })
}

impl ElFile {
    pub fn to_game(&self) -> Result<EmersonLeiGame, ParseError> {
        let n = self.nodes.len() as u64;
        let mut successors = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            if let Some(&s) = node.successors.iter().find(|&&s| s >= n) {
                return Err(ParseError::Invalid(format!("node {}: successor {s} out of range", node.id)));
            }
            successors.push(node.successors.iter().map(|&s| s as usize).collect());
        }
        let owners = self.nodes.iter().map(|n| n.owner).collect();
        let arena = Arena::new(owners, successors).map_err(arena_error)?;
        let coloring = self
            .nodes
            .iter()
            .map(|n| n.colors.iter().copied().collect::<ColorSet>())
            .collect();
        EmersonLeiGame::new(arena, self.colors.clone(), coloring, self.objective.clone())
            .map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

/// Parses and validates in one step.
pub fn read_el_game(text: &str) -> Result<EmersonLeiGame, ParseError> {
    parse_elgame(text)?.to_game()
}

pub fn el_from_game(game: &EmersonLeiGame) -> ElFile {
    ElFile {
        max_id: game.node_count().saturating_sub(1) as u64,
        colors: game.colors().to_vec(),
        objective: game.objective().clone(),
        nodes: (0..game.node_count())
            .map(|v| ElNode {
                id: v as u64,
                owner: game.arena().owner(v),
                colors: game.coloring(v).iter().collect(),
                successors: game.arena().successors(v).iter().map(|&w| w as u64).collect(),
                name: None,
            })
            .collect(),
    }
}

pub fn write_elgame(file: &ElFile) -> String {
    let mut out = format!("elgame {};\n", file.max_id);
    writeln!(out, "colors {};", file.colors.join(",")).unwrap();
    writeln!(out, "objective {};", write_formula(&file.objective, &file.colors)).unwrap();
    for node in &file.nodes {
        let colors = if node.colors.is_empty() {
            "-".to_string()
        } else {
            node.colors
                .iter()
                .map(|&c| file.colors[c].as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(out, "{} {} {}", node.id, node.owner.index(), colors).unwrap();
        if !node.successors.is_empty() {
            let succ: Vec<String> = node.successors.iter().map(u64::to_string).collect();
            write!(out, " {}", succ.join(",")).unwrap();
        }
        if let Some(name) = &node.name {
            write!(out, " \"{name}\"").unwrap();
        }
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lar::{solve_el, DEFAULT_BUDGET};

    #[test]
    fn single_node_game() {
        let g = read_el_game("elgame 0; colors a; objective Inf(a); 0 0 a 0;").unwrap();
        let sol = solve_el(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(sol.winners.winner(0), Player::Exists);
    }

    #[test]
    fn canonical_form() {
        let text = "elgame 1;\ncolors a,b;\nobjective Inf(a) & Fin(b) | Inf(b);\n0 0 b,a 1 \"x\";\n1 1 - 0,1;\n";
        let f = parse_elgame(text).unwrap();
        assert_eq!(f.nodes[0].colors, vec![1, 0]);
        assert_eq!(write_elgame(&f), text);
    }

    #[test]
    fn errors() {
        let e = parse_elgame("elgame 0; colors a,b; objective Inf(z); 0 0 a 0;").unwrap_err();
        assert!(matches!(&e, ParseError::UnknownColor { name, .. } if name == "z"));
        assert_eq!(e.exit_code(), 1);
        let e = parse_elgame("elgame 0; colors a; objective Inf(a); 0 0 q 0;").unwrap_err();
        assert!(matches!(&e, ParseError::UnknownColor { name, .. } if name == "q"));
        let e = read_el_game("elgame 0; colors a; objective Inf(a); 0 0 a;").unwrap_err();
        assert_eq!(e, ParseError::Invalid("node 0 has no successor".into()));
        let e = parse_elgame("elgame 0; colors a; objective Inf(a) &; 0 0 a 0;").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(parse_elgame("elgame 0; colors a,a; objective Inf(a); 0 0 a 0;").is_err());
    }
}
