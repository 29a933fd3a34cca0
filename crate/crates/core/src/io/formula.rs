//! Objective syntax: `Inf(c)`, `Fin(c)`, `!f`, `f & g`, `f | g` and
//! parentheses, with `!` binding tighter than `&`, and `&` tighter than `|`.
//! Binary operators associate to the left.

use crate::lar::{Color, ObjectiveFormula};

use super::lexer::{Cursor, Tok};
use super::ParseError;

/// Parses a whole string as a formula over `colors`.
pub fn parse_formula(text: &str, colors: &[String]) -> Result<ObjectiveFormula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_or(&mut cur, colors)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    Ok(f)
}

pub(crate) fn parse_or(cur: &mut Cursor, colors: &[String]) -> Result<ObjectiveFormula, ParseError> {
    let mut f = parse_and(cur, colors)?;
    while cur.eat_sym('|') {
        f = ObjectiveFormula::or(f, parse_and(cur, colors)?);
    }
    Ok(f)
}

fn parse_and(cur: &mut Cursor, colors: &[String]) -> Result<ObjectiveFormula, ParseError> {
    let mut f = parse_unary(cur, colors)?;
    while cur.eat_sym('&') {
        f = ObjectiveFormula::and(f, parse_unary(cur, colors)?);
    }
    Ok(f)
}

fn parse_unary(cur: &mut Cursor, colors: &[String]) -> Result<ObjectiveFormula, ParseError> {
    if cur.eat_sym('!') {
        return Ok(ObjectiveFormula::not(parse_unary(cur, colors)?));
    }
    if cur.eat_sym('(') {
        let f = parse_or(cur, colors)?;
        cur.sym(')')?;
        return Ok(f);
    }
    let negated = match cur.peek() {
        Tok::Ident(w) if w == "Inf" => false,
        Tok::Ident(w) if w == "Fin" => true,
        _ => return Err(cur.unexpected("`Inf`, `Fin`, `!` or `(`")),
    };
    cur.bump();
    cur.sym('(')?;
    let c = color(cur, colors)?;
    cur.sym(')')?;
    Ok(if negated {
        ObjectiveFormula::fin(c)
    } else {
        ObjectiveFormula::Inf(c)
    })
}

pub(crate) fn color(cur: &mut Cursor, colors: &[String]) -> Result<Color, ParseError> {
    let (name, pos) = cur.ident("a color name")?;
    colors.iter().position(|c| *c == name).ok_or(ParseError::UnknownColor {
        line: pos.line,
        column: pos.column,
        name,
    })
}

/// Writes `f` with the fewest parentheses that parse back to the same tree.
pub fn write_formula(f: &ObjectiveFormula, colors: &[String]) -> String {
    let mut out = String::new();
    write(f, colors, 0, &mut out);
    out
}

fn precedence(f: &ObjectiveFormula) -> u8 {
    match f {
        ObjectiveFormula::Or(..) => 1,
        ObjectiveFormula::And(..) => 2,
        ObjectiveFormula::Not(..) | ObjectiveFormula::Inf(_) => 3,
    }
}

fn write(f: &ObjectiveFormula, colors: &[String], min: u8, out: &mut String) {
    let paren = precedence(f) < min;
    if paren {
        out.push('(');
    }
    match f {
        ObjectiveFormula::Inf(c) => {
            out.push_str("Inf(");
            out.push_str(&colors[*c]);
            out.push(')');
        }
        ObjectiveFormula::Not(g) => match g.as_ref() {
            ObjectiveFormula::Inf(c) => {
                out.push_str("Fin(");
                out.push_str(&colors[*c]);
                out.push(')');
            }
            g => {
                out.push('!');
                write(g, colors, 3, out);
            }
        },
        ObjectiveFormula::And(a, b) => {
            write(a, colors, 2, out);
            out.push_str(" & ");
            write(b, colors, 3, out);
        }
        ObjectiveFormula::Or(a, b) => {
            write(a, colors, 1, out);
            out.push_str(" | ");
            write(b, colors, 2, out);
        }
    }
    if paren {
        out.push(')');
    }
}
