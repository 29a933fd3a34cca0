//! Emerson-Lei games and their reduction to parity games through a
//! later-appearance record that moves at most one color per step.

mod product;
mod solve;

use std::fmt;

use thiserror::Error;

use crate::arena::{Arena, NodeId};
use crate::parity::ParityGame;

pub use product::{BudgetError, 
    build_product, check_dag_preservation, dag_preservation_report, lar_priority, DagPreservation,
    ProductGame, DEFAULT_BUDGET,
};
pub use solve::{el_oracle, solve_el, solve_el_with, verify_el_strategy, ElSolution, MemoryStrategy};

/// Index into [`EmersonLeiGame::colors`].
pub type Color = usize;

pub const MAX_COLORS: usize = 64;

/// A subset of at most 64 colors.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn singleton(c: Color) -> ColorSet {
        ColorSet(1 << c)
    }

    pub fn from_bits(bits: u64) -> ColorSet {
        ColorSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, c: Color) -> bool {
        c < MAX_COLORS && self.0 >> c & 1 == 1
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1 << c);
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        (0..MAX_COLORS).filter(move |&c| self.contains(c))
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An ordering of all colors; position 0 is the most recent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u8]>);

impl Permutation {
    /// The declaration order `0, 1, ..., n - 1`.
    pub fn identity(n: usize) -> Permutation {
        assert!(n <= MAX_COLORS, "at most {MAX_COLORS} colors");
        Permutation((0..n as u8).collect())
    }

    /// `None` unless `order` contains each of `0..order.len()` once.
    pub fn from_order(order: &[Color]) -> Option<Permutation> {
        let n = order.len();
        if n > MAX_COLORS {
            return None;
        }
        let mut seen = ColorSet::EMPTY;
        for &c in order {
            if c >= n || seen.contains(c) {
                return None;
            }
            seen.insert(c);
        }
        Some(Permutation(order.iter().map(|&c| c as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Color at 0-based position `i`.
    pub fn get(&self, i: usize) -> Color {
        self.0[i] as Color
    }

    pub fn order(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().map(|&c| c as Color)
    }

    /// Colors in the first `i` positions.
    pub fn prefix(&self, i: usize) -> ColorSet {
        self.0[..i].iter().map(|&c| c as Color).collect()
    }

    /// Moves the rightmost element of `d` to the front; identity for an
    /// empty intersection.
    pub fn at(&self, d: ColorSet) -> Permutation {
        match self.0.iter().rposition(|&c| d.contains(c as Color)) {
            None => self.clone(),
            Some(i) => {
                let mut order = self.0.to_vec();
                let c = order.remove(i);
                order.insert(0, c);
                Permutation(order.into_boxed_slice())
            }
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.order()).finish()
    }
}

pub fn perm_at(pi: &Permutation, d: ColorSet) -> Permutation {
    pi.at(d)
}

/// Boolean combination of `Inf(c)` atoms. `Fin(c)` is `Not(Inf(c))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectiveFormula {
    Inf(Color),
    Not(Box<ObjectiveFormula>),
    And(Box<ObjectiveFormula>, Box<ObjectiveFormula>),
    Or(Box<ObjectiveFormula>, Box<ObjectiveFormula>),
}

impl ObjectiveFormula {
    pub fn fin(c: Color) -> ObjectiveFormula {
        ObjectiveFormula::Not(Box::new(ObjectiveFormula::Inf(c)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: ObjectiveFormula) -> ObjectiveFormula {
        ObjectiveFormula::Not(Box::new(f))
    }

    pub fn and(a: ObjectiveFormula, b: ObjectiveFormula) -> ObjectiveFormula {
        ObjectiveFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ObjectiveFormula, b: ObjectiveFormula) -> ObjectiveFormula {
        ObjectiveFormula::Or(Box::new(a), Box::new(b))
    }

    /// Evaluates with `Inf(c)` true iff `c` is in `inf`.
    pub fn eval(&self, inf: ColorSet) -> bool {
        match self {
            ObjectiveFormula::Inf(c) => inf.contains(*c),
            ObjectiveFormula::Not(f) => !f.eval(inf),
            ObjectiveFormula::And(a, b) => a.eval(inf) && b.eval(inf),
            ObjectiveFormula::Or(a, b) => a.eval(inf) || b.eval(inf),
        }
    }

    /// Colors mentioned anywhere in the formula.
    pub fn colors(&self) -> ColorSet {
        match self {
            ObjectiveFormula::Inf(c) => ColorSet::singleton(*c),
            ObjectiveFormula::Not(f) => f.colors(),
            ObjectiveFormula::And(a, b) | ObjectiveFormula::Or(a, b) => a.colors().union(b.colors()),
        }
    }
}

pub fn formula_eval(phi: &ObjectiveFormula, inf: ColorSet) -> bool {
    phi.eval(inf)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElError {
    #[error("at most {MAX_COLORS} colors are supported, got {0}")]
    TooManyColors(usize),
    #[error("color `{0}` is declared twice")]
    DuplicateColor(String),
    #[error("{nodes} nodes but {colorings} colorings")]
    ColoringCount { nodes: usize, colorings: usize },
    #[error("node {node} uses undeclared color index {color}")]
    NodeColor { node: NodeId, color: Color },
    #[error("objective uses undeclared color index {0}")]
    ObjectiveColor(Color),
}

/// An arena with a coloring and an Emerson-Lei objective for `Exists`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmersonLeiGame {
    arena: Arena,
    colors: Vec<String>,
    coloring: Vec<ColorSet>,
    objective: ObjectiveFormula,
}

impl EmersonLeiGame {
    pub fn new(
        arena: Arena,
        colors: Vec<String>,
        coloring: Vec<ColorSet>,
        objective: ObjectiveFormula,
    ) -> Result<EmersonLeiGame, ElError> {
        if colors.len() > MAX_COLORS {
            return Err(ElError::TooManyColors(colors.len()));
        }
        for (i, c) in colors.iter().enumerate() {
            if colors[..i].contains(c) {
                return Err(ElError::DuplicateColor(c.clone()));
            }
        }
        if coloring.len() != arena.node_count() {
            return Err(ElError::ColoringCount {
                nodes: arena.node_count(),
                colorings: coloring.len(),
            });
        }
        let declared = colors.len();
        for (node, set) in coloring.iter().enumerate() {
            if let Some(color) = set.iter().find(|&c| c >= declared) {
                return Err(ElError::NodeColor { node, color });
            }
        }
        if let Some(c) = objective.colors().iter().find(|&c| c >= declared) {
            return Err(ElError::ObjectiveColor(c));
        }
        Ok(EmersonLeiGame {
            arena,
            colors,
            coloring,
            objective,
        })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn node_count(&self) -> usize {
        self.arena.node_count()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_index(&self, name: &str) -> Option<Color> {
        self.colors.iter().position(|c| c == name)
    }

    pub fn coloring(&self, v: NodeId) -> ColorSet {
        self.coloring[v]
    }

    pub fn colorings(&self) -> &[ColorSet] {
        &self.coloring
    }

    pub fn objective(&self) -> &ObjectiveFormula {
        &self.objective
    }

    /// The initial memory: colors in declaration order.
    pub fn initial_permutation(&self) -> Permutation {
        Permutation::identity(self.colors.len())
    }
}

/// Colors `p1..pk`, node `v` colored `{p_Ω(v)}`, objective
/// `⋁_{i even} Inf(p_i) ∧ ⋀_{j>i} Fin(p_j)`.
pub fn parity_to_el(game: &ParityGame) -> EmersonLeiGame {
    let k = game.k() as usize;
    let colors = (1..=k).map(|i| format!("p{i}")).collect();
    let coloring = game
        .priorities()
        .iter()
        .map(|&p| ColorSet::singleton(p as usize - 1))
        .collect();
    let objective = (2..=k)
        .step_by(2)
        .map(|i| {
            (i + 1..=k).fold(ObjectiveFormula::Inf(i - 1), |acc, j| {
                ObjectiveFormula::and(acc, ObjectiveFormula::fin(j - 1))
            })
        })
        .reduce(ObjectiveFormula::or)
        .expect("k >= 2");
    EmersonLeiGame::new(game.arena().clone(), colors, coloring, objective)
        .expect("colors are declared by construction")
}
