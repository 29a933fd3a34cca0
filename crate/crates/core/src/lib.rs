//! Parity and Emerson-Lei game solving by nested fixpoints, with attraction
//! through acyclic parts of the arena summarized into single steps.

pub mod arena;
pub mod bench;
pub mod dag;
pub mod fixpoint;
pub mod gen;
pub mod io;
pub mod lar;
pub mod parity;
pub mod scc;
pub mod set;
pub mod solve;

pub use arena::{validate_arena, Arena, NodeId, Player};
pub use dag::{detect_positional_dag, DagDecomposition};
pub use lar::{EmersonLeiGame, ObjectiveFormula};
pub use parity::{normalize_priorities, ParityGame, PositionalStrategy, Priority, WinnerMap};
pub use set::NodeSet;
pub use solve::{solve_baseline, solve_zielonka, Engine, SolveStats};
