//! Evaluation of alternating nested fixpoints
//! `nu X_k. mu X_{k-1}. ... mu X_1. f(X_1, ..., X_k)` over a finite domain.
//!
//! Odd levels are least fixpoints iterated upward from the empty set, even
//! levels are greatest fixpoints iterated downward from the full domain.
//! Whenever an outer variable changes, every inner level is re-solved from
//! its initial value. The engine knows nothing about games: it only sees the
//! domain size, the depth and the function.
//!
//! `f` must be monotone in every argument. This is not checked; a
//! non-monotone `f` gives unspecified results and may not terminate.

use thiserror::Error;

use crate::set::NodeSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixpointError {
    #[error("alternation depth must be even and at least 2, got {0}")]
    BadDepth(usize),
}

/// A nested fixpoint expression. `f` receives `[X_1, ..., X_k]`, each a subset
/// of `0..domain_size`, and returns a subset of the same domain.
pub struct NestedFixpointSpec<F> {
    domain_size: usize,
    depth: usize,
    f: F,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointResult {
    pub value: NodeSet,
    /// Exact number of calls to `f`.
    pub evaluations: u64,
    /// `level_iterations[i]` counts iterations at level `i` (index 0 unused).
    pub level_iterations: Vec<u64>,
}

impl<F> NestedFixpointSpec<F>
where
    F: FnMut(&[NodeSet]) -> NodeSet,
{
    pub fn new(domain_size: usize, depth: usize, f: F) -> Result<Self, FixpointError> {
        if depth < 2 || !depth.is_multiple_of(2) {
            return Err(FixpointError::BadDepth(depth));
        }
        Ok(NestedFixpointSpec {
            domain_size,
            depth,
            f,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn evaluate(&mut self) -> FixpointResult {
        let mut run = Run::new(self.domain_size, self.depth);
        let value = run.solve(self.depth, &mut self.f);
        run.finish(value)
    }

    /// True iff solving the inner `k - 1` levels with `X_k = candidate`
    /// yields `candidate` again.
    pub fn is_fixpoint(&mut self, candidate: &NodeSet) -> bool {
        let mut run = Run::new(self.domain_size, self.depth);
        run.vars[self.depth - 1] = candidate.clone();
        run.solve(self.depth - 1, &mut self.f) == *candidate
    }
}

struct Run {
    domain_size: usize,
    vars: Vec<NodeSet>,
    evaluations: u64,
    level_iterations: Vec<u64>,
}

impl Run {
    fn new(domain_size: usize, depth: usize) -> Self {
        Run {
            domain_size,
            vars: vec![NodeSet::empty(domain_size); depth],
            evaluations: 0,
            level_iterations: vec![0; depth + 1],
        }
    }

    fn solve<F: FnMut(&[NodeSet]) -> NodeSet>(&mut self, level: usize, f: &mut F) -> NodeSet {
        if level == 0 {
            self.evaluations += 1;
            return f(&self.vars);
        }
        let slot = level - 1;
        self.vars[slot] = if level % 2 == 1 {
            NodeSet::empty(self.domain_size)
        } else {
            NodeSet::full(self.domain_size)
        };
        loop {
            self.level_iterations[level] += 1;
            let next = self.solve(level - 1, f);
            if next == self.vars[slot] {
                return next;
            }
            self.vars[slot] = next;
        }
    }

    fn finish(self, value: NodeSet) -> FixpointResult {
        FixpointResult {
            value,
            evaluations: self.evaluations,
            level_iterations: self.level_iterations,
        }
    }
}
