//! Joint virtual-target selection and pursuer assignment.
//!
//! Binary variables `x[i][j][k]` (pursuer `i` goes through candidate `k` to
//! evader `j`) and `y[k]` (candidate `k` is activated):
//!
//! ```text
//! min  Σ c[i][j][k] x[i][j][k]
//! s.t. Σ_{i,k} x[i][j][k] >= 1        every evader is covered
//!      Σ_{j,k} x[i][j][k]  = 1        every pursuer makes one choice
//!      x[i][j][k] <= y[k]             only active candidates are used
//!      Σ_k y[k] <= M_V                activation cap
//! ```
//!
//! Several pursuers may share an active candidate. [`solve`] is an exact
//! LP-based branch and bound; [`solve_bruteforce`] enumerates small
//! instances and serves as its oracle.

mod bnb;
mod brute;
pub mod flow;
pub mod lp;
mod presolve;
mod residual;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cost::CostTensor;

pub use bnb::{solve, solve_with, Budget, Unlimited};
pub use brute::solve_bruteforce;
pub use presolve::useful_candidates;

/// Absolute tolerance under which two total costs count as a tie.
pub const COST_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssignError {
    #[error("no assignment satisfies the constraints")]
    Infeasible,
    #[error("instance exceeds brute-force limits (N ≤ {max_n}, M ≤ {max_m}, candidates ≤ {max_k})")]
    InstanceTooLarge {
        max_n: usize,
        max_m: usize,
        max_k: usize,
    },
    #[error("cost array has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("problem needs at least one pursuer, evader and candidate")]
    Empty,
    #[error("cap on active virtual targets must be at least 1")]
    ZeroCardinality,
    #[error("cost entry {0} is not finite")]
    NonFiniteCost(usize),
    #[error("relaxation failed: {0}")]
    Relaxation(#[from] lp::LpError),
}

/// Costs plus the cardinality cap: one instance of the assignment problem.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    pursuers: usize,
    evaders: usize,
    candidates: usize,
    costs: Vec<f64>,
    max_virtual_targets: usize,
}

impl AssignmentProblem {
    /// `costs` is laid out `(i, j, k)` with `k` fastest.
    pub fn new(
        pursuers: usize,
        evaders: usize,
        candidates: usize,
        costs: Vec<f64>,
        max_virtual_targets: usize,
    ) -> Result<Self, AssignError> {
        if pursuers == 0 || evaders == 0 || candidates == 0 {
            return Err(AssignError::Empty);
        }
        let expected = pursuers * evaders * candidates;
        if costs.len() != expected {
            return Err(AssignError::DimensionMismatch {
                expected,
                found: costs.len(),
            });
        }
        if max_virtual_targets == 0 {
            return Err(AssignError::ZeroCardinality);
        }
        if let Some(idx) = costs.iter().position(|c| !c.is_finite()) {
            return Err(AssignError::NonFiniteCost(idx));
        }
        Ok(Self {
            pursuers,
            evaders,
            candidates,
            costs,
            max_virtual_targets,
        })
    }

    pub fn from_tensor(tensor: &CostTensor, max_virtual_targets: usize) -> Result<Self, AssignError> {
        let (n, m, k) = tensor.dims();
        Self::new(n, m, k, tensor.costs().to_vec(), max_virtual_targets)
    }

    /// `(N, M, |candidates|)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.pursuers, self.evaders, self.candidates)
    }

    pub fn max_virtual_targets(&self) -> usize {
        self.max_virtual_targets
    }

    /// Same costs, different cap.
    pub fn with_max_virtual_targets(&self, max_virtual_targets: usize) -> Result<Self, AssignError> {
        Self::new(
            self.pursuers,
            self.evaders,
            self.candidates,
            self.costs.clone(),
            max_virtual_targets,
        )
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize, k: usize) -> f64 {
        self.costs[(i * self.evaders + j) * self.candidates + k]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Sum of the chosen entries, accumulated in pursuer order.
    pub fn total(&self, choices: &[Choice]) -> f64 {
        choices
            .iter()
            .enumerate()
            .map(|(i, c)| self.cost(i, c.evader, c.candidate))
            .sum()
    }
}

/// One pursuer's decision. Orders by evader, then candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Choice {
    pub evader: usize,
    pub candidate: usize,
}

impl Choice {
    pub const fn new(evader: usize, candidate: usize) -> Self {
        Self { evader, candidate }
    }
}

/// A full decision: one choice per pursuer, the active candidates, the cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub choices: Vec<Choice>,
    /// Ascending candidate indices.
    pub active_vts: Vec<usize>,
    pub total_cost: f64,
}

impl Assignment {
    /// Derives the active set and total cost from `choices`.
    pub fn from_choices(choices: Vec<Choice>, problem: &AssignmentProblem) -> Self {
        let active_vts: Vec<usize> = choices
            .iter()
            .map(|c| c.candidate)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let total_cost = problem.total(&choices);
        Self {
            choices,
            active_vts,
            total_cost,
        }
    }
}

/// Ways an [`Assignment`] can fail the problem's constraints.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintViolation {
    /// Not exactly one choice per pursuer.
    ChoiceCount { expected: usize, found: usize },
    /// A choice names an evader or candidate that does not exist.
    IndexOutOfRange { pursuer: usize },
    /// Some evader has no pursuer.
    EvaderUncovered { evader: usize },
    /// A pursuer uses a candidate missing from the active set.
    InactiveCandidate { pursuer: usize, candidate: usize },
    /// Active set larger than the cap.
    TooManyActive { active: usize, limit: usize },
    /// Active set lists a candidate twice, or out of range.
    MalformedActiveSet,
    /// Reported total differs from the sum of chosen costs.
    CostMismatch { reported: f64, recomputed: f64 },
}

impl ConstraintViolation {
    /// Short name of the constraint family this violation breaks.
    pub fn constraint(&self) -> &'static str {
        match self {
            Self::ChoiceCount { .. } | Self::IndexOutOfRange { .. } => "single-choice",
            Self::EvaderUncovered { .. } => "coverage",
            Self::InactiveCandidate { .. } => "activation",
            Self::TooManyActive { .. } => "cardinality",
            Self::MalformedActiveSet => "binary",
            Self::CostMismatch { .. } => "objective",
        }
    }
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.constraint())?;
        match self {
            Self::ChoiceCount { expected, found } => {
                write!(f, "expected one choice for each of {expected} pursuers, found {found}")
            }
            Self::IndexOutOfRange { pursuer } => {
                write!(f, "pursuer {pursuer} names a nonexistent evader or candidate")
            }
            Self::EvaderUncovered { evader } => write!(f, "evader {evader} is not assigned any pursuer"),
            Self::InactiveCandidate { pursuer, candidate } => write!(
                f,
                "pursuer {pursuer} uses candidate {candidate}, which is not active"
            ),
            Self::TooManyActive { active, limit } => {
                write!(f, "{active} active virtual targets exceed the cap of {limit}")
            }
            Self::MalformedActiveSet => write!(f, "active set has duplicates or bad indices"),
            Self::CostMismatch {
                reported,
                recomputed,
            } => write!(f, "reported cost {reported} but chosen entries sum to {recomputed}"),
        }
    }
}

/// Lists every constraint `assignment` breaks. Empty means feasible.
pub fn check_feasible(
    assignment: &Assignment,
    problem: &AssignmentProblem,
) -> Vec<ConstraintViolation> {
    let (n, m, kk) = problem.dims();
    let mut out = Vec::new();
    if assignment.choices.len() != n {
        out.push(ConstraintViolation::ChoiceCount {
            expected: n,
            found: assignment.choices.len(),
        });
    }
    let active: BTreeSet<usize> = assignment.active_vts.iter().copied().collect();
    if active.len() != assignment.active_vts.len() || active.iter().any(|&k| k >= kk) {
        out.push(ConstraintViolation::MalformedActiveSet);
    }

    let mut covered = alloc::vec![false; m];
    let mut in_range = true;
    for (i, c) in assignment.choices.iter().enumerate() {
        if c.evader >= m || c.candidate >= kk {
            out.push(ConstraintViolation::IndexOutOfRange { pursuer: i });
            in_range = false;
            continue;
        }
        covered[c.evader] = true;
        if !active.contains(&c.candidate) {
            out.push(ConstraintViolation::InactiveCandidate {
                pursuer: i,
                candidate: c.candidate,
            });
        }
    }
    for (j, ok) in covered.iter().enumerate() {
        if !ok {
            out.push(ConstraintViolation::EvaderUncovered { evader: j });
        }
    }
    if active.len() > problem.max_virtual_targets() {
        out.push(ConstraintViolation::TooManyActive {
            active: active.len(),
            limit: problem.max_virtual_targets(),
        });
    }
    if in_range && assignment.choices.len() == n {
        let recomputed = problem.total(&assignment.choices);
        if !((assignment.total_cost - recomputed).abs() <= COST_TIE_TOL) {
            out.push(ConstraintViolation::CostMismatch {
                reported: assignment.total_cost,
                recomputed,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Search finished; the assignment is optimal.
    Optimal,
    /// Stopped at the node limit with a gap.
    NodeLimit,
    /// Stopped because the caller's budget ran out.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub node_limit: u64,
    /// Drop candidates that cannot appear in any optimal solution.
    pub presolve: bool,
    /// Presolve is skipped when `(M + 1)^N` exceeds this.
    pub presolve_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            node_limit: 10_000_000,
            presolve: true,
            presolve_limit: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub status: SolveStatus,
    pub objective: f64,
    /// Lowest bound among unexplored nodes (equals `objective` when optimal).
    pub best_bound: f64,
    /// `objective - best_bound`, zero once proven optimal.
    pub gap: f64,
    pub root_bound: f64,
    pub initial_incumbent: f64,
    pub nodes: u64,
    pub lp_iterations: u64,
    /// Candidates left after presolve.
    pub candidates_searched: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub assignment: Assignment,
    pub report: SolverReport,
}

/// Keeps the feasible solutions seen so far that are within tolerance of the
/// best one, and resolves ties: lowest cost first, then the lexicographically
/// smallest choice vector among everything within [`COST_TIE_TOL`] of it.
#[derive(Debug, Default)]
pub(crate) struct Incumbents {
    best: f64,
    pool: Vec<(f64, Vec<Choice>)>,
}

impl Incumbents {
    pub(crate) fn new() -> Self {
        Self {
            best: f64::INFINITY,
            pool: Vec::new(),
        }
    }

    pub(crate) fn best(&self) -> f64 {
        self.best
    }

    pub(crate) fn offer(&mut self, cost: f64, choices: Vec<Choice>) {
        if cost > self.best + COST_TIE_TOL {
            return;
        }
        if cost < self.best {
            self.best = cost;
            let limit = cost + COST_TIE_TOL;
            self.pool.retain(|(c, _)| *c <= limit);
        }
        if !self.pool.iter().any(|(_, v)| *v == choices) {
            self.pool.push((cost, choices));
        }
    }

    pub(crate) fn into_winner(self) -> Option<(f64, Vec<Choice>)> {
        let limit = self.best + COST_TIE_TOL;
        self.pool
            .into_iter()
            .filter(|(c, _)| *c <= limit)
            .min_by(|a, b| a.1.cmp(&b.1))
    }
}
