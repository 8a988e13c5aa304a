//! LP-based branch and bound.
//!
//! Nodes are explored best-bound first. Each node solves the continuous
//! relaxation (`0 <= x, y <= 1`) with its branching fixes applied. A node
//! whose relaxation has integral `y` is closed directly: with the active set
//! fixed the remaining problem is a bipartite semi-matching, whose relaxation
//! is integral, so the exact residual solve attains the node bound. Branching
//! goes to the most fractional `y`, and to `x` only if that closure fails
//! numerically.
//!
//! Once the optimum is proven, a second pass fixes pursuers one at a time to
//! the smallest `(evader, candidate)` that still completes within
//! [`COST_TIE_TOL`] of it, so ties always resolve to the same vector.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::lp::{LinearProgram, LpError, Sense};
use super::presolve::useful_candidates;
use super::residual::{self, Restrictions};
use super::{
    AssignError, Assignment, AssignmentProblem, Choice, Incumbents, SolveOutcome, SolveStatus,
    SolverOptions, SolverReport, COST_TIE_TOL,
};

const INT_TOL: f64 = 1e-6;

/// Lets the caller stop the search early (wall clock, cancellation).
pub trait Budget {
    fn exhausted(&self) -> bool;
}

/// Never runs out.
pub struct Unlimited;

impl Budget for Unlimited {
    fn exhausted(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Budget for F {
    fn exhausted(&self) -> bool {
        self()
    }
}

/// Optimal assignment with default options.
pub fn solve(problem: &AssignmentProblem) -> Result<Assignment, AssignError> {
    solve_with(problem, &SolverOptions::default(), &Unlimited).map(|o| o.assignment)
}

struct Model {
    lp: LinearProgram,
    /// Original indices of the candidates kept in the model.
    candidates: Vec<usize>,
    pursuers: usize,
    evaders: usize,
}

impl Model {
    fn build(problem: &AssignmentProblem, candidates: Vec<usize>) -> Self {
        let (n, m, _) = problem.dims();
        let kc = candidates.len();
        let num_x = n * m * kc;
        let mut lp = LinearProgram::new(num_x + kc);
        let model_x = |i: usize, j: usize, c: usize| (i * m + j) * kc + c;

        for i in 0..n {
            for j in 0..m {
                for (c, &k) in candidates.iter().enumerate() {
                    let v = model_x(i, j, c);
                    lp.set_cost(v, problem.cost(i, j, k));
                    lp.set_bounds(v, 0.0, 1.0);
                }
            }
        }
        for c in 0..kc {
            lp.set_bounds(num_x + c, 0.0, 1.0);
        }
        for j in 0..m {
            let terms = (0..n)
                .flat_map(|i| (0..kc).map(move |c| (model_x(i, j, c), 1.0)))
                .collect();
            lp.add_row(terms, Sense::Ge, 1.0);
        }
        for i in 0..n {
            let terms = (0..m)
                .flat_map(|j| (0..kc).map(move |c| (model_x(i, j, c), 1.0)))
                .collect();
            lp.add_row(terms, Sense::Eq, 1.0);
        }
        // Per-pursuer linking: Σ_j x[i][j][k] <= y[k]. Tighter than the
        // per-triple form and equivalent on integer points.
        for i in 0..n {
            for c in 0..kc {
                let mut terms: Vec<(usize, f64)> = (0..m).map(|j| (model_x(i, j, c), 1.0)).collect();
                terms.push((num_x + c, -1.0));
                lp.add_row(terms, Sense::Le, 0.0);
            }
        }
        lp.add_row(
            (0..kc).map(|c| (num_x + c, 1.0)).collect(),
            Sense::Le,
            problem.max_virtual_targets() as f64,
        );
        Self {
            lp,
            candidates,
            pursuers: n,
            evaders: m,
        }
    }

    fn num_x(&self) -> usize {
        self.pursuers * self.evaders * self.candidates.len()
    }

    /// `(pursuer, evader, model candidate)` of an `x` variable.
    fn decode_x(&self, v: usize) -> (usize, usize, usize) {
        let kc = self.candidates.len();
        (v / (self.evaders * kc), (v / kc) % self.evaders, v % kc)
    }

    fn restrictions(&self, fixes: &[(usize, f64)]) -> Restrictions {
        let mut r = Restrictions::none(self.pursuers);
        for &(v, val) in fixes {
            if v >= self.num_x() {
                continue;
            }
            let (i, j, c) = self.decode_x(v);
            if val > 0.5 {
                r.forced[i] = Some(Choice::new(j, self.candidates[c]));
            } else {
                r.forbidden.push((i, j, self.candidates[c]));
            }
        }
        r.forbidden.sort_unstable();
        r
    }
}

#[derive(Debug)]
struct Node {
    bound: f64,
    id: u64,
    fixes: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: reverse so the lowest bound, then the oldest
    // node, pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(other.id.cmp(&self.id))
    }
}

/// Most fractional variable in `range`, lowest index on ties.
fn most_fractional(x: &[f64], range: core::ops::Range<usize>) -> Option<usize> {
    let mut pick = None;
    let mut best = INT_TOL;
    for v in range {
        let frac = x[v].min(1.0 - x[v]);
        if frac > best {
            best = frac;
            pick = Some(v);
        }
    }
    pick
}

fn greedy(problem: &AssignmentProblem, candidates: &[usize]) -> Option<(f64, Vec<Choice>)> {
    let (n, m, _) = problem.dims();
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .map(|&k| {
            let score = (0..n)
                .map(|i| (0..m).map(|j| problem.cost(i, j, k)).fold(f64::INFINITY, f64::min))
                .sum();
            (score, k)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut active: Vec<usize> = scored
        .iter()
        .take(problem.max_virtual_targets())
        .map(|&(_, k)| k)
        .collect();
    active.sort_unstable();
    residual::lexmin(problem, &active, &Restrictions::none(n))
}

/// Active set from the largest relaxed `y` values, capped at `M_V`.
fn rounded_active(model: &Model, y: &[f64], cap: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).filter(|&c| y[c] > INT_TOL).collect();
    order.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));
    let mut active: Vec<usize> = order.into_iter().take(cap).map(|c| model.candidates[c]).collect();
    active.sort_unstable();
    active
}

/// Search state shared by the optimization pass and the tie-break pass.
struct Search<'a> {
    problem: &'a AssignmentProblem,
    model: Model,
    lower: Vec<f64>,
    upper: Vec<f64>,
    node_limit: u64,
    budget: &'a dyn Budget,
    nodes: u64,
    lp_iterations: u64,
    next_id: u64,
    root_bound: f64,
}

/// How a search ended.
enum Stop {
    /// Every node was explored or pruned.
    Exhausted,
    /// Node limit or budget hit; carries the lowest open bound.
    Limit(SolveStatus, f64),
    /// A solution at or below the cutoff was found.
    Found,
}

impl<'a> Search<'a> {
    /// Best-first search from `root` fixes. With `cutoff = None` this
    /// minimizes, pruning against the incumbent; with a cutoff it prunes
    /// against the cutoff and stops at the first solution below it.
    fn run(
        &mut self,
        root: Vec<(usize, f64)>,
        incumbents: &mut Incumbents,
        cutoff: Option<f64>,
    ) -> Result<Stop, AssignError> {
        let num_x = self.model.num_x();
        let mut heap = BinaryHeap::new();
        heap.push(Node {
            bound: f64::NEG_INFINITY,
            id: 0,
            fixes: root,
        });
        let limit_of = |inc: &Incumbents| cutoff.unwrap_or(inc.best() + COST_TIE_TOL);

        while let Some(node) = heap.pop() {
            if cutoff.is_some_and(|c| incumbents.best() <= c) {
                return Ok(Stop::Found);
            }
            if node.bound > limit_of(incumbents) {
                return Ok(Stop::Exhausted);
            }
            if self.nodes >= self.node_limit || self.budget.exhausted() {
                let status = if self.nodes >= self.node_limit {
                    SolveStatus::NodeLimit
                } else {
                    SolveStatus::BudgetExhausted
                };
                let open = heap.iter().map(|n| n.bound).fold(node.bound, f64::min);
                return Ok(Stop::Limit(status, open));
            }
            self.nodes += 1;

            let (mut lower, mut upper) = (self.lower.clone(), self.upper.clone());
            for &(v, val) in &node.fixes {
                lower[v] = val;
                upper[v] = val;
            }
            let relaxed = match self.model.lp.solve_with_bounds(&lower, &upper) {
                Ok(s) => s,
                Err(LpError::Infeasible) => {
                    if self.root_bound.is_nan() {
                        self.root_bound = f64::INFINITY;
                    }
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            self.lp_iterations += relaxed.iterations as u64;
            let bound = relaxed.objective;
            if self.root_bound.is_nan() {
                self.root_bound = bound;
            }
            if bound > limit_of(incumbents) {
                continue;
            }
            let x = &relaxed.x;
            let frac_x = most_fractional(x, 0..num_x);
            let frac_y = most_fractional(x, num_x..x.len());
            let restrictions = self.model.restrictions(&node.fixes);

            let branch_var = match (frac_x, frac_y) {
                (None, _) => {
                    let mut active: Vec<usize> = (0..num_x)
                        .filter(|&v| x[v] > 0.5)
                        .map(|v| self.model.candidates[self.model.decode_x(v).2])
                        .collect();
                    active.sort_unstable();
                    active.dedup();
                    if let Some((cost, choices)) = residual::lexmin(self.problem, &active, &restrictions) {
                        incumbents.offer(cost, choices);
                    }
                    continue;
                }
                (Some(xv), None) => {
                    let active: Vec<usize> = (0..self.model.candidates.len())
                        .filter(|&c| x[num_x + c] > 0.5)
                        .map(|c| self.model.candidates[c])
                        .collect();
                    if let Some((cost, choices)) = residual::lexmin(self.problem, &active, &restrictions) {
                        let closes = cost <= bound + 1e-7 * (1.0 + bound.abs());
                        incumbents.offer(cost, choices);
                        if closes {
                            continue;
                        }
                    }
                    xv
                }
                (_, Some(yv)) => {
                    let active =
                        rounded_active(&self.model, &x[num_x..], self.problem.max_virtual_targets());
                    if let Some((cost, choices)) = residual::lexmin(self.problem, &active, &restrictions) {
                        incumbents.offer(cost, choices);
                    }
                    yv
                }
            };

            for val in [0.0, 1.0] {
                let mut fixes = node.fixes.clone();
                fixes.push((branch_var, val));
                heap.push(Node {
                    bound,
                    id: self.next_id,
                    fixes,
                });
                self.next_id += 1;
            }
        }
        Ok(if cutoff.is_some_and(|c| incumbents.best() <= c) {
            Stop::Found
        } else {
            Stop::Exhausted
        })
    }

    /// Lexicographically smallest choice vector among all assignments
    /// costing at most `cutoff`, found by fixing one pursuer at a time to its
    /// smallest `(evader, candidate)` that still admits a completion.
    /// `None` if a limit interrupts it.
    fn lexmin(&mut self, cutoff: f64) -> Result<Option<Vec<Choice>>, AssignError> {
        let (n, m) = (self.model.pursuers, self.model.evaders);
        let kc = self.model.candidates.len();
        let problem = self.problem;
        let cheapest: Vec<f64> = (0..n)
            .map(|i| {
                (0..m)
                    .flat_map(|j| self.model.candidates.iter().map(move |&k| problem.cost(i, j, k)))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();

        let mut fixes: Vec<(usize, f64)> = Vec::new();
        let mut chosen: Vec<Choice> = Vec::with_capacity(n);
        let mut fixed_cost = 0.0;
        for i in 0..n {
            let rest: f64 = cheapest[i + 1..].iter().sum();
            let mut accepted = None;
            'scan: for j in 0..m {
                for c in 0..kc {
                    let k = self.model.candidates[c];
                    let cost = problem.cost(i, j, k);
                    // Slack for rounding between this sum and the solver's.
                    if fixed_cost + cost + rest > cutoff + 1e-12 * (1.0 + cutoff.abs()) {
                        continue;
                    }
                    let mut trial = fixes.clone();
                    trial.push(((i * m + j) * kc + c, 1.0));
                    let mut found = Incumbents::new();
                    match self.run(trial.clone(), &mut found, Some(cutoff))? {
                        Stop::Found => {
                            accepted = Some((trial, Choice::new(j, k), cost));
                            break 'scan;
                        }
                        Stop::Exhausted => {}
                        Stop::Limit(..) => return Ok(None),
                    }
                }
            }
            match accepted {
                Some((trial, choice, cost)) => {
                    fixes = trial;
                    chosen.push(choice);
                    fixed_cost += cost;
                }
                None => return Ok(None),
            }
        }
        Ok(Some(chosen))
    }
}

/// Branch and bound with explicit options and a stopping budget. Returns
/// the best assignment found; `report.status` says whether it is proven
/// optimal.
pub fn solve_with(
    problem: &AssignmentProblem,
    options: &SolverOptions,
    budget: &dyn Budget,
) -> Result<SolveOutcome, AssignError> {
    let (n, m, kk) = problem.dims();
    if n < m {
        return Err(AssignError::Infeasible);
    }
    let candidates = if options.presolve {
        useful_candidates(problem, options.presolve_limit).unwrap_or_else(|| (0..kk).collect())
    } else {
        (0..kk).collect()
    };

    let mut incumbents = Incumbents::new();
    if let Some((cost, choices)) = greedy(problem, &candidates) {
        incumbents.offer(cost, choices);
    }
    let initial_incumbent = incumbents.best();

    let model = Model::build(problem, candidates);
    let (lower, upper) = model.lp.bounds();
    let (lower, upper) = (lower.to_vec(), upper.to_vec());
    let mut search = Search {
        problem,
        model,
        lower,
        upper,
        node_limit: options.node_limit,
        budget,
        nodes: 0,
        lp_iterations: 0,
        next_id: 1,
        root_bound: f64::NAN,
    };

    let (status, open_bound) = match search.run(Vec::new(), &mut incumbents, None)? {
        Stop::Limit(status, open) => (status, open),
        Stop::Exhausted | Stop::Found => (SolveStatus::Optimal, f64::INFINITY),
    };
    let (mut objective, mut choices) = incumbents.into_winner().ok_or(AssignError::Infeasible)?;
    if status == SolveStatus::Optimal {
        if let Some(v) = search.lexmin(objective + COST_TIE_TOL)? {
            if v < choices {
                objective = problem.total(&v);
                choices = v;
            }
        }
    }
    let best_bound = open_bound.min(objective);
    Ok(SolveOutcome {
        assignment: Assignment::from_choices(choices, problem),
        report: SolverReport {
            status,
            objective,
            best_bound,
            gap: (objective - best_bound).max(0.0),
            root_bound: search.root_bound,
            initial_incumbent,
            nodes: search.nodes,
            lp_iterations: search.lp_iterations,
            candidates_searched: search.model.candidates.len(),
        },
    })
}
