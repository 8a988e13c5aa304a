//! Dense bounded-variable revised simplex.
//!
//! Solves `min c·x` subject to sparse rows `a·x {<=, >=, =} b` and
//! `lower <= x <= upper`. Every variable needs a finite lower bound.
//! Phase one drives artificial variables out; phase two optimizes. The basis
//! inverse is kept explicitly, updated by elementary row operations on each
//! pivot and rebuilt from scratch periodically. Dantzig pricing switches to
//! Bland's rule during long degenerate stretches.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-7;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("variable {0} has no finite lower bound")]
    UnsupportedBounds(usize),
    #[error("basis became numerically singular")]
    Singular,
}

#[derive(Debug, Clone)]
struct Row {
    terms: Vec<(usize, f64)>,
    sense: Sense,
    rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LinearProgram {
    /// `num_vars` variables with zero cost and bounds `[0, +inf)`.
    pub fn new(num_vars: usize) -> Self {
        Self {
            objective: vec![0.0; num_vars],
            lower: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_cost(&mut self, var: usize, cost: f64) {
        self.objective[var] = cost;
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.rows.push(Row { terms, sense, rhs });
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        self.solve_with_bounds(&self.lower, &self.upper)
    }

    /// Solves with `lower`/`upper` in place of the stored bounds.
    pub fn solve_with_bounds(&self, lower: &[f64], upper: &[f64]) -> Result<LpSolution, LpError> {
        for (j, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
            if !lo.is_finite() {
                return Err(LpError::UnsupportedBounds(j));
            }
            if lo > hi + PRIMAL_TOL {
                return Err(LpError::Infeasible);
            }
        }
        let mut tableau = Simplex::build(self, lower, upper);
        tableau.run()?;
        let n = self.num_vars();
        let x: Vec<f64> = tableau.x[..n].to_vec();
        let objective = x.iter().zip(&self.objective).map(|(v, c)| v * c).sum();
        Ok(LpSolution {
            x,
            objective,
            iterations: tableau.iterations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
}

struct Simplex {
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    artificial_start: usize,
    iterations: usize,
}

impl Simplex {
    fn build(lp: &LinearProgram, lower: &[f64], upper: &[f64]) -> Self {
        let n = lp.num_vars();
        let m = lp.rows.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (r, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.terms {
                if a != 0.0 {
                    cols[j].push((r, a));
                }
            }
        }
        let mut lo = lower.to_vec();
        let mut hi = upper.to_vec();
        let mut cost = lp.objective.clone();
        let mut x: Vec<f64> = lo.clone();
        let mut state = vec![State::AtLower; n];

        let mut residual: Vec<f64> = lp.rows.iter().map(|r| r.rhs).collect();
        for (j, col) in cols.iter().enumerate() {
            for &(r, a) in col {
                residual[r] -= a * x[j];
            }
        }

        // Slack columns: +1 for <=, -1 for >=.
        let mut basis = vec![usize::MAX; m];
        let mut basis_sign = vec![1.0; m];
        for (r, row) in lp.rows.iter().enumerate() {
            let coef = match row.sense {
                Sense::Le => 1.0,
                Sense::Ge => -1.0,
                Sense::Eq => continue,
            };
            let j = cols.len();
            cols.push(vec![(r, coef)]);
            lo.push(0.0);
            hi.push(f64::INFINITY);
            cost.push(0.0);
            let value = residual[r] * coef;
            if value >= 0.0 {
                x.push(value);
                state.push(State::Basic);
                basis[r] = j;
                basis_sign[r] = coef;
            } else {
                x.push(0.0);
                state.push(State::AtLower);
            }
        }
        let artificial_start = cols.len();
        for r in 0..m {
            if basis[r] != usize::MAX {
                continue;
            }
            let coef = if residual[r] >= 0.0 { 1.0 } else { -1.0 };
            let j = cols.len();
            cols.push(vec![(r, coef)]);
            lo.push(0.0);
            hi.push(f64::INFINITY);
            cost.push(0.0);
            x.push(residual[r].abs());
            state.push(State::Basic);
            basis[r] = j;
            basis_sign[r] = coef;
        }

        let mut binv = vec![0.0; m * m];
        for r in 0..m {
            binv[r * m + r] = basis_sign[r];
        }
        Simplex {
            m,
            cols,
            rhs: lp.rows.iter().map(|r| r.rhs).collect(),
            cost,
            lo,
            hi,
            x,
            state,
            basis,
            binv,
            artificial_start,
            iterations: 0,
        }
    }

    fn run(&mut self) -> Result<(), LpError> {
        let total = self.cols.len();
        if self.artificial_start < total {
            let mut phase1 = vec![0.0; total];
            phase1[self.artificial_start..].iter_mut().for_each(|c| *c = 1.0);
            self.optimize(&phase1)?;
            let infeasibility: f64 = self.x[self.artificial_start..].iter().sum();
            if infeasibility > PRIMAL_TOL * (1.0 + self.m as f64) {
                return Err(LpError::Infeasible);
            }
            for j in self.artificial_start..total {
                self.hi[j] = 0.0;
                if self.state[j] != State::Basic {
                    self.x[j] = 0.0;
                    self.state[j] = State::AtLower;
                }
            }
        }
        let phase2 = self.cost.clone();
        self.optimize(&phase2)
    }

    fn optimize(&mut self, cost: &[f64]) -> Result<(), LpError> {
        let m = self.m;
        let total = self.cols.len();
        let limit = 50 * (m + total) + 1000;
        let mut duals = vec![0.0; m];
        let mut alpha = vec![0.0; m];
        let mut degenerate_run = 0usize;
        let mut since_refactor = 0usize;

        loop {
            if self.iterations > limit {
                return Err(LpError::IterationLimit);
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
            }
            let bland = degenerate_run > 2 * m + 10;

            // duals = c_B^T B^-1
            duals.iter_mut().for_each(|d| *d = 0.0);
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = cost[b];
                if cb != 0.0 {
                    let row = &self.binv[i * m..(i + 1) * m];
                    for (d, &v) in duals.iter_mut().zip(row) {
                        *d += cb * v;
                    }
                }
            }

            let mut entering = None;
            let mut best_score = 0.0;
            for j in 0..total {
                let st = self.state[j];
                if st == State::Basic || self.hi[j] - self.lo[j] <= 0.0 {
                    continue;
                }
                let reduced = cost[j] - self.cols[j].iter().map(|&(r, a)| duals[r] * a).sum::<f64>();
                let score = match st {
                    State::AtLower if reduced < -DUAL_TOL => -reduced,
                    State::AtUpper if reduced > DUAL_TOL => reduced,
                    _ => continue,
                };
                if bland {
                    entering = Some(j);
                    break;
                }
                if score > best_score {
                    best_score = score;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            let dir = if self.state[q] == State::AtLower { 1.0 } else { -1.0 };

            alpha.iter_mut().for_each(|a| *a = 0.0);
            for &(r, a) in &self.cols[q] {
                for (i, al) in alpha.iter_mut().enumerate() {
                    *al += self.binv[i * m + r] * a;
                }
            }

            let mut step = self.hi[q] - self.lo[q];
            let mut leave: Option<(usize, State)> = None;
            let mut leave_mag = 0.0;
            for i in 0..m {
                let delta = dir * alpha[i];
                let b = self.basis[i];
                let (ratio, hits) = if delta > PIVOT_TOL {
                    ((self.x[b] - self.lo[b]) / delta, State::AtLower)
                } else if delta < -PIVOT_TOL && self.hi[b].is_finite() {
                    ((self.hi[b] - self.x[b]) / -delta, State::AtUpper)
                } else {
                    continue;
                };
                let ratio = ratio.max(0.0);
                let take = if ratio < step - 1e-12 {
                    true
                } else if ratio <= step + 1e-12 {
                    match leave {
                        None => true,
                        Some((li, _)) if bland => b < self.basis[li],
                        Some(_) => delta.abs() > leave_mag,
                    }
                } else {
                    false
                };
                if take {
                    step = step.min(ratio);
                    leave = Some((i, hits));
                    leave_mag = delta.abs();
                }
            }
            if !step.is_finite() {
                return Err(LpError::Unbounded);
            }

            self.iterations += 1;
            since_refactor += 1;
            if step <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            self.x[q] += dir * step;
            for i in 0..m {
                let b = self.basis[i];
                self.x[b] -= step * dir * alpha[i];
            }

            match leave {
                None => {
                    // Bound flip, basis unchanged.
                    if dir > 0.0 {
                        self.state[q] = State::AtUpper;
                        self.x[q] = self.hi[q];
                    } else {
                        self.state[q] = State::AtLower;
                        self.x[q] = self.lo[q];
                    }
                }
                Some((r, hits)) => {
                    let b = self.basis[r];
                    self.state[b] = hits;
                    self.x[b] = if hits == State::AtLower { self.lo[b] } else { self.hi[b] };
                    self.state[q] = State::Basic;
                    self.basis[r] = q;
                    self.pivot(r, &alpha);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let p = alpha[r];
        for v in &mut self.binv[r * m..(r + 1) * m] {
            *v /= p;
        }
        let (head, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, tail) = rest.split_at_mut(m);
        for (i, row) in head.chunks_mut(m).enumerate() {
            let f = alpha[i];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
        for (off, row) in tail.chunks_mut(m).enumerate() {
            let f = alpha[r + 1 + off];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
    }

    /// Rebuilds `B^-1` by Gauss-Jordan and recomputes basic values.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (c, &b) in self.basis.iter().enumerate() {
            for &(r, v) in &self.cols[b] {
                a[r * m + c] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in col + 1..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::Singular);
            }
            if piv != col {
                for k in 0..m {
                    a.swap(col * m + k, piv * m + k);
                    inv.swap(col * m + k, piv * m + k);
                }
            }
            let d = a[col * m + col];
            for k in 0..m {
                a[col * m + k] /= d;
                inv[col * m + k] /= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= f * a[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;

        let mut residual = self.rhs.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if self.state[j] != State::Basic {
                for &(r, v) in col {
                    residual[r] -= v * self.x[j];
                }
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x[self.basis[i]] = row.iter().zip(&residual).map(|(a, b)| a * b).sum();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -3.0);
        lp.set_cost(1, -5.0);
        lp.add_row(vec![(0, 1.0)], Sense::Le, 4.0);
        lp.add_row(vec![(1, 2.0)], Sense::Le, 12.0);
        lp.add_row(vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // min x + 2y + 3z, x + y + z = 1, y + z >= 0.5, bounds [0, 1]
        let mut lp = LinearProgram::new(3);
        for (j, c) in [1.0, 2.0, 3.0].into_iter().enumerate() {
            lp.set_cost(j, c);
            lp.set_bounds(j, 0.0, 1.0);
        }
        lp.add_row(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Sense::Eq, 1.0);
        lp.add_row(vec![(1, 1.0), (2, 1.0)], Sense::Ge, 0.5);
        let s = lp.solve().unwrap();
        assert!((s.objective - 1.5).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.set_bounds(0, 0.0, 1.0);
        lp.add_row(vec![(0, 1.0)], Sense::Ge, 2.0);
        assert_eq!(lp.solve(), Err(LpError::Infeasible));

        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -1.0);
        lp.add_row(vec![(0, 1.0), (1, -1.0)], Sense::Le, 1.0);
        assert_eq!(lp.solve(), Err(LpError::Unbounded));
    }

    #[test]
    fn upper_bounds_flip() {
        // min -x - y with x, y in [0, 1] and no rows.
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -1.0);
        lp.set_cost(1, -1.0);
        lp.set_bounds(0, 0.0, 1.0);
        lp.set_bounds(1, 0.0, 1.0);
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![1.0, 1.0]);
    }

    #[test]
    fn override_bounds() {
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, 1.0);
        lp.set_cost(1, 2.0);
        lp.set_bounds(0, 0.0, 1.0);
        lp.set_bounds(1, 0.0, 1.0);
        lp.add_row(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0);
        let s = lp.solve_with_bounds(&[0.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
        assert_eq!(lp.solve_with_bounds(&[0.0, 0.0], &[0.0, 0.0]), Err(LpError::Infeasible));
    }

    /// Vertex enumeration for two-variable programs: every optimum of a
    /// bounded feasible LP sits at an intersection of two active lines.
    fn vertex_oracle(lines: &[(f64, f64, Sense, f64)], c: (f64, f64)) -> Option<f64> {
        let feasible = |x: f64, y: f64| {
            lines.iter().all(|&(a, b, s, r)| {
                let v = a * x + b * y;
                match s {
                    Sense::Le => v <= r + 1e-7,
                    Sense::Ge => v >= r - 1e-7,
                    Sense::Eq => (v - r).abs() <= 1e-7,
                }
            })
        };
        let mut best: Option<f64> = None;
        for p in 0..lines.len() {
            for q in p + 1..lines.len() {
                let (a1, b1, _, r1) = lines[p];
                let (a2, b2, _, r2) = lines[q];
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (r1 * b2 - r2 * b1) / det;
                let y = (a1 * r2 - a2 * r1) / det;
                if feasible(x, y) {
                    let v = c.0 * x + c.1 * y;
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                }
            }
        }
        best
    }

    #[test]
    fn random_planar_programs_match_vertex_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let c = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let (ux, uy) = (rng.gen_range(0.5..5.0), rng.gen_range(0.5..5.0));
            let mut lines = vec![
                (1.0, 0.0, Sense::Ge, 0.0),
                (0.0, 1.0, Sense::Ge, 0.0),
                (1.0, 0.0, Sense::Le, ux),
                (0.0, 1.0, Sense::Le, uy),
            ];
            let mut lp = LinearProgram::new(2);
            lp.set_cost(0, c.0);
            lp.set_cost(1, c.1);
            lp.set_bounds(0, 0.0, ux);
            lp.set_bounds(1, 0.0, uy);
            for _ in 0..rng.gen_range(1..5) {
                let a = rng.gen_range(-3.0..3.0);
                let b = rng.gen_range(-3.0..3.0);
                let r = rng.gen_range(-2.0..6.0);
                let s = if rng.gen_bool(0.5) { Sense::Le } else { Sense::Ge };
                lines.push((a, b, s, r));
                lp.add_row(vec![(0, a), (1, b)], s, r);
            }
            let oracle = vertex_oracle(&lines, c);
            match (lp.solve(), oracle) {
                (Ok(s), Some(v)) => assert!((s.objective - v).abs() < 1e-6, "{} vs {v}", s.objective),
                (Err(LpError::Infeasible), None) => {}
                (got, want) => panic!("lp {got:?} oracle {want:?}"),
            }
        }
    }
}
