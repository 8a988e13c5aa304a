//! The assignment problem once the active candidate set is known.
//!
//! With the active set fixed, each pursuer's best way to reach evader `j` is
//! its cheapest active candidate, and what remains is a semi-matching: every
//! pursuer takes one evader and every evader gets at least one pursuer. Let
//! `m_i` be pursuer `i`'s cheapest evader. Any covering map costs
//! `Σ m_i` plus, for one representative pursuer per evader, `c'[i][j] - m_i`,
//! so the optimum is a rectangular min-cost matching of evaders to distinct
//! pursuers.

use alloc::vec;
use alloc::vec::Vec;

use super::flow::assign_rows;
use super::{AssignmentProblem, Choice, COST_TIE_TOL};

/// Extra per-pursuer restrictions coming from branching on `x` variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Restrictions {
    pub forced: Vec<Option<Choice>>,
    /// Sorted `(pursuer, evader, candidate)` triples that may not be used.
    pub forbidden: Vec<(usize, usize, usize)>,
}

impl Restrictions {
    pub(crate) fn none(pursuers: usize) -> Self {
        Self {
            forced: vec![None; pursuers],
            forbidden: Vec::new(),
        }
    }

    fn allows(&self, i: usize, j: usize, k: usize) -> bool {
        self.forbidden.binary_search(&(i, j, k)).is_err()
    }
}

/// Cheapest covering assignment restricted to `active` (ascending indices).
pub(crate) fn optimum(
    problem: &AssignmentProblem,
    active: &[usize],
    restrictions: &Restrictions,
) -> Option<(f64, Vec<Choice>)> {
    let (n, m, _) = problem.dims();
    if n < m || active.is_empty() {
        return None;
    }
    // best[i][j]: cheapest active candidate for pursuer i to reach evader j.
    let mut best: Vec<Vec<Option<(f64, usize)>>> = vec![vec![None; m]; n];
    for i in 0..n {
        if let Some(forced) = restrictions.forced[i] {
            if active.binary_search(&forced.candidate).is_err() {
                return None;
            }
            best[i][forced.evader] = Some((problem.cost(i, forced.evader, forced.candidate), forced.candidate));
            continue;
        }
        for j in 0..m {
            for &k in active {
                if !restrictions.allows(i, j, k) {
                    continue;
                }
                let c = problem.cost(i, j, k);
                if best[i][j].is_none_or(|(b, _)| c < b) {
                    best[i][j] = Some((c, k));
                }
            }
        }
    }

    let mut own = Vec::with_capacity(n);
    for row in &best {
        let mut pick: Option<(f64, usize)> = None;
        for (j, entry) in row.iter().enumerate() {
            if let Some((c, _)) = entry {
                if pick.is_none_or(|(b, _)| *c < b) {
                    pick = Some((*c, j));
                }
            }
        }
        own.push(pick?);
    }

    // rows: evaders, columns: pursuers
    let reduced: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            (0..n)
                .map(|i| match best[i][j] {
                    Some((c, _)) => (c - own[i].0).max(0.0),
                    None => f64::INFINITY,
                })
                .collect()
        })
        .collect();
    let rep = assign_rows(&reduced, n)?;

    let mut target: Vec<usize> = own.iter().map(|&(_, j)| j).collect();
    for (j, &i) in rep.iter().enumerate() {
        target[i] = j;
    }
    let choices: Vec<Choice> = target
        .iter()
        .enumerate()
        .map(|(i, &j)| Choice::new(j, best[i][j].expect("reachable").1))
        .collect();
    Some((problem.total(&choices), choices))
}

/// Lexicographically smallest choice vector among the assignments restricted
/// to `active` whose cost is within [`COST_TIE_TOL`] of the restricted optimum.
pub(crate) fn lexmin(
    problem: &AssignmentProblem,
    active: &[usize],
    restrictions: &Restrictions,
) -> Option<(f64, Vec<Choice>)> {
    let (n, m, _) = problem.dims();
    let (opt, _) = optimum(problem, active, restrictions)?;
    let limit = opt + COST_TIE_TOL;
    let mut fixed = restrictions.clone();
    for i in 0..n {
        if fixed.forced[i].is_some() {
            continue;
        }
        'search: for j in 0..m {
            for &k in active {
                if !fixed.allows(i, j, k) {
                    continue;
                }
                fixed.forced[i] = Some(Choice::new(j, k));
                if let Some((c, _)) = optimum(problem, active, &fixed) {
                    if c <= limit {
                        break 'search;
                    }
                }
                fixed.forced[i] = None;
            }
        }
        debug_assert!(fixed.forced[i].is_some());
        fixed.forced[i]?;
    }
    let choices: Vec<Choice> = fixed.forced.iter().map(|c| c.expect("all fixed")).collect();
    Some((problem.total(&choices), choices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Enumerates every covering evader map for a fixed active set.
    fn enumerate(problem: &AssignmentProblem, active: &[usize]) -> Option<f64> {
        let (n, m, _) = problem.dims();
        let mut best: Option<f64> = None;
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut covered = vec![false; m];
            let mut cost = 0.0;
            for i in 0..n {
                let j = c % m;
                c /= m;
                covered[j] = true;
                cost += active
                    .iter()
                    .map(|&k| problem.cost(i, j, k))
                    .fold(f64::INFINITY, f64::min);
            }
            if covered.iter().all(|&b| b) {
                best = Some(best.map_or(cost, |b: f64| b.min(cost)));
            }
        }
        best
    }

    #[test]
    fn optimum_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=3);
            let kk = rng.gen_range(1..=5);
            let costs = (0..n * m * kk).map(|_| rng.gen_range(0.0..10.0)).collect();
            let p = AssignmentProblem::new(n, m, kk, costs, 1).unwrap();
            let mut active: Vec<usize> = (0..kk).filter(|_| rng.gen_bool(0.5)).collect();
            if active.is_empty() {
                active.push(0);
            }
            let r = Restrictions::none(n);
            let got = optimum(&p, &active, &r).map(|(c, _)| c);
            let want = enumerate(&p, &active);
            match (got, want) {
                (Some(g), Some(w)) => assert!((g - w).abs() < 1e-9),
                (None, None) => {}
                other => panic!("{other:?}"),
            }
            if let Some((c, v)) = lexmin(&p, &active, &r) {
                assert!((c - want.unwrap()).abs() <= COST_TIE_TOL + 1e-12);
                assert_eq!(v.len(), n);
            }
        }
    }

    #[test]
    fn lexmin_prefers_smaller_vector_on_ties() {
        // Two pursuers, one evader, two candidates, all costs equal.
        let p = AssignmentProblem::new(2, 1, 2, vec![1.0; 4], 2).unwrap();
        let (c, v) = lexmin(&p, &[0, 1], &Restrictions::none(2)).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(v, vec![Choice::new(0, 0), Choice::new(0, 0)]);
    }

    #[test]
    fn forced_and_forbidden() {
        let p = AssignmentProblem::new(2, 2, 1, vec![1.0, 5.0, 1.0, 5.0], 1).unwrap();
        let mut r = Restrictions::none(2);
        r.forbidden = vec![(0, 1, 0)];
        let (c, v) = optimum(&p, &[0], &r).unwrap();
        assert_eq!(v, vec![Choice::new(0, 0), Choice::new(1, 0)]);
        assert_eq!(c, 6.0);
        r.forced[1] = Some(Choice::new(0, 0));
        assert_eq!(optimum(&p, &[0], &r), None);
    }
}
