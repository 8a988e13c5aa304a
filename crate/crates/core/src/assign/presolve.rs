//! Candidate reduction.
//!
//! In any solution, the pursuers routed through one active candidate form a
//! group `G` with evader targets `j_i`. Moving the whole group to the
//! candidate minimizing `Σ_{i∈G} c[i][j_i][k]` never adds an active candidate
//! and never raises the cost. So every solution within [`COST_TIE_TOL`] of the
//! optimum only uses candidates that are within tolerance of that minimum for
//! some (group, targets) pattern, and there are only `(M + 1)^N - 1` patterns.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{AssignmentProblem, COST_TIE_TOL};

/// Candidates that can appear in a near-optimal solution, ascending, or
/// `None` when the number of patterns exceeds `pattern_limit`.
pub fn useful_candidates(problem: &AssignmentProblem, pattern_limit: usize) -> Option<Vec<usize>> {
    let (n, m, kk) = problem.dims();
    let mut patterns: usize = 1;
    for _ in 0..n {
        patterns = patterns.checked_mul(m + 1)?;
        if patterns > pattern_limit.saturating_add(1) {
            return None;
        }
    }

    let mut keep = BTreeSet::new();
    let mut targets = vec![0usize; n]; // 0 = not in group, j + 1 = evader j
    let mut group_cost = vec![0.0f64; kk];
    for _ in 1..patterns {
        // Odometer increment in base m + 1.
        for t in targets.iter_mut() {
            *t += 1;
            if *t <= m {
                break;
            }
            *t = 0;
        }
        group_cost.iter_mut().for_each(|g| *g = 0.0);
        for (i, &t) in targets.iter().enumerate() {
            if t == 0 {
                continue;
            }
            for (k, g) in group_cost.iter_mut().enumerate() {
                *g += problem.cost(i, t - 1, k);
            }
        }
        let min = group_cost.iter().copied().fold(f64::INFINITY, f64::min);
        let limit = min + COST_TIE_TOL;
        for (k, &g) in group_cost.iter().enumerate() {
            if g <= limit {
                keep.insert(k);
            }
        }
    }
    Some(keep.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_per_pursuer_and_shared_minimizers() {
        // N=2, M=1, K=3: pursuer 0 likes k=0, pursuer 1 likes k=2, together k=1.
        let costs = vec![0.0, 1.0, 5.0, 5.0, 1.0, 0.0];
        let p = AssignmentProblem::new(2, 1, 3, costs, 1).unwrap();
        assert_eq!(useful_candidates(&p, 100), Some(vec![0, 1, 2]));

        // A candidate dominated for every pattern is dropped.
        let costs = vec![0.0, 9.0, 5.0, 5.0, 9.0, 0.0];
        let p = AssignmentProblem::new(2, 1, 3, costs, 1).unwrap();
        assert_eq!(useful_candidates(&p, 100), Some(vec![0, 2]));
    }

    #[test]
    fn respects_pattern_limit() {
        let p = AssignmentProblem::new(4, 2, 1, vec![1.0; 8], 1).unwrap();
        assert_eq!(useful_candidates(&p, 10), None);
        assert!(useful_candidates(&p, 80).is_some());
    }
}
