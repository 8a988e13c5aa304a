//! Exhaustive reference solver for small instances.

use alloc::vec;
use alloc::vec::Vec;

use super::{AssignError, Assignment, AssignmentProblem, Choice, Incumbents};

pub const MAX_PURSUERS: usize = 5;
pub const MAX_EVADERS: usize = 4;
pub const MAX_CANDIDATES: usize = 12;

/// Tries every active set of size at most `M_V` and every covering
/// pursuer-to-evader map; each pursuer then takes its cheapest active
/// candidate (lowest index on exact ties). Same tie-break as [`super::solve`].
pub fn solve_bruteforce(problem: &AssignmentProblem) -> Result<Assignment, AssignError> {
    let (n, m, kk) = problem.dims();
    if n > MAX_PURSUERS || m > MAX_EVADERS || kk > MAX_CANDIDATES {
        return Err(AssignError::InstanceTooLarge {
            max_n: MAX_PURSUERS,
            max_m: MAX_EVADERS,
            max_k: MAX_CANDIDATES,
        });
    }
    if n < m {
        return Err(AssignError::Infeasible);
    }

    let maps = m.pow(n as u32);
    let mut incumbents = Incumbents::new();
    let mut targets = vec![0usize; n];
    let mut covered = vec![false; m];

    for subset in 1u32..(1u32 << kk) {
        if subset.count_ones() as usize > problem.max_virtual_targets() {
            continue;
        }
        let active: Vec<usize> = (0..kk).filter(|k| subset & (1 << k) != 0).collect();
        for code in 0..maps {
            let mut c = code;
            covered.iter_mut().for_each(|b| *b = false);
            for t in targets.iter_mut() {
                *t = c % m;
                c /= m;
                covered[*t] = true;
            }
            if !covered.iter().all(|&b| b) {
                continue;
            }
            let choices: Vec<Choice> = targets
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    let mut best = active[0];
                    for &k in &active[1..] {
                        if problem.cost(i, j, k) < problem.cost(i, j, best) {
                            best = k;
                        }
                    }
                    Choice::new(j, best)
                })
                .collect();
            incumbents.offer(problem.total(&choices), choices);
        }
    }

    let (_, choices) = incumbents.into_winner().ok_or(AssignError::Infeasible)?;
    Ok(Assignment::from_choices(choices, problem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry() {
        let p = AssignmentProblem::new(1, 1, 1, vec![7.3], 1).unwrap();
        let a = solve_bruteforce(&p).unwrap();
        assert_eq!(a.choices, vec![Choice::new(0, 0)]);
        assert_eq!(a.total_cost, 7.3);
    }

    #[test]
    fn infeasible_when_fewer_pursuers() {
        let p = AssignmentProblem::new(1, 2, 1, vec![1.0, 1.0], 1).unwrap();
        assert_eq!(solve_bruteforce(&p), Err(AssignError::Infeasible));
    }

    #[test]
    fn guard() {
        let p = AssignmentProblem::new(1, 1, 13, vec![1.0; 13], 1).unwrap();
        assert!(matches!(solve_bruteforce(&p), Err(AssignError::InstanceTooLarge { .. })));
    }

    #[test]
    fn shared_candidate_forced_by_cap() {
        // N=2, M=2, K=2. Pursuer 0 prefers k=0, pursuer 1 prefers k=1.
        // c[i][j][k], k fastest.
        let costs = vec![
            1.0, 4.0, // p0 e0
            1.5, 5.0, // p0 e1
            6.0, 2.0, // p1 e0
            3.0, 1.0, // p1 e1
        ];
        let p = AssignmentProblem::new(2, 2, 2, costs, 1).unwrap();
        // Feasible points with one shared candidate:
        //   k=0: p0e0+p1e1 = 1+3 = 4, p0e1+p1e0 = 1.5+6 = 7.5
        //   k=1: p0e0+p1e1 = 4+1 = 5, p0e1+p1e0 = 5+2 = 7
        let a = solve_bruteforce(&p).unwrap();
        assert_eq!(a.choices, vec![Choice::new(0, 0), Choice::new(1, 0)]);
        assert_eq!(a.total_cost, 4.0);
        assert_eq!(a.active_vts, vec![0]);

        // With both candidates allowed each pursuer takes its favorite.
        let a = solve_bruteforce(&p.with_max_virtual_targets(2).unwrap()).unwrap();
        assert_eq!(a.choices, vec![Choice::new(0, 0), Choice::new(1, 1)]);
        assert_eq!(a.total_cost, 2.0);
    }
}
