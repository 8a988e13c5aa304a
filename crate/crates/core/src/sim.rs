//! Flies a plan and checks every capture.
//!
//! Motion is piecewise linear (constant velocity between heading switches), so
//! positions are advanced exactly from the last heading switch rather than by
//! a numerical integrator. `dt` only sets how densely trajectories are
//! sampled; heading switches and capture times are always sampled exactly.

use alloc::vec::Vec;

use thiserror::Error;

use crate::apollonius::InterceptSolution;
use crate::assign::{check_feasible, Assignment, AssignmentProblem, ConstraintViolation};
use crate::cost::CostTensor;
use crate::geom::Point2;
use crate::scenario::Scenario;

/// Default capture tolerance.
pub const CAPTURE_TOL: f64 = 1e-6;

const MAX_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("time step too small: more than {MAX_SAMPLES} samples")]
    TooManySamples,
    #[error("assignment is infeasible ({} constraint violations)", .0.len())]
    InfeasibleAssignment(Vec<ConstraintViolation>),
    #[error("cost tensor does not match the scenario")]
    DimensionMismatch,
    #[error("plan refers to pursuer {pursuer} / evader {evader}, which do not exist")]
    UnknownAgent { pursuer: usize, evader: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Pursuer,
    Evader,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Pursuer => "pursuer",
            Role::Evader => "evader",
        }
    }
}

/// Time-stamped positions of one agent, strictly increasing in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub role: Role,
    pub id: u32,
    pub samples: Vec<(f64, Point2)>,
}

/// What one pursuer flies: heading 1 until `t1`, heading 2 until `t_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuerPlan {
    pub pursuer: usize,
    pub evader: usize,
    pub vt: Point2,
    pub heading_phase1: f64,
    pub heading_phase2: f64,
    pub t1: f64,
    pub t_f: f64,
}

impl PursuerPlan {
    pub fn from_solution(pursuer: usize, evader: usize, solution: &InterceptSolution) -> Self {
        Self {
            pursuer,
            evader,
            vt: solution.circle.vt,
            heading_phase1: solution.heading_phase1,
            heading_phase2: solution.heading_phase2,
            t1: solution.t1,
            t_f: solution.t_f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaptureEntry {
    pub pursuer: usize,
    pub evader: usize,
    pub t1: f64,
    pub t_f: f64,
    /// Distance from the pursuer to its virtual target at `t1`.
    pub miss_at_vt: f64,
    /// Distance from the pursuer to its evader at `t_f`.
    pub miss_at_intercept: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptureReport {
    pub entries: Vec<CaptureEntry>,
    /// Tolerance `pass` was evaluated at.
    pub tolerance: f64,
    /// Closest approach of any two pursuers while both are still flying.
    /// Informational only; `None` with fewer than two pursuers.
    pub min_pursuer_separation: Option<f64>,
}

impl CaptureReport {
    /// Re-evaluates every `pass` flag at `tol`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        for e in &mut self.entries {
            e.pass = e.miss_at_vt < tol && e.miss_at_intercept < tol;
        }
        self
    }
}

/// True iff every miss distance is strictly below `tol`.
pub fn verify_capture(report: &CaptureReport, tol: f64) -> bool {
    report
        .entries
        .iter()
        .all(|e| e.miss_at_vt < tol && e.miss_at_intercept < tol)
}

/// Simulates `assignment` using the geometry stored in `tensor`, which must
/// have been built for `scenario`.
pub fn simulate(
    scenario: &Scenario,
    tensor: &CostTensor,
    assignment: &Assignment,
    dt: f64,
) -> Result<(Vec<Trajectory>, CaptureReport), SimError> {
    let (n, m, _) = tensor.dims();
    if n != scenario.pursuers.len() || m != scenario.evaders.len() {
        return Err(SimError::DimensionMismatch);
    }
    let problem = AssignmentProblem::from_tensor(tensor, scenario.max_virtual_targets)
        .map_err(|_| SimError::DimensionMismatch)?;
    let violations = check_feasible(assignment, &problem);
    if !violations.is_empty() {
        return Err(SimError::InfeasibleAssignment(violations));
    }
    let plans: Vec<PursuerPlan> = assignment
        .choices
        .iter()
        .enumerate()
        .map(|(i, c)| PursuerPlan::from_solution(i, c.evader, tensor.solution(i, c.evader, c.candidate)))
        .collect();
    simulate_plans(scenario, &plans, dt)
}

fn pursuer_position(scenario: &Scenario, plan: &PursuerPlan, t: f64) -> Point2 {
    let p = &scenario.pursuers[plan.pursuer];
    let leg1 = Point2::from_angle(plan.heading_phase1) * p.speed;
    if t <= plan.t1 {
        return p.position + leg1 * t;
    }
    let at_vt = p.position + leg1 * plan.t1;
    at_vt + Point2::from_angle(plan.heading_phase2) * (p.speed * (t - plan.t1))
}

fn evader_position(scenario: &Scenario, evader: usize, t: f64) -> Point2 {
    let e = &scenario.evaders[evader];
    e.position + e.velocity() * t
}

/// Grid `0, dt, 2dt, ...` up to `end`, merged with `events`. Grid points
/// closer than a rounding error to an event are dropped.
fn sample_times(end: f64, dt: f64, events: &[f64]) -> Result<Vec<f64>, SimError> {
    let steps = libm::floor(end / dt);
    if !(steps < MAX_SAMPLES as f64) {
        return Err(SimError::TooManySamples);
    }
    let mut times: Vec<f64> = (0..=steps as usize)
        .map(|s| s as f64 * dt)
        .filter(|&t| t <= end)
        .collect();
    times.push(end);
    let mut events: Vec<f64> = events.iter().copied().filter(|&e| e <= end).collect();
    events.sort_by(f64::total_cmp);
    times.retain(|&t| {
        events
            .iter()
            .all(|&e| libm::fabs(t - e) > 1e-12 * (1.0 + libm::fabs(e)))
    });
    times.extend(events);
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(times)
}

/// Closest approach of two pursuers over the time both are flying.
fn closest_approach(scenario: &Scenario, a: &PursuerPlan, b: &PursuerPlan) -> f64 {
    let end = a.t_f.min(b.t_f);
    let mut cuts = [0.0, a.t1.min(end), b.t1.min(end), end];
    cuts.sort_by(f64::total_cmp);
    let mut best = f64::INFINITY;
    for w in cuts.windows(2) {
        let (ts, te) = (w[0], w[1]);
        let r0 = pursuer_position(scenario, a, ts) - pursuer_position(scenario, b, ts);
        let r1 = pursuer_position(scenario, a, te) - pursuer_position(scenario, b, te);
        best = best.min(r0.norm()).min(r1.norm());
        let v = r1 - r0;
        let vv = v.dot(v);
        if vv > 0.0 {
            let s = (-r0.dot(v) / vv).clamp(0.0, 1.0);
            best = best.min((r0 + v * s).norm());
        }
    }
    best
}

/// Simulates explicit per-pursuer plans (which need not come from a solver).
pub fn simulate_plans(
    scenario: &Scenario,
    plans: &[PursuerPlan],
    dt: f64,
) -> Result<(Vec<Trajectory>, CaptureReport), SimError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::InvalidStep(dt));
    }
    for plan in plans {
        if plan.pursuer >= scenario.pursuers.len() || plan.evader >= scenario.evaders.len() {
            return Err(SimError::UnknownAgent {
                pursuer: plan.pursuer,
                evader: plan.evader,
            });
        }
    }

    let mut trajectories = Vec::new();
    let mut entries = Vec::with_capacity(plans.len());
    for plan in plans {
        let times = sample_times(plan.t_f, dt, &[plan.t1, plan.t_f])?;
        let samples = times
            .iter()
            .map(|&t| (t, pursuer_position(scenario, plan, t)))
            .collect();
        trajectories.push(Trajectory {
            role: Role::Pursuer,
            id: scenario.pursuers[plan.pursuer].id,
            samples,
        });

        let miss_at_vt = pursuer_position(scenario, plan, plan.t1).distance(plan.vt);
        let miss_at_intercept = pursuer_position(scenario, plan, plan.t_f)
            .distance(evader_position(scenario, plan.evader, plan.t_f));
        entries.push(CaptureEntry {
            pursuer: plan.pursuer,
            evader: plan.evader,
            t1: plan.t1,
            t_f: plan.t_f,
            miss_at_vt,
            miss_at_intercept,
            pass: miss_at_vt < CAPTURE_TOL && miss_at_intercept < CAPTURE_TOL,
        });
    }

    let horizon = plans.iter().map(|p| p.t_f).fold(0.0, f64::max);
    for (j, e) in scenario.evaders.iter().enumerate() {
        let events: Vec<f64> = plans.iter().filter(|p| p.evader == j).map(|p| p.t_f).collect();
        let times = sample_times(horizon, dt, &events)?;
        trajectories.push(Trajectory {
            role: Role::Evader,
            id: e.id,
            samples: times.iter().map(|&t| (t, evader_position(scenario, j, t))).collect(),
        });
    }
    trajectories.sort_by_key(|t| (t.role, t.id));

    let mut min_sep: Option<f64> = None;
    for (a, pa) in plans.iter().enumerate() {
        for pb in &plans[a + 1..] {
            let d = closest_approach(scenario, pa, pb);
            min_sep = Some(min_sep.map_or(d, |s| s.min(d)));
        }
    }

    Ok((
        trajectories,
        CaptureReport {
            entries,
            tolerance: CAPTURE_TOL,
            min_pursuer_separation: min_sep,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apollonius::intercept;
    use crate::assign::solve;
    use crate::cost::{build_cost_tensor, lattice};
    use crate::scenario::tests::reference_scenario;
    use crate::scenario::{Evader, Pursuer, VtRegion};
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn open_scenario(pursuers: Vec<Pursuer>, evaders: Vec<Evader>, region: VtRegion) -> Scenario {
        let s = Scenario {
            pursuers,
            evaders,
            region,
            max_virtual_targets: 1,
            turn_weight: 1.0,
            allow_mv_ge_n: true,
        };
        assert!(crate::scenario::validate(&s).is_empty());
        s
    }

    fn triple(heading: f64) -> (Scenario, PursuerPlan) {
        let region = VtRegion {
            x_min: -1.0,
            x_max: 1.0,
            y_min: -1.0,
            y_max: 1.0,
        };
        let p = Pursuer {
            id: 1,
            position: Point2::new(-5.0, 0.0),
            speed: 1.0,
        };
        // Placed so that the evader is at (10, 0) when the pursuer reaches the VT.
        let e = Evader {
            id: 7,
            position: Point2::new(10.0, 0.0) - Point2::from_angle(heading) * 2.5,
            speed: 0.5,
            heading,
        };
        let sol = intercept(&p, Point2::ORIGIN, &e).unwrap();
        let s = open_scenario(vec![p], vec![e], region);
        (s, PursuerPlan::from_solution(0, 0, &sol))
    }

    #[test]
    fn tail_chase_captures() {
        let (s, plan) = triple(0.0);
        let (_, report) = simulate_plans(&s, &[plan], 0.01).unwrap();
        let e = report.entries[0];
        assert!(e.miss_at_intercept < 1e-9, "{}", e.miss_at_intercept);
        assert!(e.miss_at_vt < 1e-12);
        assert!(verify_capture(&report, 1e-6));
        assert!((e.t_f - 25.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_lands_on_closed_form() {
        let (s, plan) = triple(FRAC_PI_2);
        let (traj, report) = simulate_plans(&s, &[plan], 0.01).unwrap();
        let want = Point2::new(10.0, 10.0 / 0.75f64.sqrt() * 0.5);
        let (t_end, p_end) = *traj[0].samples.last().unwrap();
        assert_eq!(t_end, plan.t_f);
        assert!(p_end.distance(want) < 1e-9);
        let e_end = traj[1].samples.iter().find(|(t, _)| *t == plan.t_f).unwrap().1;
        assert!(e_end.distance(want) < 1e-9);
        assert!(report.entries[0].pass);
    }

    #[test]
    fn samples_are_strictly_increasing_at_constant_speed() {
        let (s, plan) = triple(2.0);
        for dt in [0.3, 0.01, 7.0] {
            let (traj, _) = simulate_plans(&s, &[plan], dt).unwrap();
            for (t, speed) in traj.iter().zip([1.0, 0.5]) {
                for w in t.samples.windows(2) {
                    let ((ta, pa), (tb, pb)) = (w[0], w[1]);
                    assert!(tb > ta);
                    assert!((pa.distance(pb) - speed * (tb - ta)).abs() < 1e-9);
                }
                assert!(t.samples.iter().any(|&(t, _)| t == plan.t1) || t.role == Role::Evader);
            }
        }
    }

    #[test]
    fn miss_distances_do_not_depend_on_dt() {
        let (s, plan) = triple(2.5);
        let (_, a) = simulate_plans(&s, &[plan], 0.1).unwrap();
        let (_, b) = simulate_plans(&s, &[plan], 0.05).unwrap();
        assert!((a.entries[0].miss_at_intercept - b.entries[0].miss_at_intercept).abs() < 1e-12);
    }

    #[test]
    fn perturbed_heading_fails() {
        let (s, mut plan) = triple(FRAC_PI_2);
        plan.heading_phase2 += 0.1;
        let (_, report) = simulate_plans(&s, &[plan], 0.01).unwrap();
        let miss = report.entries[0].miss_at_intercept;
        // Chord of a 0.1 rad swing over the phase-2 leg.
        let leg = plan.t_f - plan.t1;
        assert!((miss - 2.0 * leg * libm::sin(0.05)).abs() < 1e-9);
        assert!(!verify_capture(&report, 1e-6));
    }

    #[test]
    fn verify_is_strict() {
        let report = CaptureReport {
            entries: vec![CaptureEntry {
                pursuer: 0,
                evader: 0,
                t1: 1.0,
                t_f: 2.0,
                miss_at_vt: 0.0,
                miss_at_intercept: 1e-6,
                pass: false,
            }],
            tolerance: 1e-6,
            min_pursuer_separation: None,
        };
        assert!(!verify_capture(&report, 1e-6));
        assert!(verify_capture(&report, 2e-6));
        assert!(report.clone().with_tolerance(2e-6).entries[0].pass);
        let zero = CaptureReport {
            entries: vec![CaptureEntry {
                miss_at_intercept: 0.0,
                ..report.entries[0]
            }],
            ..report
        };
        assert!(verify_capture(&zero, 1e-6));
    }

    #[test]
    fn reference_scenario_end_to_end() {
        let s = reference_scenario();
        let cands = lattice(&s.region, 5).unwrap();
        let tensor = build_cost_tensor(&s, &cands).unwrap();
        let a = solve(&AssignmentProblem::from_tensor(&tensor, 3).unwrap()).unwrap();
        let (traj, report) = simulate(&s, &tensor, &a, 0.1).unwrap();
        assert_eq!(traj.len(), 6);
        assert!(verify_capture(&report, 1e-6));
        assert!(report.min_pursuer_separation.unwrap() > 0.0);

        let mut bad = a.clone();
        bad.choices[0].candidate = (bad.choices[0].candidate + 1) % cands.len();
        assert!(matches!(
            simulate(&s, &tensor, &bad, 0.1),
            Err(SimError::InfeasibleAssignment(_))
        ));
    }

    #[test]
    fn rejects_bad_step() {
        let (s, plan) = triple(PI);
        assert_eq!(simulate_plans(&s, &[plan], 0.0), Err(SimError::InvalidStep(0.0)));
        assert!(simulate_plans(&s, &[plan], f64::NAN).is_err());
    }

    #[test]
    fn separation_of_parallel_pursuers() {
        let region = VtRegion {
            x_min: 0.0,
            x_max: 10.0,
            y_min: -5.0,
            y_max: 5.0,
        };
        let mk = |id, y| Pursuer {
            id,
            position: Point2::new(0.0, y),
            speed: 1.0,
        };
        let e = Evader {
            id: 0,
            position: Point2::new(50.0, 0.0),
            speed: 0.5,
            heading: 0.0,
        };
        let s = open_scenario(vec![mk(0, 0.0), mk(1, 3.0)], vec![e], region);
        let plans: Vec<PursuerPlan> = [0.0, 3.0]
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let sol = intercept(&s.pursuers[i], Point2::new(5.0, y), &s.evaders[0]).unwrap();
                PursuerPlan::from_solution(i, 0, &sol)
            })
            .collect();
        let (_, report) = simulate_plans(&s, &plans, 1.0).unwrap();
        let sep = report.min_pursuer_separation.unwrap();
        assert!(sep <= 3.0 + 1e-12 && sep >= 0.0);
    }
}
