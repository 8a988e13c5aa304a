//! Core algorithms for placing virtual targets and assigning pursuers to
//! evaders through them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: file formats, timing and the command line live in
//! the `vtarget` companion crate.
//!
//! Pipeline:
//!
//! 1. [`scenario`] describes pursuers, constant-course evaders and the region
//!    virtual targets may be placed in.
//! 2. [`apollonius`] resolves one pursuer / virtual-target / evader triple:
//!    straight transit to the virtual target, the Apollonius circle of the
//!    second leg, the intercept point and the turn angle at the waypoint.
//! 3. [`cost`] samples candidate virtual targets and fills the dense cost
//!    tensor.
//! 4. [`assign`] picks at most `M_V` virtual targets and one
//!    `(evader, virtual target)` pair per pursuer, exactly.
//! 5. [`sim`] flies the resulting plan and certifies every capture.
#![no_std]

extern crate alloc;

pub mod apollonius;
pub mod assign;
pub mod cost;
pub mod geom;
pub mod scenario;
pub mod sim;

pub use apollonius::{ApolloniusCircle, GeometryError, InterceptSolution};
pub use assign::{
    check_feasible, solve, solve_bruteforce, solve_with, AssignError, Assignment,
    AssignmentProblem, Choice, ConstraintViolation, SolveOutcome, SolverOptions, SolverReport,
};
pub use cost::{build_cost_tensor, lattice, CandidateSet, CostError, CostTensor};
pub use geom::Point2;
pub use scenario::{validate, Evader, Pursuer, Scenario, Violation, VtRegion};
pub use sim::{
    simulate, simulate_plans, verify_capture, CaptureEntry, CaptureReport, PursuerPlan, Role,
    SimError, Trajectory,
};
