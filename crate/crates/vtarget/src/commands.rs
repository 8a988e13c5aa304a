//! The four subcommands. Each returns the process exit status; errors map to
//! status 1 in `main`.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::Args;
use vtarget_core::assign::{SolveStatus, Unlimited};
use vtarget_core::scenario::validate;
use vtarget_core::sim::SimError;
use vtarget_core::{
    build_cost_tensor, check_feasible, lattice, simulate, solve_with, verify_capture,
    AssignmentProblem, CandidateSet, CostTensor, Scenario, SolveOutcome, SolverOptions,
};

use crate::assignment_file::{status_name, AssignmentDoc, SolverReportDoc};
use crate::scenario_file::load_scenario;
use crate::svg;
use crate::tables::{self, SweepRow};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    /// Solver stopped at a limit without proving optimality.
    Gap = 2,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Lattice side; the candidate count is its square.
    #[arg(long)]
    pub grid: usize,
    /// Override the scenario's virtual-target cap.
    #[arg(long)]
    pub mv: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write the full cost tensor as CSV.
    #[arg(long)]
    pub dump_tensor: bool,
    /// Stop searching after this many seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Comma-separated lattice sides.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grids: Vec<usize>,
    /// Also write a sweep over nested candidate sets to `<out stem>_nested.csv`.
    #[arg(long)]
    pub nested: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub assignment: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Sampling step of the written trajectories.
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    /// Capture report CSV; defaults to `capture_report.csv` next to the
    /// assignment file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also write sampled trajectories as CSV.
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub assignment: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn candidates_for(scenario: &Scenario, grid: usize) -> Result<CandidateSet> {
    if grid == 0 {
        bail!("grid side must be at least 1");
    }
    Ok(lattice(&scenario.region, grid)?)
}

/// Builds the tensor for `candidates` and solves it. The returned duration
/// covers both.
pub fn solve_candidates(
    scenario: &Scenario,
    candidates: &CandidateSet,
    options: &SolverOptions,
    time_limit: Option<f64>,
) -> Result<(CostTensor, SolveOutcome, Duration)> {
    let start = Instant::now();
    let tensor = build_cost_tensor(scenario, candidates)?;
    let problem = AssignmentProblem::from_tensor(&tensor, scenario.max_virtual_targets)?;
    let outcome = match time_limit {
        Some(limit) => {
            let deadline = start + Duration::from_secs_f64(limit.max(0.0));
            solve_with(&problem, options, &|| Instant::now() >= deadline)?
        }
        None => solve_with(&problem, options, &Unlimited)?,
    };
    Ok((tensor, outcome, start.elapsed()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_with_cap(path: &Path, cap: Option<usize>) -> Result<Scenario> {
    let mut scenario = load_scenario(path)?;
    if let Some(mv) = cap {
        scenario.max_virtual_targets = mv;
        let violations = validate(&scenario);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
            bail!("invalid virtual-target cap {mv}:\n{}", lines.join("\n"));
        }
    }
    Ok(scenario)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Exit> {
    let scenario = load_with_cap(&args.scenario, args.mv)?;
    let candidates = candidates_for(&scenario, args.grid)?;
    let mut options = SolverOptions::default();
    if let Some(limit) = args.node_limit {
        options.node_limit = limit;
    }
    let (tensor, outcome, elapsed) =
        solve_candidates(&scenario, &candidates, &options, args.time_limit)?;

    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let doc = AssignmentDoc::new(&scenario, args.grid, &candidates, &tensor, &outcome.assignment);
    write_file(&args.out.join("assignment.json"), &doc.to_json())?;
    let report = SolverReportDoc::new(&outcome.report, candidates.len(), elapsed.as_secs_f64());
    write_file(&args.out.join("solver_report.json"), &report.to_json())?;
    if args.dump_tensor {
        let mut w = create(&args.out.join("cost_tensor.csv"))?;
        tables::write_tensor(&mut w, &tensor, &candidates)?;
    }

    for c in &doc.choices {
        println!(
            "pursuer {} -> evader {} via ({}, {})  cost {:.6}",
            c.pursuer_id, c.evader_id, c.vt.x, c.vt.y, c.cost
        );
    }
    println!(
        "total cost {:.6}, {} of {} virtual targets active, {} ({} nodes, {:.3} s)",
        doc.total_cost,
        doc.active_vts.len(),
        candidates.len(),
        status_name(outcome.report.status),
        outcome.report.nodes,
        elapsed.as_secs_f64()
    );
    Ok(if outcome.report.status == SolveStatus::Optimal {
        Exit::Success
    } else {
        eprintln!("solver stopped with gap {}", outcome.report.gap);
        Exit::Gap
    })
}

fn nested_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_nested.{}", ext.to_string_lossy()),
        None => format!("{stem}_nested"),
    };
    out.with_file_name(name)
}

fn sweep_row(scenario: &Scenario, candidates: &CandidateSet, side: usize) -> Result<SweepRow> {
    let (_, outcome, elapsed) =
        solve_candidates(scenario, candidates, &SolverOptions::default(), None)?;
    if outcome.report.status != SolveStatus::Optimal {
        bail!("grid {side}: solver stopped without proving optimality");
    }
    Ok(SweepRow {
        candidate_count: candidates.len(),
        lattice_side: side,
        optimal_cost: outcome.assignment.total_cost,
        solve_time_s: elapsed.as_secs_f64(),
        node_count: outcome.report.nodes,
    })
}

/// Independent lattices, one row per side.
pub fn sweep(scenario: &Scenario, sides: &[usize]) -> Result<Vec<SweepRow>> {
    sides
        .iter()
        .map(|&side| sweep_row(scenario, &candidates_for(scenario, side)?, side))
        .collect()
}

/// Row `r` uses the union of the lattices of sides `0..=r`, so every
/// candidate set contains the previous one.
pub fn nested_sweep(scenario: &Scenario, sides: &[usize]) -> Result<Vec<SweepRow>> {
    let mut merged: Option<CandidateSet> = None;
    let mut rows = Vec::with_capacity(sides.len());
    for &side in sides {
        let grid = candidates_for(scenario, side)?;
        let current = match merged {
            Some(m) => m.union(&grid),
            None => grid,
        };
        rows.push(sweep_row(scenario, &current, side)?);
        merged = Some(current);
    }
    Ok(rows)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Exit> {
    let scenario = load_scenario(&args.scenario)?;
    let mut sides = args.grids.clone();
    sides.sort_unstable();
    sides.dedup();
    if sides.first() == Some(&0) {
        bail!("grid side must be at least 1");
    }

    let rows = sweep(&scenario, &sides)?;
    tables::write_sweep(create(&args.out)?, &rows)?;
    for r in &rows {
        println!(
            "{:>5} candidates  cost {:.6}  {:.4} s  {} nodes",
            r.candidate_count, r.optimal_cost, r.solve_time_s, r.node_count
        );
    }
    if args.nested {
        let nested = nested_sweep(&scenario, &sides)?;
        let path = nested_path(&args.out);
        tables::write_sweep(create(&path)?, &nested)?;
        println!("nested sweep written to {}", path.display());
    }
    Ok(Exit::Success)
}

/// Scenario, candidates and tensor an assignment file was solved against.
fn reload(scenario_path: &Path, doc: &AssignmentDoc) -> Result<(Scenario, CandidateSet, CostTensor)> {
    let scenario = load_with_cap(scenario_path, Some(doc.max_virtual_targets))?;
    let candidates = candidates_for(&scenario, doc.grid)?;
    let tensor = build_cost_tensor(&scenario, &candidates)?;
    Ok((scenario, candidates, tensor))
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<Exit> {
    if !(args.tol > 0.0) {
        bail!("tolerance must be positive");
    }
    let doc = AssignmentDoc::load(&args.assignment)?;
    let (scenario, candidates, tensor) = reload(&args.scenario, &doc)?;

    let mut ok = true;
    for c in &doc.choices {
        if c.candidate < candidates.len() {
            let p = candidates[c.candidate];
            if (p.x - c.vt.x).abs() > 1e-9 || (p.y - c.vt.y).abs() > 1e-9 {
                eprintln!(
                    "pursuer {}: candidate {} is at ({}, {}), file says ({}, {})",
                    c.pursuer_id, c.candidate, p.x, p.y, c.vt.x, c.vt.y
                );
                ok = false;
            }
        }
    }

    let assignment = doc.to_assignment();
    let (trajectories, report) = match simulate(&scenario, &tensor, &assignment, args.dt) {
        Ok(r) => r,
        Err(SimError::InfeasibleAssignment(violations)) => {
            for v in &violations {
                eprintln!("constraint violated: {v}");
            }
            return Ok(Exit::Failure);
        }
        Err(e) => return Err(e.into()),
    };
    let report = report.with_tolerance(args.tol);

    let report_path = match &args.report {
        Some(p) => p.clone(),
        None => args
            .assignment
            .parent()
            .unwrap_or(Path::new("."))
            .join("capture_report.csv"),
    };
    tables::write_capture_report(create(&report_path)?, &scenario, &report)?;
    if let Some(path) = &args.trajectories {
        tables::write_trajectories(create(path)?, &trajectories)?;
    }

    for e in &report.entries {
        println!(
            "pursuer {} -> evader {}: t1 {:.6}, tf {:.6}, miss {:.3e} / {:.3e}  {}",
            scenario.pursuers[e.pursuer].id,
            scenario.evaders[e.evader].id,
            e.t1,
            e.t_f,
            e.miss_at_vt,
            e.miss_at_intercept,
            if e.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(sep) = report.min_pursuer_separation {
        println!("closest pursuer approach {sep:.6}");
    }
    ok &= verify_capture(&report, args.tol);
    Ok(if ok { Exit::Success } else { Exit::Failure })
}

pub fn cmd_render(args: &RenderArgs) -> Result<Exit> {
    let doc = AssignmentDoc::load(&args.assignment)?;
    let (scenario, candidates, tensor) = reload(&args.scenario, &doc)?;
    let assignment = doc.to_assignment();
    let problem = AssignmentProblem::from_tensor(&tensor, scenario.max_virtual_targets)?;
    let violations = check_feasible(&assignment, &problem);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("constraint violated: {v}");
        }
        bail!("{} is not a feasible assignment", args.assignment.display());
    }
    write_file(&args.out, &svg::render(&scenario, &candidates, &tensor, &assignment))?;
    Ok(Exit::Success)
}
