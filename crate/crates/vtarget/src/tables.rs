//! CSV outputs.

use std::io::Write;

use serde::Serialize;
use vtarget_core::{CandidateSet, CaptureReport, CostTensor, Scenario, Trajectory};

#[derive(Serialize)]
struct TensorRow {
    i: usize,
    j: usize,
    k: usize,
    x_vt: f64,
    y_vt: f64,
    t1: f64,
    tf: f64,
    theta: f64,
    cost: f64,
}

/// Cost tensor, one row per triple in `(i, j, k)` order.
pub fn write_tensor<W: Write>(out: W, tensor: &CostTensor, candidates: &CandidateSet) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (i, j, k, cost, sol) in tensor.iter() {
        w.serialize(TensorRow {
            i,
            j,
            k,
            x_vt: candidates[k].x,
            y_vt: candidates[k].y,
            t1: sol.t1,
            tf: sol.t_f,
            theta: sol.theta,
            cost,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryRow {
    role: &'static str,
    id: u32,
    t: f64,
    x: f64,
    y: f64,
}

/// Trajectory samples sorted by role, id, time.
pub fn write_trajectories<W: Write>(out: W, trajectories: &[Trajectory]) -> csv::Result<()> {
    let mut sorted: Vec<&Trajectory> = trajectories.iter().collect();
    sorted.sort_by_key(|t| (t.role.as_str(), t.id));
    let mut w = csv::Writer::from_writer(out);
    for tr in sorted {
        for &(t, p) in &tr.samples {
            w.serialize(TrajectoryRow {
                role: tr.role.as_str(),
                id: tr.id,
                t,
                x: p.x,
                y: p.y,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CaptureRow {
    pursuer_id: u32,
    evader_id: u32,
    t1: f64,
    tf: f64,
    miss_at_vt: f64,
    miss_at_intercept: f64,
    pass: bool,
}

pub fn write_capture_report<W: Write>(out: W, scenario: &Scenario, report: &CaptureReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in &report.entries {
        w.serialize(CaptureRow {
            pursuer_id: scenario.pursuers[e.pursuer].id,
            evader_id: scenario.evaders[e.evader].id,
            t1: e.t1,
            tf: e.t_f,
            miss_at_vt: e.miss_at_vt,
            miss_at_intercept: e.miss_at_intercept,
            pass: e.pass,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// One solved grid in a density sweep.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub candidate_count: usize,
    pub lattice_side: usize,
    pub optimal_cost: f64,
    /// Candidate generation, cost tensor and solve.
    pub solve_time_s: f64,
    pub node_count: u64,
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep(path: &std::path::Path) -> csv::Result<Vec<SweepRow>> {
    csv::Reader::from_path(path)?.deserialize().collect()
}
