//! JSON assignment documents written by `solve` and read by `validate` and
//! `render`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vtarget_core::assign::SolveStatus;
use vtarget_core::{Assignment, CandidateSet, Choice, Scenario, SolverReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XY {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceDoc {
    /// Pursuer index in the scenario.
    pub pursuer: usize,
    pub pursuer_id: u32,
    pub evader: usize,
    pub evader_id: u32,
    pub candidate: usize,
    pub vt: XY,
    pub t1: f64,
    pub tf: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActiveVtDoc {
    pub candidate: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    /// Lattice side the candidates were generated with.
    pub grid: usize,
    pub max_virtual_targets: usize,
    pub total_cost: f64,
    pub choices: Vec<ChoiceDoc>,
    pub active_vts: Vec<ActiveVtDoc>,
}

#[derive(Debug, Error)]
pub enum AssignmentFileError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl AssignmentDoc {
    pub fn new(
        scenario: &Scenario,
        grid: usize,
        candidates: &CandidateSet,
        tensor: &vtarget_core::CostTensor,
        assignment: &Assignment,
    ) -> Self {
        let choices = assignment
            .choices
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let vt = candidates[c.candidate];
                let sol = tensor.solution(i, c.evader, c.candidate);
                ChoiceDoc {
                    pursuer: i,
                    pursuer_id: scenario.pursuers[i].id,
                    evader: c.evader,
                    evader_id: scenario.evaders[c.evader].id,
                    candidate: c.candidate,
                    vt: XY { x: vt.x, y: vt.y },
                    t1: sol.t1,
                    tf: sol.t_f,
                    cost: tensor.cost(i, c.evader, c.candidate),
                }
            })
            .collect();
        let active_vts = assignment
            .active_vts
            .iter()
            .map(|&k| ActiveVtDoc {
                candidate: k,
                x: candidates[k].x,
                y: candidates[k].y,
            })
            .collect();
        Self {
            grid,
            max_virtual_targets: scenario.max_virtual_targets,
            total_cost: assignment.total_cost,
            choices,
            active_vts,
        }
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment {
            choices: self
                .choices
                .iter()
                .map(|c| Choice::new(c.evader, c.candidate))
                .collect(),
            active_vts: self.active_vts.iter().map(|v| v.candidate).collect(),
            total_cost: self.total_cost,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("assignment documents always serialize");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self, AssignmentFileError> {
        let text = fs::read_to_string(path).map_err(|source| AssignmentFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| AssignmentFileError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverReportDoc {
    pub status: &'static str,
    pub objective: f64,
    pub best_bound: f64,
    pub gap: f64,
    pub root_bound: f64,
    pub initial_incumbent: f64,
    pub nodes: u64,
    pub lp_iterations: u64,
    pub candidates: usize,
    pub candidates_searched: usize,
    pub wall_time_s: f64,
}

pub fn status_name(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::NodeLimit => "node_limit",
        SolveStatus::BudgetExhausted => "time_limit",
    }
}

impl SolverReportDoc {
    pub fn new(report: &SolverReport, candidates: usize, wall_time_s: f64) -> Self {
        Self {
            status: status_name(report.status),
            objective: report.objective,
            best_bound: report.best_bound,
            gap: report.gap,
            root_bound: report.root_bound,
            initial_incumbent: report.initial_incumbent,
            nodes: report.nodes,
            lp_iterations: report.lp_iterations,
            candidates,
            candidates_searched: report.candidates_searched,
            wall_time_s,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}
