//! JSON scenario documents.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vtarget_core::scenario::{validate, Violation};
use vtarget_core::{Evader, Point2, Pursuer, Scenario, VtRegion};

#[derive(Debug, Error)]
pub enum LoadError {
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
    #[error("invalid scenario {}:\n{}", path.display(), list(violations))]
    Validation {
        path: PathBuf,
        violations: Vec<Violation>,
    },
}

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PursuerDoc {
    id: u32,
    x: f64,
    y: f64,
    speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvaderDoc {
    id: u32,
    x: f64,
    y: f64,
    speed: f64,
    heading: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionDoc {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    pursuers: Vec<PursuerDoc>,
    evaders: Vec<EvaderDoc>,
    vt_region: RegionDoc,
    max_virtual_targets: usize,
    #[serde(default = "default_turn_weight")]
    turn_weight: f64,
    #[serde(default)]
    allow_mv_ge_n: bool,
}

fn default_turn_weight() -> f64 {
    Scenario::DEFAULT_TURN_WEIGHT
}

impl From<ScenarioDoc> for Scenario {
    fn from(doc: ScenarioDoc) -> Self {
        let mut s = Scenario {
            pursuers: doc
                .pursuers
                .into_iter()
                .map(|p| Pursuer {
                    id: p.id,
                    position: Point2::new(p.x, p.y),
                    speed: p.speed,
                })
                .collect(),
            evaders: doc
                .evaders
                .into_iter()
                .map(|e| Evader {
                    id: e.id,
                    position: Point2::new(e.x, e.y),
                    speed: e.speed,
                    heading: e.heading,
                })
                .collect(),
            region: VtRegion {
                x_min: doc.vt_region.x_min,
                x_max: doc.vt_region.x_max,
                y_min: doc.vt_region.y_min,
                y_max: doc.vt_region.y_max,
            },
            max_virtual_targets: doc.max_virtual_targets,
            turn_weight: doc.turn_weight,
            allow_mv_ge_n: doc.allow_mv_ge_n,
        };
        s.normalize_headings();
        s
    }
}

impl From<&Scenario> for ScenarioDoc {
    fn from(s: &Scenario) -> Self {
        ScenarioDoc {
            pursuers: s
                .pursuers
                .iter()
                .map(|p| PursuerDoc {
                    id: p.id,
                    x: p.position.x,
                    y: p.position.y,
                    speed: p.speed,
                })
                .collect(),
            evaders: s
                .evaders
                .iter()
                .map(|e| EvaderDoc {
                    id: e.id,
                    x: e.position.x,
                    y: e.position.y,
                    speed: e.speed,
                    heading: e.heading,
                })
                .collect(),
            vt_region: RegionDoc {
                x_min: s.region.x_min,
                x_max: s.region.x_max,
                y_min: s.region.y_min,
                y_max: s.region.y_max,
            },
            max_virtual_targets: s.max_virtual_targets,
            turn_weight: s.turn_weight,
            allow_mv_ge_n: s.allow_mv_ge_n,
        }
    }
}

/// Parses and validates a scenario document. `path` is only used in errors.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, LoadError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|source| LoadError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let scenario = Scenario::from(doc);
    let violations = validate(&scenario);
    if !violations.is_empty() {
        return Err(LoadError::Validation {
            path: path.to_path_buf(),
            violations,
        });
    }
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut s = serde_json::to_string_pretty(&ScenarioDoc::from(scenario))
        .expect("scenario documents always serialize");
    s.push('\n');
    s
}

pub fn save_scenario(scenario: &Scenario, path: &Path) -> std::io::Result<()> {
    fs::write(path, scenario_to_json(scenario))
}
