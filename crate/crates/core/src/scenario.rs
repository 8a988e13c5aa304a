//! Problem-instance data model and its standing assumptions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{normalize_angle, Point2};

/// A holonomic pursuer starting at `position` at time zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Pursuer {
    pub id: u32,
    pub position: Point2,
    pub speed: f64,
}

/// A non-maneuvering evader: constant speed, constant heading.
#[derive(Debug, Clone, PartialEq)]
pub struct Evader {
    pub id: u32,
    pub position: Point2,
    pub speed: f64,
    /// Course in radians, kept in (-π, π].
    pub heading: f64,
}

impl Evader {
    pub fn velocity(&self) -> Point2 {
        Point2::from_angle(self.heading) * self.speed
    }
}

/// Axis-aligned box virtual targets may be placed in (bounds inclusive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VtRegion {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl VtRegion {
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }
}

/// One engagement. Start time is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub pursuers: Vec<Pursuer>,
    pub evaders: Vec<Evader>,
    pub region: VtRegion,
    /// Cap on the number of distinct virtual targets the team may activate.
    pub max_virtual_targets: usize,
    /// Weight on the turn penalty relative to flight time.
    pub turn_weight: f64,
    /// Lifts the "fewer virtual targets than pursuers" assumption.
    pub allow_mv_ge_n: bool,
}

impl Scenario {
    pub const DEFAULT_TURN_WEIGHT: f64 = 1.0;

    /// Builds a scenario, normalizing evader headings, and rejects it if any
    /// invariant fails.
    pub fn new(
        pursuers: Vec<Pursuer>,
        mut evaders: Vec<Evader>,
        region: VtRegion,
        max_virtual_targets: usize,
    ) -> Result<Self, Vec<Violation>> {
        for e in &mut evaders {
            e.heading = normalize_angle(e.heading);
        }
        let scenario = Scenario {
            pursuers,
            evaders,
            region,
            max_virtual_targets,
            turn_weight: Self::DEFAULT_TURN_WEIGHT,
            allow_mv_ge_n: false,
        };
        let violations = validate(&scenario);
        if violations.is_empty() {
            Ok(scenario)
        } else {
            Err(violations)
        }
    }

    pub fn num_pursuers(&self) -> usize {
        self.pursuers.len()
    }

    pub fn num_evaders(&self) -> usize {
        self.evaders.len()
    }

    /// Evader-to-pursuer speed ratio of a pair.
    pub fn speed_ratio(&self, pursuer: usize, evader: usize) -> f64 {
        self.evaders[evader].speed / self.pursuers[pursuer].speed
    }

    /// Normalizes every evader heading in place.
    pub fn normalize_headings(&mut self) {
        for e in &mut self.evaders {
            e.heading = normalize_angle(e.heading);
        }
    }
}

/// Which invariant a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonFinite,
    NonPositiveSpeed,
    EmptyRegion,
    NoEvaders,
    TooFewPursuers,
    SpeedRatio,
    ZeroVirtualTargets,
    TooManyVirtualTargets,
    NegativeTurnWeight,
}

/// One broken scenario invariant, with the path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, path: impl Into<String>, message: String) -> Self {
        Self {
            kind,
            path: path.into(),
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Lists every invariant `scenario` breaks. Empty means valid.
pub fn validate(scenario: &Scenario) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();

    for (idx, p) in scenario.pursuers.iter().enumerate() {
        if !p.position.is_finite() {
            out.push(Violation::new(
                NonFinite,
                format!("pursuers[{idx}].position"),
                format!("non-finite position {}", p.position),
            ));
        }
        if !p.speed.is_finite() {
            out.push(Violation::new(
                NonFinite,
                format!("pursuers[{idx}].speed"),
                format!("non-finite speed {}", p.speed),
            ));
        } else if p.speed <= 0.0 {
            out.push(Violation::new(
                NonPositiveSpeed,
                format!("pursuers[{idx}].speed"),
                format!("speed must be > 0, got {}", p.speed),
            ));
        }
    }
    for (idx, e) in scenario.evaders.iter().enumerate() {
        if !e.position.is_finite() {
            out.push(Violation::new(
                NonFinite,
                format!("evaders[{idx}].position"),
                format!("non-finite position {}", e.position),
            ));
        }
        if !e.heading.is_finite() {
            out.push(Violation::new(
                NonFinite,
                format!("evaders[{idx}].heading"),
                format!("non-finite heading {}", e.heading),
            ));
        }
        if !e.speed.is_finite() {
            out.push(Violation::new(
                NonFinite,
                format!("evaders[{idx}].speed"),
                format!("non-finite speed {}", e.speed),
            ));
        } else if e.speed <= 0.0 {
            out.push(Violation::new(
                NonPositiveSpeed,
                format!("evaders[{idx}].speed"),
                format!("speed must be > 0, got {}", e.speed),
            ));
        }
    }

    let r = &scenario.region;
    let bounds = [r.x_min, r.x_max, r.y_min, r.y_max];
    if bounds.iter().any(|v| !v.is_finite()) {
        out.push(Violation::new(
            NonFinite,
            "vt_region",
            format!(
                "non-finite bounds x[{}, {}] y[{}, {}]",
                r.x_min, r.x_max, r.y_min, r.y_max
            ),
        ));
    } else {
        if r.x_min >= r.x_max {
            out.push(Violation::new(
                EmptyRegion,
                "vt_region.x_min",
                format!("x_min < x_max violated ({} >= {})", r.x_min, r.x_max),
            ));
        }
        if r.y_min >= r.y_max {
            out.push(Violation::new(
                EmptyRegion,
                "vt_region.y_min",
                format!("y_min < y_max violated ({} >= {})", r.y_min, r.y_max),
            ));
        }
    }

    let n = scenario.pursuers.len();
    let m = scenario.evaders.len();
    if m == 0 {
        out.push(Violation::new(
            NoEvaders,
            "evaders",
            "at least one evader is required".into(),
        ));
    }
    if n < m {
        out.push(Violation::new(
            TooFewPursuers,
            "pursuers",
            format!("N ≥ M violated ({n} pursuers, {m} evaders)"),
        ));
    }

    let slowest_pursuer = scenario
        .pursuers
        .iter()
        .map(|p| p.speed)
        .filter(|s| s.is_finite() && *s > 0.0)
        .fold(f64::INFINITY, f64::min);
    let fastest_evader = scenario
        .evaders
        .iter()
        .map(|e| e.speed)
        .filter(|s| s.is_finite() && *s > 0.0)
        .fold(0.0, f64::max);
    if slowest_pursuer.is_finite() && fastest_evader > 0.0 && slowest_pursuer <= fastest_evader {
        out.push(Violation::new(
            SpeedRatio,
            "evaders",
            format!(
                "speed ratio μ ≥ 1 (slowest pursuer {slowest_pursuer}, fastest evader {fastest_evader})"
            ),
        ));
    }

    if scenario.max_virtual_targets == 0 {
        out.push(Violation::new(
            ZeroVirtualTargets,
            "max_virtual_targets",
            "M_V ≥ 1 violated".into(),
        ));
    } else if !scenario.allow_mv_ge_n && scenario.max_virtual_targets >= n && n > 0 {
        out.push(Violation::new(
            TooManyVirtualTargets,
            "max_virtual_targets",
            format!(
                "M_V < N violated (M_V = {}, N = {n}); set allow_mv_ge_n to override",
                scenario.max_virtual_targets
            ),
        ));
    }

    if !scenario.turn_weight.is_finite() || scenario.turn_weight < 0.0 {
        out.push(Violation::new(
            NegativeTurnWeight,
            "turn_weight",
            format!("turn weight must be finite and ≥ 0, got {}", scenario.turn_weight),
        ));
    }

    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    /// Four pursuers, two evaders closing from x = 20, region x∈[3,8], y∈[-4,10].
    pub(crate) fn reference_scenario() -> Scenario {
        let p = |id, x, y| Pursuer {
            id,
            position: Point2::new(x, y),
            speed: 1.0,
        };
        let e = |id, x, y| Evader {
            id,
            position: Point2::new(x, y),
            speed: 0.5,
            heading: PI,
        };
        Scenario::new(
            vec![p(1, 0.0, 1.0), p(2, -1.0, 2.0), p(3, -2.0, 6.0), p(4, -1.0, 8.0)],
            vec![e(1, 20.0, 2.0), e(2, 20.0, 8.0)],
            VtRegion {
                x_min: 3.0,
                x_max: 8.0,
                y_min: -4.0,
                y_max: 10.0,
            },
            3,
        )
        .expect("reference scenario is valid")
    }

    fn kinds(s: &Scenario) -> Vec<ViolationKind> {
        validate(s).into_iter().map(|v| v.kind).collect()
    }

    #[test]
    fn reference_is_valid() {
        let s = reference_scenario();
        assert_eq!(s.num_pursuers(), 4);
        assert_eq!(s.num_evaders(), 2);
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn each_invariant_can_be_broken_alone() {
        let base = reference_scenario();

        let mut s = base.clone();
        s.pursuers[1].position.x = f64::NAN;
        assert_eq!(kinds(&s), vec![ViolationKind::NonFinite]);
        assert_eq!(validate(&s)[0].path, "pursuers[1].position");

        let mut s = base.clone();
        s.pursuers[0].speed = 0.0;
        assert_eq!(kinds(&s), vec![ViolationKind::NonPositiveSpeed]);

        let mut s = base.clone();
        s.evaders[1].speed = -0.5;
        assert_eq!(kinds(&s), vec![ViolationKind::NonPositiveSpeed]);

        let mut s = base.clone();
        s.region.x_max = 3.0;
        assert_eq!(kinds(&s), vec![ViolationKind::EmptyRegion]);

        let mut s = base.clone();
        s.region.y_min = 11.0;
        assert_eq!(kinds(&s), vec![ViolationKind::EmptyRegion]);

        let mut s = base.clone();
        s.pursuers.truncate(1);
        s.max_virtual_targets = 1;
        s.allow_mv_ge_n = true;
        assert_eq!(kinds(&s), vec![ViolationKind::TooFewPursuers]);
        assert!(validate(&s)[0].message.contains("N ≥ M violated"));

        let mut s = base.clone();
        s.evaders.clear();
        assert_eq!(kinds(&s), vec![ViolationKind::NoEvaders]);

        let mut s = base.clone();
        s.evaders[0].speed = 1.0;
        assert_eq!(kinds(&s), vec![ViolationKind::SpeedRatio]);
        assert!(validate(&s)[0].message.contains("speed ratio μ ≥ 1"));

        let mut s = base.clone();
        s.max_virtual_targets = 0;
        assert_eq!(kinds(&s), vec![ViolationKind::ZeroVirtualTargets]);

        let mut s = base.clone();
        s.max_virtual_targets = 4;
        assert_eq!(kinds(&s), vec![ViolationKind::TooManyVirtualTargets]);
        assert!(validate(&s)[0].message.contains("M_V < N"));
        s.allow_mv_ge_n = true;
        assert!(validate(&s).is_empty());

        let mut s = base;
        s.turn_weight = -1.0;
        assert_eq!(kinds(&s), vec![ViolationKind::NegativeTurnWeight]);
    }

    #[test]
    fn every_violation_is_reported() {
        let mut s = reference_scenario();
        s.pursuers[0].speed = 0.0;
        s.region.x_min = 9.0;
        s.turn_weight = f64::NAN;
        assert_eq!(validate(&s).len(), 3);
    }

    #[test]
    fn headings_are_normalized_on_construction() {
        let s = Scenario::new(
            vec![Pursuer {
                id: 0,
                position: Point2::ORIGIN,
                speed: 1.0,
            }, Pursuer {
                id: 1,
                position: Point2::ORIGIN,
                speed: 1.0,
            }],
            vec![Evader {
                id: 0,
                position: Point2::new(5.0, 0.0),
                speed: 0.5,
                heading: 1.5 * PI,
            }],
            VtRegion {
                x_min: 0.0,
                x_max: 1.0,
                y_min: 0.0,
                y_max: 1.0,
            },
            1,
        )
        .unwrap();
        assert!((s.evaders[0].heading + 0.5 * PI).abs() < 1e-15);
    }
}
