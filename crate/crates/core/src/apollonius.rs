//! Intercept geometry for one pursuer / virtual target / evader triple.
//!
//! The pursuer flies straight to the virtual target (VT), arriving at `t1`.
//! By then the evader has moved along its course to `E(t1)`. From the VT the
//! pursuer's minimum-time reply is another straight line, ending on the
//! Apollonius circle of the foci `VT` and `E(t1)` with ratio
//! `μ = v_E / v_P`: every point `X` on it satisfies `|X - VT| = |X - E(t1)| / μ`,
//! so both agents reach it at the same instant. The intercept is where the
//! evader's course crosses that circle.

use core::f64::consts::PI;

use thiserror::Error;

use crate::geom::{normalize_angle, Point2};
use crate::scenario::{Evader, Pursuer};

/// How far outside [-1, 1] an inverse-trig argument may drift before it is
/// treated as a bug rather than rounding.
const UNIT_SLACK: f64 = 1e-9;

/// Focus separation below which the two foci are treated as one point.
pub const DEGENERATE_FOCI_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("speed must be positive, got {0}")]
    InvalidSpeed(f64),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("speed ratio {0} outside (0, 1)")]
    SpeedRatioOutOfRange(f64),
    #[error("virtual target and propagated evader coincide")]
    DegenerateFoci,
    #[error("inverse-trig argument {0} outside [-1, 1]")]
    Numerical(f64),
}

/// Apollonius circle of a pursuer focus (`vt`) and an evader focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApolloniusCircle {
    pub origin: Point2,
    pub radius: f64,
    pub mu: f64,
    pub vt: Point2,
    pub evader_at_t1: Point2,
}

impl ApolloniusCircle {
    /// Point of the circle at polar angle `phi` around the origin.
    pub fn point_at(&self, phi: f64) -> Point2 {
        self.origin + Point2::from_angle(phi) * self.radius
    }

    /// `|x - vt| / |x - evader_at_t1|`; equals `1/μ` on the circle.
    pub fn distance_ratio(&self, x: Point2) -> f64 {
        x.distance(self.vt) / x.distance(self.evader_at_t1)
    }
}

/// Everything known about one triple once the intercept is resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptSolution {
    /// Arrival time at the virtual target.
    pub t1: f64,
    /// Capture time.
    pub t_f: f64,
    pub evader_at_t1: Point2,
    /// Line-of-sight angle from the VT to the evader at `t1`.
    pub lambda: f64,
    /// Evader course relative to the line of sight.
    pub sigma_e: f64,
    /// Pursuer lead angle relative to the line of sight.
    pub sigma_p: f64,
    pub heading_phase1: f64,
    pub heading_phase2: f64,
    pub intercept: Point2,
    pub dist_vt_to_intercept: f64,
    /// Interior angle at the VT between the inbound and outbound legs.
    pub theta: f64,
    pub circle: ApolloniusCircle,
}

impl InterceptSolution {
    /// The triple where the evader is already at the VT when the pursuer
    /// arrives: capture happens on arrival and no turn is charged.
    pub fn collocated_at_vt(pursuer: &Pursuer, vt: Point2, evader: &Evader, t1: f64) -> Self {
        let mu = evader.speed / pursuer.speed;
        InterceptSolution {
            t1,
            t_f: t1,
            evader_at_t1: vt,
            lambda: evader.heading,
            sigma_e: 0.0,
            sigma_p: 0.0,
            heading_phase1: pursuer.position.bearing_to(vt),
            heading_phase2: evader.heading,
            intercept: vt,
            dist_vt_to_intercept: 0.0,
            theta: PI,
            circle: ApolloniusCircle {
                origin: vt,
                radius: 0.0,
                mu,
                vt,
                evader_at_t1: vt,
            },
        }
    }

    pub fn phase2_duration(&self) -> f64 {
        self.t_f - self.t1
    }
}

fn checked_unit(v: f64) -> Result<f64, GeometryError> {
    if v.is_nan() || v.abs() > 1.0 + UNIT_SLACK {
        return Err(GeometryError::Numerical(v));
    }
    Ok(v.clamp(-1.0, 1.0))
}

/// Straight-line transit time from `pursuer_pos` to `vt`.
pub fn time_to_vt(pursuer_pos: Point2, vt: Point2, v_p: f64) -> Result<f64, GeometryError> {
    if !(v_p > 0.0) {
        return Err(GeometryError::InvalidSpeed(v_p));
    }
    Ok(pursuer_pos.distance(vt) / v_p)
}

/// Evader position at time `t`.
pub fn propagate_evader(evader: &Evader, t: f64) -> Result<Point2, GeometryError> {
    if t < 0.0 || t.is_nan() {
        return Err(GeometryError::NegativeTime(t));
    }
    Ok(evader.position + Point2::from_angle(evader.heading) * (t * evader.speed))
}

/// Apollonius circle for foci `vt` (pursuer) and `evader_at_t1`, ratio `mu`.
///
/// The origin sits beyond the evader on the ray from `vt`, at
/// `μ² d / (1 - μ²)` from the evader; the radius is `μ d / (1 - μ²)`.
pub fn apollonius_circle(
    vt: Point2,
    evader_at_t1: Point2,
    mu: f64,
) -> Result<ApolloniusCircle, GeometryError> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(GeometryError::SpeedRatioOutOfRange(mu));
    }
    let los = evader_at_t1 - vt;
    let d = los.norm();
    if d <= DEGENERATE_FOCI_EPS {
        return Err(GeometryError::DegenerateFoci);
    }
    let denom = 1.0 - mu * mu;
    let unit = los * (1.0 / d);
    Ok(ApolloniusCircle {
        origin: evader_at_t1 + unit * (mu * mu * d / denom),
        radius: mu * d / denom,
        mu,
        vt,
        evader_at_t1,
    })
}

/// Resolves the full two-leg geometry of one triple.
///
/// Returns [`GeometryError::DegenerateFoci`] when the evader sits exactly on
/// the VT at `t1`; callers decide what that triple costs.
pub fn intercept(
    pursuer: &Pursuer,
    vt: Point2,
    evader: &Evader,
) -> Result<InterceptSolution, GeometryError> {
    let mu = evader.speed / pursuer.speed;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(GeometryError::SpeedRatioOutOfRange(mu));
    }
    let t1 = time_to_vt(pursuer.position, vt, pursuer.speed)?;
    let evader_at_t1 = propagate_evader(evader, t1)?;
    let circle = apollonius_circle(vt, evader_at_t1, mu)?;

    let d = vt.distance(evader_at_t1);
    let lambda = vt.bearing_to(evader_at_t1);
    let sigma_e = normalize_angle(evader.heading - lambda);
    let (sin_se, cos_se) = (libm::sin(sigma_e), libm::cos(sigma_e));
    let sigma_p = libm::asin(checked_unit(mu * sin_se)?);
    let heading_phase2 = normalize_angle(sigma_p + lambda);

    let dist = d / (1.0 - mu * mu) * (mu * cos_se + libm::sqrt(1.0 - mu * mu * sin_se * sin_se));
    let intercept = vt + Point2::from_angle(heading_phase2) * dist;

    Ok(InterceptSolution {
        t1,
        t_f: t1 + dist / pursuer.speed,
        evader_at_t1,
        lambda,
        sigma_e,
        sigma_p,
        heading_phase1: pursuer.position.bearing_to(vt),
        heading_phase2,
        intercept,
        dist_vt_to_intercept: dist,
        theta: turn_angle(pursuer.position, vt, intercept),
        circle,
    })
}

/// Interior angle at `vt` between the leg back to the pursuer start and the
/// leg out to the intercept, in [0, π]. `π` means the pursuer flies straight
/// through; `0` means a full reversal. A zero-length leg counts as straight.
pub fn turn_angle(pursuer_pos: Point2, vt: Point2, intercept: Point2) -> f64 {
    let back = pursuer_pos - vt;
    let out = intercept - vt;
    let (nb, no) = (back.norm(), out.norm());
    if nb == 0.0 || no == 0.0 {
        return PI;
    }
    // Cauchy-Schwarz bounds the quotient; only rounding can push it past 1.
    libm::acos((back.dot(out) / (nb * no)).clamp(-1.0, 1.0))
}
