//! Candidate virtual-target sampling and the dense cost tensor.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use thiserror::Error;

use crate::apollonius::{self, GeometryError, InterceptSolution};
use crate::geom::Point2;
use crate::scenario::{Evader, Pursuer, Scenario, VtRegion};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("lattice side must be at least 1, got {0}")]
    InvalidGridSize(usize),
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("candidate {0} lies outside the virtual-target region")]
    OutsideRegion(Point2),
    #[error("candidate coordinates must be finite")]
    NonFinite,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The discrete set of admissible virtual-target locations.
///
/// Points are unique and ordered row-major: by `y`, then by `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    points: Vec<Point2>,
    lattice_side: Option<usize>,
}

fn row_major(a: &Point2, b: &Point2) -> Ordering {
    a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x))
}

impl CandidateSet {
    /// Arbitrary candidates; sorted and deduplicated. All must lie in `region`.
    pub fn from_points(mut points: Vec<Point2>, region: &VtRegion) -> Result<Self, CostError> {
        if points.is_empty() {
            return Err(CostError::EmptyCandidates);
        }
        for p in &points {
            if !p.is_finite() {
                return Err(CostError::NonFinite);
            }
            if !region.contains(*p) {
                return Err(CostError::OutsideRegion(*p));
            }
        }
        points.sort_by(row_major);
        points.dedup();
        Ok(Self {
            points,
            lattice_side: None,
        })
    }

    /// Union of two candidate sets, keeping row-major order.
    pub fn union(&self, other: &CandidateSet) -> CandidateSet {
        let mut points = Vec::with_capacity(self.len() + other.len());
        points.extend_from_slice(&self.points);
        points.extend_from_slice(&other.points);
        points.sort_by(row_major);
        points.dedup();
        let lattice_side = if points.len() == self.len() {
            self.lattice_side
        } else if points.len() == other.len() {
            other.lattice_side
        } else {
            None
        };
        CandidateSet {
            points,
            lattice_side,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn lattice_side(&self) -> Option<usize> {
        self.lattice_side
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.points.binary_search_by(|q| row_major(q, &p)).is_ok()
    }

    /// Index of `p` in this set, if present.
    pub fn index_of(&self, p: Point2) -> Option<usize> {
        self.points.binary_search_by(|q| row_major(q, &p)).ok()
    }
}

impl core::ops::Index<usize> for CandidateSet {
    type Output = Point2;
    fn index(&self, k: usize) -> &Point2 {
        &self.points[k]
    }
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        return 0.5 * (lo + hi);
    }
    if i == n - 1 {
        return hi;
    }
    // Dividing last keeps coincident fractions bit-identical across sizes,
    // so a coarse lattice is an exact subset of any lattice that refines it.
    lo + ((hi - lo) * i as f64) / (n - 1) as f64
}

/// `n × n` uniformly spaced candidates covering `region`, corners included.
/// `n = 1` yields the region center.
pub fn lattice(region: &VtRegion, n: usize) -> Result<CandidateSet, CostError> {
    if n < 1 {
        return Err(CostError::InvalidGridSize(n));
    }
    let mut points = Vec::with_capacity(n * n);
    for row in 0..n {
        let y = linspace(region.y_min, region.y_max, n, row);
        for col in 0..n {
            points.push(Point2::new(linspace(region.x_min, region.x_max, n, col), y));
        }
    }
    Ok(CandidateSet {
        points,
        lattice_side: Some(n),
    })
}

/// Intercept geometry for a triple, folding the degenerate case where the
/// evader is already at the virtual target into an immediate capture.
pub fn resolve_triple(
    pursuer: &Pursuer,
    vt: Point2,
    evader: &Evader,
) -> Result<InterceptSolution, GeometryError> {
    match apollonius::intercept(pursuer, vt, evader) {
        Err(GeometryError::DegenerateFoci) => {
            let t1 = apollonius::time_to_vt(pursuer.position, vt, pursuer.speed)?;
            Ok(InterceptSolution::collocated_at_vt(pursuer, vt, evader, t1))
        }
        other => other,
    }
}

/// Energy of one resolved triple: weighted turn penalty plus both flight legs.
pub fn triple_cost(solution: &InterceptSolution, turn_weight: f64) -> f64 {
    turn_weight * (PI - solution.theta) + solution.t1 + solution.phase2_duration()
}

/// Costs `c[i][j][k]` for pursuer `i`, evader `j`, candidate `k`, together with
/// the geometry behind each entry. Stored with `k` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTensor {
    pursuers: usize,
    evaders: usize,
    candidates: usize,
    costs: Vec<f64>,
    solutions: Vec<InterceptSolution>,
}

impl CostTensor {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.pursuers, self.evaders, self.candidates)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.evaders + j) * self.candidates + k
    }

    pub fn cost(&self, i: usize, j: usize, k: usize) -> f64 {
        self.costs[self.index(i, j, k)]
    }

    pub fn solution(&self, i: usize, j: usize, k: usize) -> &InterceptSolution {
        &self.solutions[self.index(i, j, k)]
    }

    /// All costs in `(i, j, k)` lexicographic order.
    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Entries in `(i, j, k)` lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, f64, &InterceptSolution)> {
        let (m, kk) = (self.evaders, self.candidates);
        self.costs
            .iter()
            .zip(&self.solutions)
            .enumerate()
            .map(move |(idx, (c, s))| (idx / (m * kk), (idx / kk) % m, idx % kk, *c, s))
    }
}

/// Resolves every triple of `scenario` against `candidates`.
pub fn build_cost_tensor(
    scenario: &Scenario,
    candidates: &CandidateSet,
) -> Result<CostTensor, CostError> {
    if candidates.is_empty() {
        return Err(CostError::EmptyCandidates);
    }
    let (n, m, kk) = (scenario.pursuers.len(), scenario.evaders.len(), candidates.len());
    let mut costs = Vec::with_capacity(n * m * kk);
    let mut solutions = Vec::with_capacity(n * m * kk);
    for p in &scenario.pursuers {
        for e in &scenario.evaders {
            for &vt in candidates.points() {
                let sol = resolve_triple(p, vt, e)?;
                costs.push(triple_cost(&sol, scenario.turn_weight));
                solutions.push(sol);
            }
        }
    }
    Ok(CostTensor {
        pursuers: n,
        evaders: m,
        candidates: kk,
        costs,
        solutions,
    })
}
