//! Numerical maximization of ideal bipyramid volume.
//!
//! An ideal `n`-bipyramid is cut along its central edge into tetrahedra
//! `T_1, …, T_n`, where `T_i` has angle `α_i` at the central edge and angles
//! `β_i`, `γ_i` at the other two edges. The shape is feasible when
//! `α_i + β_i + γ_i = π` for every `i` and `Σ α_i = 2π`.
//!
//! The search runs over the free coordinates `(α_1, …, α_{n−1}, β_1, …, β_n)`;
//! `α_n` and every `γ_i` are recovered from the equality constraints, so every
//! iterate is feasible by construction. Steps are damped Newton steps when
//! the reduced Hessian is negative definite and plain gradient steps
//! otherwise, with a backtracking line search that keeps every angle inside
//! `(ε, π − ε)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{
    lob, lobachevsky_derivative, regular_bipyramid_volume, tetrahedron_volume_unchecked,
    DihedralTriple, GeometryError,
};

/// Tolerance on `Σ α_i = 2π`.
pub const CENTRAL_SUM_TOLERANCE: f64 = 1e-10;
/// Margin kept between every angle and the ends of `[0, π]`.
pub const ANGLE_MARGIN: f64 = 1e-6;
/// Restarts allowed after an iterate reaches the angle boundary.
pub const MAX_RESTARTS: usize = 10;

const SHORT_STEP: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("a bipyramid needs at least {min} tetrahedra, got {n}")]
    TooFewTetrahedra { n: usize, min: usize },
    #[error("central angles sum to {0}, expected 2π")]
    CentralSum(f64),
    #[error(transparent)]
    Triple(#[from] GeometryError),
    #[error("angle {angle} of tetrahedron {index} lies on the boundary of (0, π)")]
    BoundaryAngle { index: usize, angle: f64 },
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("no convergence after {iterations} iterations and {restarts} restarts (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        restarts: usize,
        residual: f64,
    },
}

/// An ideal `n`-bipyramid given by the dihedral angles of its `n` central
/// tetrahedra.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BipyramidShape {
    triples: Vec<DihedralTriple>,
}

impl BipyramidShape {
    pub fn new(triples: Vec<DihedralTriple>) -> Result<Self, OptimizeError> {
        let shape = BipyramidShape { triples };
        shape.validate()?;
        Ok(shape)
    }

    /// The regular shape: every tetrahedron is `(2π/n, (n−2)π/2n, (n−2)π/2n)`.
    pub fn regular(n: usize) -> Result<Self, OptimizeError> {
        if n < 2 {
            return Err(OptimizeError::TooFewTetrahedra { n, min: 2 });
        }
        let alpha = 2.0 * PI / n as f64;
        let side = 0.5 * (PI - alpha);
        Self::new(vec![DihedralTriple::new(alpha, side, side)?; n])
    }

    /// Builds a shape from central angles and one side angle per
    /// tetrahedron; the remaining angles close each triangle.
    pub fn from_alphas_betas(alphas: &[f64], betas: &[f64]) -> Result<Self, OptimizeError> {
        assert_eq!(alphas.len(), betas.len(), "one beta per alpha");
        let triples = alphas
            .iter()
            .zip(betas)
            .map(|(&a, &b)| DihedralTriple::from_two(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(triples)
    }

    pub fn n(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[DihedralTriple] {
        &self.triples
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        if self.triples.len() < 2 {
            return Err(OptimizeError::TooFewTetrahedra { n: self.triples.len(), min: 2 });
        }
        for t in &self.triples {
            t.validate()?;
        }
        let sum = self.central_sum();
        if (sum - 2.0 * PI).abs() > CENTRAL_SUM_TOLERANCE {
            return Err(OptimizeError::CentralSum(sum));
        }
        Ok(())
    }

    fn central_sum(&self) -> f64 {
        self.triples.iter().map(|t| t.alpha).sum()
    }

    /// Largest violation of either constraint family.
    pub fn constraint_violation(&self) -> f64 {
        let per_triple = self
            .triples
            .iter()
            .map(|t| (t.alpha + t.beta + t.gamma - PI).abs())
            .fold(0.0, f64::max);
        per_triple.max((self.central_sum() - 2.0 * PI).abs())
    }

    /// All `3n` angles in the order `α_1, β_1, γ_1, α_2, …`.
    pub fn angles(&self) -> Vec<f64> {
        self.triples.iter().flat_map(|t| t.angles()).collect()
    }

    /// Largest angle deviation from the regular shape with the same `n`.
    pub fn distance_to_regular(&self) -> f64 {
        let alpha = 2.0 * PI / self.n() as f64;
        let side = 0.5 * (PI - alpha);
        self.triples
            .iter()
            .flat_map(|t| [(t.alpha - alpha).abs(), (t.beta - side).abs(), (t.gamma - side).abs()])
            .fold(0.0, f64::max)
    }
}

/// Sum of the tetrahedron volumes.
pub fn shape_volume(s: &BipyramidShape) -> Result<f64, OptimizeError> {
    s.validate()?;
    Ok(volume_unchecked(s))
}

fn volume_unchecked(s: &BipyramidShape) -> f64 {
    s.triples.iter().map(tetrahedron_volume_unchecked).sum()
}

/// Partial derivatives of the volume with respect to each of the `3n`
/// angles taken as independent variables (same order as
/// [`BipyramidShape::angles`]): `−ln(2 sin θ)`.
pub fn shape_volume_gradient(s: &BipyramidShape) -> Result<Vec<f64>, OptimizeError> {
    check_interior(s)?;
    Ok(s.angles().into_iter().map(lobachevsky_derivative).collect())
}

fn check_interior(s: &BipyramidShape) -> Result<(), OptimizeError> {
    s.validate()?;
    for (index, t) in s.triples.iter().enumerate() {
        for angle in t.angles() {
            if angle <= 0.0 || angle >= PI || angle.sin() <= 0.0 {
                return Err(OptimizeError::BoundaryAngle { index, angle });
            }
        }
    }
    Ok(())
}

/// Deviation from the Lagrange conditions of the constrained maximum:
/// `β_i = γ_i` for all `i`, and `sin β_i / sin α_i` independent of `i`.
///
/// Returns the larger of `max |β_i − γ_i|` and the spread
/// `max_i r_i − min_i r_i` of the ratios `r_i = sin β_i / sin α_i`.
pub fn stationarity_residual(s: &BipyramidShape) -> Result<f64, OptimizeError> {
    check_interior(s)?;
    let side_gap = s
        .triples
        .iter()
        .map(|t| (t.beta - t.gamma).abs())
        .fold(0.0, f64::max);
    let (lo, hi) = s
        .triples
        .iter()
        .map(|t| t.beta.sin() / t.alpha.sin())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    Ok(side_gap.max(hi - lo))
}

/// Samples a feasible shape with every angle in `(ANGLE_MARGIN, π − ANGLE_MARGIN)`:
/// central angles are normalized uniform weights (resampled until each is
/// below `π`), side angles uniform on the remaining range.
pub fn random_feasible_shape<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BipyramidShape, OptimizeError> {
    if n < 3 {
        return Err(OptimizeError::TooFewTetrahedra { n, min: 3 });
    }
    let eps = ANGLE_MARGIN;
    let alphas = loop {
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(1e-3..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let alphas: Vec<f64> = weights.iter().map(|w| 2.0 * PI * w / total).collect();
        if alphas.iter().all(|&a| a > 2.0 * eps && a < PI - 4.0 * eps) {
            break alphas;
        }
    };
    let betas: Vec<f64> = alphas
        .iter()
        .map(|&a| rng.gen_range(2.0 * eps..PI - a - 2.0 * eps))
        .collect();
    BipyramidShape::from_alphas_betas(&alphas, &betas)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl OptimizerOptions {
    pub fn new(tolerance: f64, max_iterations: usize) -> Self {
        OptimizerOptions { tolerance, max_iterations, seed: 0x0b1b_9a7a }
    }
}

/// Result of a successful maximization.
#[derive(Debug, Clone)]
pub struct Maximizer {
    pub shape: BipyramidShape,
    pub volume: f64,
    pub residual: f64,
    pub iterations: usize,
    pub restarts: usize,
    /// Largest constraint violation seen over every iterate of every run.
    pub max_constraint_violation: f64,
}

/// Maximizes the volume over all ideal `n`-bipyramids from a seeded random
/// feasible start.
pub fn maximize_volume(n: usize, tolerance: f64, max_iterations: usize) -> Result<Maximizer, OptimizeError> {
    let mut options = OptimizerOptions::new(tolerance, max_iterations);
    options.seed ^= n as u64;
    maximize_volume_with(n, &options)
}

pub fn maximize_volume_with(n: usize, options: &OptimizerOptions) -> Result<Maximizer, OptimizeError> {
    if n < 3 {
        return Err(OptimizeError::TooFewTetrahedra { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let start = random_feasible_shape(n, &mut rng)?;
    maximize_from(start, options, &mut rng)
}

/// Runs the ascent from `start`, restarting from fresh random shapes (up to
/// [`MAX_RESTARTS`] times) when an iterate gets stuck on the angle boundary.
pub fn maximize_from<R: Rng + ?Sized>(
    start: BipyramidShape,
    options: &OptimizerOptions,
    rng: &mut R,
) -> Result<Maximizer, OptimizeError> {
    if !(options.tolerance > 0.0) {
        return Err(OptimizeError::Tolerance(options.tolerance));
    }
    check_interior(&start)?;
    let n = start.n();
    let mut start = start;
    let mut total_iterations = 0;
    let mut worst_violation = 0.0f64;
    let mut last_residual = f64::INFINITY;
    for restart in 0..=MAX_RESTARTS {
        let problem = Reduced::new(n);
        let outcome = problem.ascend(&start, options);
        total_iterations += outcome.iterations;
        worst_violation = worst_violation.max(outcome.max_violation);
        last_residual = outcome.residual;
        match outcome.status {
            Status::Converged => {
                let shape = problem.shape(&outcome.z)?;
                let volume = volume_unchecked(&shape);
                return Ok(Maximizer {
                    residual: stationarity_residual(&shape)?,
                    shape,
                    volume,
                    iterations: total_iterations,
                    restarts: restart,
                    max_constraint_violation: worst_violation,
                });
            }
            Status::Stuck => start = random_feasible_shape(n, rng)?,
            Status::Exhausted => break,
        }
    }
    Err(OptimizeError::NotConverged {
        iterations: total_iterations,
        restarts: MAX_RESTARTS,
        residual: last_residual,
    })
}

enum Status {
    Converged,
    Stuck,
    Exhausted,
}

struct Outcome {
    z: DVector<f64>,
    status: Status,
    iterations: usize,
    residual: f64,
    max_violation: f64,
}

/// Affine map from free coordinates `z` to the `3n` angles: `angles = base + map·z`.
struct Reduced {
    n: usize,
    base: DVector<f64>,
    map: DMatrix<f64>,
}

impl Reduced {
    fn new(n: usize) -> Self {
        let dim = 2 * n - 1;
        let mut base = DVector::zeros(3 * n);
        let mut map = DMatrix::zeros(3 * n, dim);
        let alpha_col = |i: usize| i;
        let beta_col = |i: usize| n - 1 + i;
        for i in 0..n {
            let (a, b, g) = (3 * i, 3 * i + 1, 3 * i + 2);
            if i + 1 < n {
                map[(a, alpha_col(i))] = 1.0;
            } else {
                base[a] = 2.0 * PI;
                for j in 0..n - 1 {
                    map[(a, alpha_col(j))] = -1.0;
                }
            }
            map[(b, beta_col(i))] = 1.0;
            // γ = π − α − β
            base[g] = PI;
            for c in 0..dim {
                map[(g, c)] = -map[(a, c)] - map[(b, c)];
            }
            base[g] -= base[a];
        }
        Reduced { n, base, map }
    }

    fn coordinates(&self, s: &BipyramidShape) -> DVector<f64> {
        let t = s.triples();
        let n = self.n;
        DVector::from_iterator(
            2 * n - 1,
            t[..n - 1].iter().map(|t| t.alpha).chain(t.iter().map(|t| t.beta)),
        )
    }

    fn angles(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.base + &self.map * z
    }

    fn shape(&self, z: &DVector<f64>) -> Result<BipyramidShape, OptimizeError> {
        let angles = self.angles(z);
        let triples = angles
            .as_slice()
            .chunks(3)
            .map(|c| DihedralTriple::new(c[0], c[1], c[2]))
            .collect::<Result<Vec<_>, _>>()?;
        BipyramidShape::new(triples)
    }

    fn value(angles: &DVector<f64>) -> f64 {
        angles.iter().map(|&a| lob(a)).sum()
    }

    fn feasible(angles: &DVector<f64>) -> bool {
        angles.iter().all(|&a| a > ANGLE_MARGIN && a < PI - ANGLE_MARGIN)
    }

    fn violation(&self, angles: &DVector<f64>) -> f64 {
        let triples = angles
            .as_slice()
            .chunks(3)
            .map(|c| (c[0] + c[1] + c[2] - PI).abs())
            .fold(0.0, f64::max);
        let central: f64 = angles.iter().step_by(3).sum();
        triples.max((central - 2.0 * PI).abs())
    }

    fn residual(angles: &DVector<f64>) -> f64 {
        let mut gap = 0.0f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for c in angles.as_slice().chunks(3) {
            gap = gap.max((c[1] - c[2]).abs());
            let r = c[1].sin() / c[0].sin();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        gap.max(hi - lo)
    }

    fn ascend(&self, start: &BipyramidShape, options: &OptimizerOptions) -> Outcome {
        let mut z = self.coordinates(start);
        let mut angles = self.angles(&z);
        let mut value = Self::value(&angles);
        let mut max_violation = self.violation(&angles);
        let mut residual = Self::residual(&angles);
        for iteration in 1..=options.max_iterations {
            let grad_full = angles.map(lobachevsky_derivative);
            let grad = self.map.transpose() * &grad_full;
            let curvature = angles.map(|a| -1.0 / a.tan());
            let hessian = self.map.transpose() * DMatrix::from_diagonal(&curvature) * &self.map;

            let search = |direction: &DVector<f64>| {
                let slope = direction.dot(&grad);
                // near the maximum value changes drown in rounding, so a
                // step that shrinks the residual is also taken
                let noise = 64.0 * f64::EPSILON * value.abs().max(1.0);
                let mut step = 1.0;
                while step > 1e-16 {
                    let trial_z = &z + step * direction;
                    let trial = self.angles(&trial_z);
                    if Self::feasible(&trial) {
                        let trial_value = Self::value(&trial);
                        if trial_value >= value + 1e-4 * step * slope
                            || (trial_value >= value - noise && Self::residual(&trial) < residual)
                        {
                            return Some((trial_z, trial, trial_value, step));
                        }
                    }
                    step *= 0.5;
                }
                None
            };

            let newton = (-hessian)
                .cholesky()
                .map(|c| c.solve(&grad))
                .filter(|d| d.dot(&grad) > 0.0);
            let mut accepted = newton.as_ref().and_then(&search);
            // Newton steps cut short by the boundary can crawl towards it;
            // the plain gradient pushes small angles back inside
            if accepted.as_ref().is_none_or(|a| a.3 < SHORT_STEP) {
                if let Some(g) = search(&grad) {
                    if accepted.as_ref().is_none_or(|a| g.2 > a.2) {
                        accepted = Some(g);
                    }
                }
            }

            let Some((next_z, next_angles, next_value, _)) = accepted else {
                let status = if residual < options.tolerance {
                    Status::Converged
                } else {
                    Status::Stuck
                };
                return Outcome { z, status, iterations: iteration, residual, max_violation };
            };
            let change = (next_value - value).abs();
            z = next_z;
            angles = next_angles;
            value = next_value;
            residual = Self::residual(&angles);
            max_violation = max_violation.max(self.violation(&angles));
            if residual < options.tolerance && change < options.tolerance {
                return Outcome {
                    z,
                    status: Status::Converged,
                    iterations: iteration,
                    residual,
                    max_violation,
                };
            }
        }
        Outcome { z, status: Status::Exhausted, iterations: options.max_iterations, residual, max_violation }
    }
}

/// Checks a computed maximum against the regular bipyramid volume.
pub fn regular_gap(m: &Maximizer) -> f64 {
    let regular = regular_bipyramid_volume(m.shape.n() as u64).expect("n ≥ 3");
    m.volume - regular
}
