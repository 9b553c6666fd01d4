//! Lobachevsky function, ideal tetrahedron volumes and regular ideal
//! bipyramid volumes.
//!
//! The Lobachevsky function is `Λ(θ) = −∫₀^θ ln|2 sin t| dt`. It is odd and
//! π-periodic, and the volume of an ideal tetrahedron with dihedral angles
//! `α + β + γ = π` is `Λ(α) + Λ(β) + Λ(γ)`.
//!
//! Evaluation uses the power series
//!
//! ```text
//! Λ(z) = z − z ln(2z) + Σ_{k≥1} ζ(2k) z^{2k+1} / (k (2k+1) π^{2k}),   0 < z ≤ π/2
//! ```
//!
//! whose terms shrink at least like `4^{-k}` on that range. Arguments in
//! `(π/4, π/2]` are rewritten through the duplication formula so that values
//! near `π/2` (where `Λ` vanishes) keep full absolute accuracy even after
//! being multiplied by a very large bipyramid order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use thiserror::Error;

/// Tolerance used when checking angle constraints.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

const SERIES_TERMS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("argument must be finite, got {0}")]
    NonFinite(f64),
    #[error("dihedral angles {0:?} must each lie in [0, π] and sum to π")]
    InvalidTriple([f64; 3]),
    #[error("bipyramid order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("logarithmic bound needs n / divisor > 1 (n = {n}, divisor = {divisor})")]
    VacuousLogBound { n: u64, divisor: f64 },
    #[error("logarithmic bound is stated for n ≥ 3, got {0}")]
    LogBoundOrder(u64),
}

/// Volumes of the regular ideal tetrahedron and octahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeConstants {
    pub v_tet: f64,
    pub v_oct: f64,
}

impl VolumeConstants {
    pub fn get() -> &'static VolumeConstants {
        static CONSTANTS: OnceLock<VolumeConstants> = OnceLock::new();
        CONSTANTS.get_or_init(|| VolumeConstants {
            v_tet: 3.0 * lob(PI / 3.0),
            v_oct: 8.0 * lob(FRAC_PI_4),
        })
    }
}

/// Volume of the regular ideal tetrahedron, ≈ 1.01494.
pub fn v_tet() -> f64 {
    VolumeConstants::get().v_tet
}

/// Volume of the regular ideal octahedron, ≈ 3.66386.
pub fn v_oct() -> f64 {
    VolumeConstants::get().v_oct
}

/// Dihedral angles of an ideal tetrahedron, in radians.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DihedralTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DihedralTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, GeometryError> {
        let t = DihedralTriple { alpha, beta, gamma };
        t.validate()?;
        Ok(t)
    }

    /// Builds the triple whose third angle closes the sum to π.
    pub fn from_two(alpha: f64, beta: f64) -> Result<Self, GeometryError> {
        Self::new(alpha, beta, PI - alpha - beta)
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let a = self.angles();
        let in_range = a
            .iter()
            .all(|&x| x.is_finite() && (-ANGLE_TOLERANCE..=PI + ANGLE_TOLERANCE).contains(&x));
        if !in_range || (a.iter().sum::<f64>() - PI).abs() > ANGLE_TOLERANCE {
            return Err(GeometryError::InvalidTriple(a));
        }
        Ok(())
    }
}

fn zeta_even() -> &'static [f64; SERIES_TERMS + 1] {
    static TABLE: OnceLock<[f64; SERIES_TERMS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut z = [0.0; SERIES_TERMS + 1];
        z[1] = PI * PI / 6.0;
        z[2] = PI.powi(4) / 90.0;
        for (k, slot) in z.iter_mut().enumerate().skip(3) {
            let s = 2 * k as i32;
            // sum smallest terms first; the tail beyond 2000 is below 1e-17
            *slot = (1..=2000).rev().map(|m| (m as f64).powi(-s)).sum();
        }
        z
    })
}

/// Series evaluation for `0 ≤ z ≤ π/2`.
fn lob_series(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let zeta = zeta_even();
    let ratio = (z / PI) * (z / PI);
    let mut power = z * ratio;
    let mut sum = 0.0;
    for (k, zk) in zeta.iter().enumerate().skip(1) {
        let kf = k as f64;
        let term = zk * power / (kf * (2.0 * kf + 1.0));
        sum += term;
        if term < 1e-18 * z {
            break;
        }
        power *= ratio;
    }
    z - z * (2.0 * z).ln() + sum
}

/// `Λ(π/2 − y)` for `0 ≤ y ≤ π/4`, via `Λ(π/2 − y) = Λ(y) − Λ(2y)/2`.
fn lob_near_half_pi(y: f64) -> f64 {
    lob_series(y) - 0.5 * lob_series(2.0 * y)
}

/// Λ for a finite argument.
pub(crate) fn lob(theta: f64) -> f64 {
    let reduced = theta - PI * (theta / PI).round();
    let x = reduced.abs();
    let value = if x <= FRAC_PI_4 {
        lob_series(x)
    } else {
        lob_near_half_pi(FRAC_PI_2 - x)
    };
    value.copysign(reduced)
}

/// The Lobachevsky function `Λ(θ) = −∫₀^θ ln|2 sin t| dt`.
pub fn lobachevsky(theta: f64) -> Result<f64, GeometryError> {
    if !theta.is_finite() {
        return Err(GeometryError::NonFinite(theta));
    }
    Ok(lob(theta))
}

/// Derivative of Λ, `−ln(2 sin θ)`, for θ in `(0, π)`.
pub fn lobachevsky_derivative(theta: f64) -> f64 {
    -(2.0 * theta.sin()).ln()
}

pub fn ideal_tetrahedron_volume(t: &DihedralTriple) -> Result<f64, GeometryError> {
    t.validate()?;
    Ok(tetrahedron_volume_unchecked(t))
}

pub(crate) fn tetrahedron_volume_unchecked(t: &DihedralTriple) -> f64 {
    (lob(t.alpha) + lob(t.beta) + lob(t.gamma)).max(0.0)
}

/// Volume of one of the `n` congruent tetrahedra of the regular ideal
/// `n`-bipyramid, with angles `(2π/n, (n−2)π/2n, (n−2)π/2n)`.
pub fn regular_apex_volume(n: u64) -> Result<f64, GeometryError> {
    if n < 2 {
        return Err(GeometryError::OrderTooSmall(n));
    }
    let nf = n as f64;
    let apex = 2.0 * PI / nf;
    // (n−2)π/2n = π/2 − π/n, evaluated without forming the difference
    let side_defect = PI / nf;
    let side = if side_defect <= FRAC_PI_4 {
        lob_near_half_pi(side_defect)
    } else {
        lob(FRAC_PI_2 - side_defect)
    };
    Ok(lob(apex) + 2.0 * side)
}

/// Volume of the regular ideal `n`-bipyramid.
pub fn regular_bipyramid_volume(n: u64) -> Result<f64, GeometryError> {
    Ok(n as f64 * regular_apex_volume(n)?)
}

/// Bipyramid volume for a face with `edges` sides; faces with at most two
/// sides give flat bipyramids.
pub fn face_bipyramid_volume(edges: usize) -> f64 {
    if edges <= 2 {
        0.0
    } else {
        regular_bipyramid_volume(edges as u64).expect("order is at least 3")
    }
}

/// Divisor in the logarithmic growth bound `2π ln(n / divisor)`.
pub const LOG_DIVISOR: f64 = 2.0;
/// Sharper divisor; see [`log_volume_bound`].
pub const LOG_DIVISOR_SHARP: f64 = 2.1818;

/// `2π ln(n / divisor)`, an upper bound for the regular `n`-bipyramid
/// volume. With the sharper divisor 2.1818 the bound only holds from n = 4 on
/// (at n = 3 it gives 2.00096 < 2.02988).
pub fn log_volume_bound(n: u64, divisor: f64) -> Result<f64, GeometryError> {
    if n < 3 {
        return Err(GeometryError::LogBoundOrder(n));
    }
    let ratio = n as f64 / divisor;
    if !(ratio > 1.0) {
        return Err(GeometryError::VacuousLogBound { n, divisor });
    }
    Ok(2.0 * PI * ratio.ln())
}
