//! Finite-difference differential geometry of an arbitrary parameterized surface.
//!
//! This is the independent oracle for the closed forms: it only ever samples
//! the position map. Second fundamental form coefficients are `<X_,ij, N>`,
//! so they are the negatives of the closed-form `II = <X_,i, N_,j>`; mean and
//! Gauss curvature need no sign change when both sides use the same normal.

use nalgebra::Vector3;
use thiserror::Error;

use crate::forms::{gauss_curvature, mean_curvature, FirstForm, SecondForm};

pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("degenerate grid: |X_,1 x X_,2| = {cross_norm:e}")]
    DegenerateGrid { cross_norm: f64 },
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("immersion is not finite near ({u1}, {u2})")]
    NonFinite { u1: f64, u2: f64 },
}

/// A parameterized surface `(u1, u2) -> R^3`, optionally with a reference
/// Gauss map used to orient the finite-difference normal.
pub trait Immersion {
    fn position(&self, u1: f64, u2: f64) -> Vector3<f64>;

    fn reference_normal(&self, _u1: f64, _u2: f64) -> Option<Vector3<f64>> {
        None
    }
}

impl<F> Immersion for F
where
    F: Fn(f64, f64) -> Vector3<f64>,
{
    fn position(&self, u1: f64, u2: f64) -> Vector3<f64> {
        self(u1, u2)
    }
}

/// Position map paired with a reference normal.
pub struct Oriented<P, N> {
    pub position: P,
    pub normal: N,
}

impl<P, N> Immersion for Oriented<P, N>
where
    P: Fn(f64, f64) -> Vector3<f64>,
    N: Fn(f64, f64) -> Vector3<f64>,
{
    fn position(&self, u1: f64, u2: f64) -> Vector3<f64> {
        (self.position)(u1, u2)
    }

    fn reference_normal(&self, u1: f64, u2: f64) -> Option<Vector3<f64>> {
        Some((self.normal)(u1, u2))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdReport {
    pub first: FirstForm,
    /// `<X_,ij, N>`
    pub second: SecondForm,
    pub mean: f64,
    pub gauss: f64,
    pub normal: Vector3<f64>,
    /// `X_,1`, `X_,2`
    pub tangents: [Vector3<f64>; 2],
    pub step: f64,
}

fn check_step(step: f64) -> Result<(), FdError> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(FdError::InvalidStep(step))
    }
}

/// Central-difference first partials of a vector-valued map.
pub fn fd_partials<F>(map: F, u: (f64, f64), step: f64) -> [Vector3<f64>; 2]
where
    F: Fn(f64, f64) -> Vector3<f64>,
{
    let (u1, u2) = u;
    [(map(u1 + step, u2) - map(u1 - step, u2)) / (2.0 * step), (map(u1, u2 + step) - map(u1, u2 - step)) / (2.0 * step)]
}

/// First and second fundamental forms, normal and curvatures at `u`.
pub fn fd_forms<S: Immersion + ?Sized>(s: &S, u: (f64, f64), step: f64) -> Result<FdReport, FdError> {
    check_step(step)?;
    let (u1, u2) = u;
    let x = |a: f64, b: f64| s.position(u1 + a * step, u2 + b * step);

    let center = x(0.0, 0.0);
    let (xp0, xm0, x0p, x0m) = (x(1.0, 0.0), x(-1.0, 0.0), x(0.0, 1.0), x(0.0, -1.0));
    let (xpp, xpm, xmp, xmm) = (x(1.0, 1.0), x(1.0, -1.0), x(-1.0, 1.0), x(-1.0, -1.0));
    let samples = [center, xp0, xm0, x0p, x0m, xpp, xpm, xmp, xmm];
    if samples.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
        return Err(FdError::NonFinite { u1, u2 });
    }

    let h2 = step * step;
    let x1 = (xp0 - xm0) / (2.0 * step);
    let x2 = (x0p - x0m) / (2.0 * step);
    let x11 = (xp0 - 2.0 * center + xm0) / h2;
    let x22 = (x0p - 2.0 * center + x0m) / h2;
    let x12 = (xpp - xpm - xmp + xmm) / (4.0 * h2);

    let cross = x1.cross(&x2);
    let cross_norm = cross.norm();
    if !(cross_norm >= 1e-12) {
        return Err(FdError::DegenerateGrid { cross_norm });
    }
    let mut normal = cross / cross_norm;
    if let Some(reference) = s.reference_normal(u1, u2) {
        if normal.dot(&reference) < 0.0 {
            normal = -normal;
        }
    }

    let first = FirstForm { e: x1.dot(&x1), f: x1.dot(&x2), g: x2.dot(&x2) };
    let second = SecondForm { e: x11.dot(&normal), f: x12.dot(&normal), g: x22.dot(&normal) };
    Ok(FdReport {
        first,
        second,
        mean: mean_curvature(&first, &second),
        gauss: gauss_curvature(&first, &second),
        normal,
        tangents: [x1, x2],
        step,
    })
}

/// Five-point Laplacian `f_,11 + f_,22`.
pub fn fd_laplacian<F: Fn(f64, f64) -> f64>(f: F, u: (f64, f64), step: f64) -> f64 {
    let (u1, u2) = u;
    let c = f(u1, u2);
    (f(u1 + step, u2) + f(u1 - step, u2) + f(u1, u2 + step) + f(u1, u2 - step) - 4.0 * c) / (step * step)
}

/// Central-difference gradient of a scalar field.
pub fn fd_gradient<F: Fn(f64, f64) -> f64>(f: F, u: (f64, f64), step: f64) -> [f64; 2] {
    let (u1, u2) = u;
    [(f(u1 + step, u2) - f(u1 - step, u2)) / (2.0 * step), (f(u1, u2 + step) - f(u1, u2 - step)) / (2.0 * step)]
}
