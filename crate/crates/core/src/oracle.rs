//! Comparison harness between the closed forms and the finite-difference oracle.
//!
//! Sign map: the oracle's `<X_,ij, N>` is the negative of the closed-form
//! `II = <X_,i, N_,j>`; `H` and `K` are compared directly, both sides using the
//! Gauss map of `g` as the normal.

use nalgebra::Vector3;
use thiserror::Error;

use crate::expr::ComplexScalar;
use crate::fd::{fd_forms, FdError, FdReport, Immersion};
use crate::forms::{rel_dev, rel_dev_slice};
use crate::weierstrass::{evaluate, CoreError, GeneratorPair, SurfaceJet, Thresholds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Fd(#[from] FdError),
}

/// The surface of a generator pair as a plain immersion, oriented by its Gauss map.
///
/// Points where the closed form fails map to NaN, which the oracle rejects.
pub struct GeneratorImmersion<'a> {
    pub gen: &'a GeneratorPair,
    pub eps_g: f64,
}

impl Immersion for GeneratorImmersion<'_> {
    fn position(&self, u1: f64, u2: f64) -> Vector3<f64> {
        self.gen.position(ComplexScalar::new(u1, u2), self.eps_g).unwrap_or_else(|_| Vector3::repeat(f64::NAN))
    }

    fn reference_normal(&self, u1: f64, u2: f64) -> Option<Vector3<f64>> {
        self.gen.normal(ComplexScalar::new(u1, u2)).ok()
    }
}

/// Relative deviations between the closed forms and the oracle at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleDeviation {
    pub first: f64,
    pub second: f64,
    /// `|dH|` over the largest principal curvature magnitude.
    pub mean: f64,
    /// `|dH| / |H|`, for reporting.
    pub mean_plain: f64,
    pub gauss: f64,
}

impl OracleDeviation {
    /// Largest of the gated deviations (`mean_plain` is informational).
    pub fn max(&self) -> f64 {
        [self.first, self.second, self.mean, self.gauss].into_iter().fold(0.0, f64::max)
    }

    pub fn merge(&self, o: &OracleDeviation) -> OracleDeviation {
        OracleDeviation {
            first: self.first.max(o.first),
            second: self.second.max(o.second),
            mean: self.mean.max(o.mean),
            mean_plain: self.mean_plain.max(o.mean_plain),
            gauss: self.gauss.max(o.gauss),
        }
    }
}

/// Largest principal curvature magnitude, `|H| + sqrt(H^2 - K)`.
pub fn curvature_scale(mean: f64, gauss: f64) -> f64 {
    mean.abs() + (mean * mean - gauss).max(0.0).sqrt()
}

pub fn compare(jet: &SurfaceJet, report: &FdReport) -> OracleDeviation {
    let mean_scale = curvature_scale(jet.mean, jet.gauss).max(report.mean.abs()).max(1e-30);
    OracleDeviation {
        first: rel_dev_slice(&jet.first.as_array(), &report.first.as_array()),
        second: rel_dev_slice(&jet.second.as_array(), &report.second.negated().as_array()),
        mean: (jet.mean - report.mean).abs() / mean_scale,
        mean_plain: rel_dev(jet.mean, report.mean),
        gauss: rel_dev(jet.gauss, report.gauss),
    }
}

/// Evaluate the closed forms at `z` and compare them with the oracle at `step`.
pub fn check_point(
    gen: &GeneratorPair,
    z: ComplexScalar,
    step: f64,
    th: &Thresholds,
) -> Result<(SurfaceJet, FdReport, OracleDeviation), OracleError> {
    let jet = evaluate(gen, z, th)?;
    let report = fd_forms(&GeneratorImmersion { gen, eps_g: th.eps_g }, (z.re, z.im), step)?;
    let dev = compare(&jet, &report);
    Ok((jet, report, dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_matches_oracle() {
        let gen = GeneratorPair::parse("0", "z").unwrap();
        let (jet, report, dev) =
            check_point(&gen, ComplexScalar::new(0.2, -0.3), 1e-4, &Thresholds::default()).unwrap();
        assert!(dev.max() < 1e-7, "{dev:?}");
        assert!((report.normal - jet.normal).norm() < 1e-7);
    }

    #[test]
    fn curvature_scale_is_spectral_radius() {
        // principal curvatures 3 and -1
        assert_eq!(curvature_scale(1.0, -3.0), 3.0);
        assert_eq!(curvature_scale(-2.0, 4.0), 2.0);
    }
}
