//! Rotational RT-surfaces `X_{a,b}`.
//!
//! Every RT-surface of rotation is locally
//!
//! ```text
//! X_{a,b}(u1, u2) = e^{a u1 + b} / (1 + e^{2 u1}) * (M cos u2, M sin u2, N)
//! M(u1) = (a (e^{-u1} - e^{3 u1}) + 4 e^{u1}) / 2
//! N(u1) = 1 - e^{2 u1} - a (1 + e^{2 u1})
//! ```
//!
//! which is the Weierstrass surface of `f = a z + b`, `g = e^z`.
//!
//! Singular parallels are located from the finite-difference area element of
//! `X_{a,b}` itself. The printed closed form for `EG - F^2` and its table of
//! roots are only evaluated for comparison: the printed expression vanishes
//! identically at `a = 0`, where the surface is a round sphere.

use nalgebra::Vector3;

use crate::expr::{ComplexScalar, ExprNode, Func};
use crate::fd::{fd_partials, DEFAULT_STEP};
use crate::forms::rel_dev_slice;
use crate::weierstrass::{CoreError, GeneratorPair, Thresholds};

/// Number of sample points in the sign-change scan.
pub const SCAN_POINTS: usize = 2048;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_INTERVAL: f64 = 1e-12;
/// Half-width of the interval on which a reported root must change sign.
pub const CERTIFY_RADIUS: f64 = 1e-9;
/// A printed candidate agrees with a numeric root within this distance.
pub const CANDIDATE_MATCH_TOL: f64 = 1e-6;
pub const EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    pub a: f64,
    pub b: f64,
}

impl RotationParams {
    pub fn new(a: f64, b: f64) -> Self {
        RotationParams { a, b }
    }

    /// Weierstrass data `f = a z + b`, `g = exp(z)`.
    pub fn generator_pair(&self) -> GeneratorPair {
        let f = ExprNode::add(
            ExprNode::mul(ExprNode::constant(self.a, 0.0), ExprNode::Var),
            ExprNode::constant(self.b, 0.0),
        );
        GeneratorPair::new(f, ExprNode::call(Func::Exp, ExprNode::Var))
    }
}

/// Profile functions `(M(u1), N(u1))`.
pub fn profile(p: RotationParams, u1: f64) -> (f64, f64) {
    let a = p.a;
    let m = (a * ((-u1).exp() - (3.0 * u1).exp()) + 4.0 * u1.exp()) / 2.0;
    let e2 = (2.0 * u1).exp();
    (m, 1.0 - e2 - a * (1.0 + e2))
}

pub fn x_ab(p: RotationParams, u1: f64, u2: f64) -> Vector3<f64> {
    let (m, n) = profile(p, u1);
    let s = (p.a * u1 + p.b).exp() / (1.0 + (2.0 * u1).exp());
    Vector3::new(s * m * u2.cos(), s * m * u2.sin(), s * n)
}

/// Gauss map of `g = e^z` at `(u1, u2)`.
pub fn rotation_normal(u1: f64, u2: f64) -> Vector3<f64> {
    let r = u1.exp();
    let t = 1.0 + r * r;
    Vector3::new(2.0 * r * u2.cos(), 2.0 * r * u2.sin(), 1.0 - r * r) / t
}

/// Position through the Weierstrass closed form, checked against [`x_ab`].
pub fn weierstrass_equivalence(
    p: RotationParams,
    z: ComplexScalar,
    th: &Thresholds,
) -> Result<Vector3<f64>, CoreError> {
    let via_pair = p.generator_pair().position(z, th.eps_g)?;
    let direct = x_ab(p, z.re, z.im);
    let deviation = rel_dev_slice(via_pair.as_slice(), direct.as_slice());
    if !(deviation <= EQUIVALENCE_TOL) {
        return Err(CoreError::Consistency { check: "rotation equivalence", deviation, tolerance: EQUIVALENCE_TOL });
    }
    Ok(via_pair)
}

fn tangents(p: RotationParams, u1: f64) -> [Vector3<f64>; 2] {
    fd_partials(|a, b| x_ab(p, a, b), (u1, 0.0), DEFAULT_STEP)
}

/// `EG - F^2` of `X_{a,b}` from central differences. Independent of `u2`.
pub fn area_element(p: RotationParams, u1: f64) -> f64 {
    let [x1, x2] = tangents(p, u1);
    x1.dot(&x1) * x2.dot(&x2) - x1.dot(&x2).powi(2)
}

/// `<X_,1 x X_,2, N>` from central differences, with `N` the Gauss map of `e^z`.
///
/// Its square is [`area_element`]; unlike `EG - F^2` it changes sign across a
/// simple singular parallel.
pub fn signed_area_element(p: RotationParams, u1: f64) -> f64 {
    let [x1, x2] = tangents(p, u1);
    x1.cross(&x2).dot(&rotation_normal(u1, 0.0))
}

/// The printed closed form of `EG - F^2` for `X_{a,b}`.
pub fn printed_area_element(p: RotationParams, u1: f64) -> f64 {
    let (a, b) = (p.a, p.b);
    let e2 = (2.0 * u1).exp();
    let e4 = e2 * e2;
    let first = a * e2 * (e2 - 4.0) - a;
    let second = a * e4 * (a + 1.0) + 2.0 * e2 * (a * a + 2.0) + a * (a - 1.0);
    let denom = 16.0 * (e2 + 1.0).powi(4) * (-4.0 * u1 * (a - 1.0) - 4.0 * b).exp();
    first * first * second * second / denom
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularRoot {
    pub u1: f64,
    /// `|EG - F^2|` at the root.
    pub residual: f64,
    /// Final bisection bracket width.
    pub interval: f64,
    /// The signed area element changes sign on `[u1 - 1e-9, u1 + 1e-9]`.
    pub certified: bool,
}

/// One case of the printed table of singular parallels.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCandidate {
    pub case: &'static str,
    pub formula: &'static str,
    /// The case condition holds for this `a`.
    pub applies: bool,
    /// Value of the formula when its logarithm has a positive argument.
    pub u1: Option<f64>,
    /// Numeric root closest to `u1`, if any.
    pub nearest_root: Option<f64>,
    pub agrees: bool,
    /// Printed `EG - F^2` at `u1`.
    pub printed_area: Option<f64>,
    /// Finite-difference `EG - F^2` at `u1`.
    pub numeric_area: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSet {
    pub params: RotationParams,
    pub range: (f64, f64),
    pub roots: Vec<SingularRoot>,
    pub candidates: Vec<TableCandidate>,
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi - lo <= ROOT_INTERVAL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return (mid, 0.0);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), hi - lo)
}

fn candidate_values(a: f64) -> [(&'static str, &'static str, bool, f64); 4] {
    let s4 = (4.0 + a * a).sqrt();
    let s5 = (4.0 + 5.0 * a * a).sqrt();
    [
        ("a > 0", "ln((2 + sqrt(4 + a^2)) / a) / 2", a > 0.0, (2.0 + s4) / a),
        ("a < 0", "ln((2 - sqrt(4 + a^2)) / a) / 2", a < 0.0, (2.0 - s4) / a),
        (
            "0 < a < 1",
            "ln((-(2 + a^2) + sqrt(4 + 5a^2)) / (a^2 + a)) / 2",
            a > 0.0 && a < 1.0,
            (-(2.0 + a * a) + s5) / (a * a + a),
        ),
        (
            "-1 < a < 0",
            "ln((-(2 + a^2) - sqrt(4 + 5a^2)) / (a^2 + a)) / 2",
            a > -1.0 && a < 0.0,
            (-(2.0 + a * a) - s5) / (a * a + a),
        ),
    ]
}

/// Singular parallels of `X_{a,b}` in `[lo, hi]`, with the printed table alongside.
pub fn singular_u1(p: RotationParams, range: (f64, f64)) -> SingularSet {
    let (lo, hi) = range;
    let f = |u: f64| signed_area_element(p, u);
    let mut roots = Vec::new();
    if lo < hi {
        let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
        let nodes: Vec<f64> =
            (0..SCAN_POINTS).map(|k| if k + 1 == SCAN_POINTS { hi } else { lo + step * k as f64 }).collect();
        let values: Vec<f64> = nodes.iter().map(|&u| f(u)).collect();
        for k in 0..SCAN_POINTS - 1 {
            let (va, vb) = (values[k], values[k + 1]);
            let (u, width) = if va == 0.0 {
                (nodes[k], 0.0)
            } else if (va < 0.0) != (vb < 0.0) && vb != 0.0 {
                bisect(&f, nodes[k], nodes[k + 1])
            } else {
                continue;
            };
            let left = f(u - CERTIFY_RADIUS);
            let right = f(u + CERTIFY_RADIUS);
            roots.push(SingularRoot {
                u1: u,
                residual: area_element(p, u).abs(),
                interval: width,
                certified: (left < 0.0) != (right < 0.0),
            });
        }
        if values[SCAN_POINTS - 1] == 0.0 {
            roots.push(SingularRoot { u1: hi, residual: 0.0, interval: 0.0, certified: false });
        }
    }

    let candidates = candidate_values(p.a)
        .into_iter()
        .map(|(case, formula, applies, arg)| {
            let u1 = (arg > 0.0 && arg.is_finite()).then(|| 0.5 * arg.ln());
            let nearest_root =
                u1.and_then(|c| roots.iter().map(|r| r.u1).min_by(|x, y| (x - c).abs().total_cmp(&(y - c).abs())));
            let agrees = matches!((u1, nearest_root), (Some(c), Some(r)) if (c - r).abs() <= CANDIDATE_MATCH_TOL);
            TableCandidate {
                case,
                formula,
                applies,
                u1,
                nearest_root,
                agrees,
                printed_area: u1.map(|u| printed_area_element(p, u)),
                numeric_area: u1.map(|u| area_element(p, u)),
            }
        })
        .collect();

    SingularSet { params: p, range, roots, candidates }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn profile_examples() {
        assert_eq!(profile(RotationParams::new(0.0, 0.0), 0.0), (2.0, 0.0));
        assert_eq!(profile(RotationParams::new(1.0, 0.0), 0.0), (2.0, -2.0));
        for u1 in [-2.0_f64, -0.3, 0.8, 2.5] {
            let (m, n) = profile(RotationParams::new(0.0, 5.0), u1);
            assert!(close(m, 2.0 * u1.exp(), 1e-14));
            assert!(close(n, 1.0 - (2.0 * u1).exp(), 1e-14));
        }
    }

    #[test]
    fn x_ab_examples() {
        assert_eq!(x_ab(RotationParams::new(0.0, 0.0), 0.0, 0.0), Vector3::new(1.0, 0.0, 0.0));
        for (u1, u2) in [(-2.9, 0.1), (0.0, 3.0), (1.7, -1.0), (3.0, 6.0)] {
            assert!(close(x_ab(RotationParams::new(0.0, 0.0), u1, u2).norm(), 1.0, 1e-14));
            assert!(close(x_ab(RotationParams::new(0.0, 2f64.ln()), u1, u2).norm(), 2.0, 1e-14));
        }
    }

    #[test]
    fn equivalence_examples() {
        let th = Thresholds::default();
        for (a, z) in [
            (0.0, ComplexScalar::new(0.0, 0.0)),
            (1.0, ComplexScalar::new(0.0, 0.0)),
            (-1.0, ComplexScalar::new(0.3, 0.7)),
        ] {
            let p = RotationParams::new(a, 0.0);
            let x = weierstrass_equivalence(p, z, &th).unwrap();
            assert!((x - x_ab(p, z.re, z.im)).norm() <= 1e-12);
        }
        let x = weierstrass_equivalence(RotationParams::new(0.0, 0.0), ComplexScalar::new(0.0, 0.0), &th).unwrap();
        assert!((x - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn area_element_examples() {
        let sphere = RotationParams::new(0.0, 0.0);
        assert!(close(area_element(sphere, 0.0), 1.0, 1e-7));
        assert!(signed_area_element(sphere, 0.0) > 0.0);
        let p = RotationParams::new(1.0, 0.0);
        let root = 0.5 * (2.0 + 5f64.sqrt()).ln();
        assert!(area_element(p, root).abs() < 1e-12);
        assert!(signed_area_element(p, root - 0.01) * signed_area_element(p, root + 0.01) < 0.0);
    }

    #[test]
    fn printed_area_vanishes_on_the_sphere() {
        for u1 in [-1.0, 0.0, 2.0] {
            assert_eq!(printed_area_element(RotationParams::new(0.0, 0.3), u1), 0.0);
            assert!(area_element(RotationParams::new(0.0, 0.3), u1) > 0.0);
        }
    }

    #[test]
    fn sphere_has_no_singular_parallel() {
        let set = singular_u1(RotationParams::new(0.0, 0.0), (-3.0, 3.0));
        assert!(set.roots.is_empty());
        assert!(set.candidates.iter().all(|c| !c.applies && c.u1.is_none()));
    }

    #[test]
    fn a_equals_one() {
        let set = singular_u1(RotationParams::new(1.0, 0.0), (-3.0, 3.0));
        assert!(!set.roots.is_empty());
        for r in &set.roots {
            assert!(r.certified, "{r:?}");
            assert!(r.interval <= ROOT_INTERVAL);
        }
        let first = &set.candidates[0];
        assert!(first.applies);
        assert!(close(first.u1.unwrap(), 0.5 * (2.0 + 5f64.sqrt()).ln(), 1e-15));
    }

    #[test]
    fn empty_range() {
        assert!(singular_u1(RotationParams::new(1.0, 0.0), (1.0, 1.0)).roots.is_empty());
    }
}
