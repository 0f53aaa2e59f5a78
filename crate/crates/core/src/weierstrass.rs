//! Closed-form geometry of an RT-surface built from holomorphic data `(f, g)`.
//!
//! With `z = u1 + i u2`, the Gauss map is the inverse stereographic image of
//! `g`, the support function is `h = exp(Re f)`, and the immersion is
//! `X = grad_L h + h N` where `L` is the (conformal) third fundamental form.
//! Every quantity below is evaluated pointwise from the jets of `f` and `g`.
//!
//! Conventions:
//! - `<a, b> = Re(a conj(b))` is the real pairing on complex numbers.
//! - `T = 1 + |g|^2`, `L11 = L22 = 4|g'|^2 / T^2`.
//! - The second fundamental form is `II_ij = <X_,i, N_,j> = V_ij L_jj`, which is
//!   the negative of `<X_,ij, N>`. Mean curvature is `H = -(V11 + V22) / (2 det V)`
//!   and `K = 1 / det V`, so `H` agrees with `(E g - 2F f + G e) / (2 det I)`
//!   computed from `<X_,ij, N>`.

use nalgebra::{Matrix2, Vector3};
use thiserror::Error;

use crate::expr::{eval_jet2, parse, ComplexScalar, EvalError, ExprNode, Jet2, ParseError};
use crate::forms::{rel_dev, rel_dev_slice, FirstForm, SecondForm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("degenerate Gauss map: |g'| = {g_prime_abs:e}")]
    DegenerateGaussMap { g_prime_abs: f64 },
    #[error("singular point: |det V| = {det_v:e} below {threshold:e}")]
    SingularPoint { det_v: f64, threshold: f64 },
    /// `h^2 = exp(2 Re f)` overflows or underflows `f64`.
    #[error("support function out of range: Re f = {re_f}")]
    SupportOutOfRange { re_f: f64 },
    #[error("consistency check `{check}` failed: relative deviation {deviation:e} > {tolerance:e}")]
    Consistency { check: &'static str, deviation: f64, tolerance: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CoreError {
    /// The point is degenerate or singular, as opposed to an evaluation or consistency failure.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            CoreError::DegenerateGaussMap { .. }
                | CoreError::SingularPoint { .. }
                | CoreError::SupportOutOfRange { .. }
        )
    }
}

/// Degeneracy thresholds and internal consistency tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Minimum admissible `|g'|`.
    pub eps_g: f64,
    /// Minimum admissible `|det V| / h^2`.
    pub eps_det: f64,
    pub tol_det_v: f64,
    pub tol_position: f64,
    pub tol_forms: f64,
    pub tol_regularity: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            eps_g: 1e-12,
            eps_det: 1e-12,
            tol_det_v: 1e-10,
            tol_position: 1e-10,
            tol_forms: 1e-9,
            tol_regularity: 1e-9,
        }
    }
}

/// Weierstrass data: the holomorphic pair `(f, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    pub f: ExprNode,
    pub g: ExprNode,
}

impl GeneratorPair {
    pub fn new(f: ExprNode, g: ExprNode) -> Self {
        GeneratorPair { f, g }
    }

    pub fn parse(f: &str, g: &str) -> Result<Self, ParseError> {
        Ok(GeneratorPair { f: parse(f)?, g: parse(g)? })
    }

    pub fn jets(&self, z: ComplexScalar) -> Result<(Jet2, Jet2), EvalError> {
        Ok((eval_jet2(&self.f, z)?, eval_jet2(&self.g, z)?))
    }

    /// Immersion point via the closed form, without the other checks.
    pub fn position(&self, z: ComplexScalar, eps_g: f64) -> Result<Vector3<f64>, CoreError> {
        let (fj, gj) = self.jets(z)?;
        let t = conformal_t(&gj);
        position_closed(&fj, &gj, support(&fj), t, eps_g)
    }

    pub fn normal(&self, z: ComplexScalar) -> Result<Vector3<f64>, CoreError> {
        Ok(gauss_map(&eval_jet2(&self.g, z)?))
    }
}

/// The six Christoffel symbols of the conformal metric `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    /// Γ¹₁₁
    pub g1_11: f64,
    /// Γ²₂₂
    pub g2_22: f64,
    /// Γ²₁₁
    pub g2_11: f64,
    /// Γ¹₂₂
    pub g1_22: f64,
    /// Γ¹₁₂ = Γ¹₂₁
    pub g1_12: f64,
    /// Γ²₁₂ = Γ²₂₁
    pub g2_12: f64,
}

impl Christoffel {
    /// Γᵏᵢⱼ with 0-based indices.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        match (k, i.min(j), i.max(j)) {
            (0, 0, 0) => self.g1_11,
            (0, 0, 1) => self.g1_12,
            (0, 1, 1) => self.g1_22,
            (1, 0, 0) => self.g2_11,
            (1, 0, 1) => self.g2_12,
            (1, 1, 1) => self.g2_22,
            _ => panic!("Christoffel index out of range: ({k}, {i}, {j})"),
        }
    }
}

/// `V`, with `det V` both from the expanded closed form and as a direct determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VMatrix {
    pub v: Matrix2<f64>,
    pub det_closed: f64,
    pub det_direct: f64,
}

/// Sign convention for `A2` in the form coefficients.
///
/// `Plus` (`A2 = <1, i f'>^2 + <1, xi>`) is the one consistent with `V22` and
/// `II = V L`; `Minus` is kept only so the two can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A2Sign {
    Plus,
    Minus,
}

/// Every closed-form quantity at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceJet {
    pub z: ComplexScalar,
    pub fj: Jet2,
    pub gj: Jet2,
    /// Support function `exp(Re f)`.
    pub h: f64,
    /// `1 + |g|^2`
    pub t: f64,
    pub xi: ComplexScalar,
    pub normal: Vector3<f64>,
    /// `N_,1`, `N_,2`
    pub normal_derivs: [Vector3<f64>; 2],
    pub l11: f64,
    pub gamma: Christoffel,
    pub v: Matrix2<f64>,
    /// `det V` from the expanded closed form.
    pub det_v: f64,
    /// `det V` as `V11 V22 - V12^2`.
    pub det_v_direct: f64,
    /// Position from the closed form.
    pub x: Vector3<f64>,
    /// Position from `sum h_,j / L_jj N_,j + h N`.
    pub x_gradient: Vector3<f64>,
    pub first: FirstForm,
    pub second: SecondForm,
    pub mean: f64,
    pub gauss: f64,
    pub psi: f64,
    pub lambda: f64,
    pub residual: f64,
    /// `|2 Psi H| + |(Lambda + Psi^2) K|`
    pub residual_scale: f64,
    pub regularity: f64,
    pub checks: ConsistencyChecks,
}

impl SurfaceJet {
    pub fn normalized_residual(&self) -> f64 {
        self.residual.abs() / self.residual_scale.max(1e-30)
    }

    /// Weingarten matrix `W = V^-1`, with `N_,i = sum_j W_ij X_,j`.
    pub fn weingarten(&self) -> Option<Matrix2<f64>> {
        self.v.try_inverse()
    }
}

/// Relative deviations between the redundant routes, recorded per point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsistencyChecks {
    pub det_v: f64,
    pub position: f64,
    pub forms: f64,
    pub regularity: f64,
}

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);
const ONE: ComplexScalar = ComplexScalar::new(1.0, 0.0);

/// `<a, b> = a1 b1 + a2 b2 = Re(a conj(b))`.
pub fn pairing(a: ComplexScalar, b: ComplexScalar) -> f64 {
    a.re * b.re + a.im * b.im
}

pub fn conformal_t(gj: &Jet2) -> f64 {
    1.0 + gj.v.norm_sqr()
}

/// Gauss map `(2 Re g, 2 Im g, 1 - |g|^2) / (1 + |g|^2)`.
pub fn gauss_map(gj: &Jet2) -> Vector3<f64> {
    let g = gj.v;
    let t = conformal_t(gj);
    Vector3::new(2.0 * g.re, 2.0 * g.im, 1.0 - g.norm_sqr()) / t
}

/// `N_,1` and `N_,2` in closed form.
pub fn gauss_map_derivatives(gj: &Jet2) -> [Vector3<f64>; 2] {
    let (g, dg) = (gj.v, gj.d1);
    let t = conformal_t(gj);
    let k = 2.0 / (t * t);
    let n1_tan = t * dg - 2.0 * g * pairing(dg, g);
    let n1_z = -2.0 * pairing(dg, g);
    let n2_tan = t * I * dg - 2.0 * g * pairing(g, I * dg);
    let n2_z = -2.0 * pairing(g, I * dg);
    [Vector3::new(n1_tan.re, n1_tan.im, n1_z) * k, Vector3::new(n2_tan.re, n2_tan.im, n2_z) * k]
}

fn check_g_prime(gj: &Jet2, eps_g: f64) -> Result<f64, CoreError> {
    let abs = gj.d1.norm();
    if abs < eps_g {
        return Err(CoreError::DegenerateGaussMap { g_prime_abs: abs });
    }
    Ok(gj.d1.norm_sqr())
}

/// Conformal factor of the third fundamental form, `4|g'|^2 / T^2`.
pub fn third_form(gj: &Jet2, eps_g: f64) -> Result<f64, CoreError> {
    let dg2 = check_g_prime(gj, eps_g)?;
    let t = conformal_t(gj);
    Ok(4.0 * dg2 / (t * t))
}

/// Christoffel symbols of `L` in terms of `g`.
pub fn christoffel(gj: &Jet2, eps_g: f64) -> Result<Christoffel, CoreError> {
    let dg2 = check_g_prime(gj, eps_g)?;
    let (g, dg, ddg) = (gj.v, gj.d1, gj.d2);
    let t = conformal_t(gj);
    let denom = t * dg2;
    let a = pairing(dg, ddg);
    let b = pairing(g, dg);
    let ai = pairing(dg, I * ddg);
    let bi = pairing(g, I * dg);
    let g1_11 = (t * a - 2.0 * dg2 * b) / denom;
    let g2_22 = (t * ai - 2.0 * dg2 * bi) / denom;
    Ok(Christoffel {
        g1_11,
        g2_22,
        g2_11: (2.0 * dg2 * bi - t * ai) / denom,
        g1_22: (2.0 * dg2 * b - t * a) / denom,
        g1_12: g2_22,
        g2_12: g1_11,
    })
}

/// `xi = f' (g''/g' - (2/T) g' conj(g)) - f''`.
pub fn xi(fj: &Jet2, gj: &Jet2, t: f64, eps_g: f64) -> Result<ComplexScalar, CoreError> {
    check_g_prime(gj, eps_g)?;
    Ok(fj.d1 * (gj.d2 / gj.d1 - (2.0 / t) * gj.d1 * gj.v.conj()) - fj.d2)
}

/// Support function `h = exp(<1, f>)`.
pub fn support(fj: &Jet2) -> f64 {
    fj.v.re.exp()
}

/// `(h_,1, h_,2) = h (<1, f'>, <1, i f'>)`.
pub fn support_gradient(fj: &Jet2, h: f64) -> [f64; 2] {
    [h * pairing(ONE, fj.d1), h * pairing(ONE, I * fj.d1)]
}

/// Hessian of `h` in the flat coordinates `(u1, u2)`.
pub fn support_hessian(fj: &Jet2, h: f64) -> Matrix2<f64> {
    let p = pairing(ONE, fj.d1);
    let q = pairing(ONE, I * fj.d1);
    let r = pairing(ONE, fj.d2);
    let h12 = h * (q * p + pairing(ONE, I * fj.d2));
    Matrix2::new(h * (p * p + r), h12, h12, h * (q * q - r))
}

/// `V` and both evaluations of `det V`.
pub fn v_matrix(
    fj: &Jet2,
    gj: &Jet2,
    h: f64,
    t: f64,
    xi: ComplexScalar,
    th: &Thresholds,
) -> Result<VMatrix, CoreError> {
    let dg2 = check_g_prime(gj, th.eps_g)?;
    let df = fj.d1;
    let scale = t * t * h / (4.0 * dg2);
    let p = pairing(ONE, df);
    let q = pairing(ONE, I * df);
    let re_xi = pairing(ONE, xi);
    let v11 = scale * (p * p - re_xi) + h;
    let v12 = scale * pairing(I, xi - df * df / 2.0);
    let v22 = scale * (q * q + re_xi) + h;
    let v = Matrix2::new(v11, v12, v12, v22);

    let t2 = t * t;
    let h2 = h * h;
    let det_closed =
        h2 * t2 * t2 / (16.0 * dg2 * dg2) * pairing(xi, df * df - xi) + h2 * t2 * df.norm_sqr() / (4.0 * dg2) + h2;
    let det_direct = v11 * v22 - v12 * v12;
    let deviation = rel_dev(det_closed, det_direct);
    if !(deviation <= th.tol_det_v) {
        return Err(CoreError::Consistency { check: "det V", deviation, tolerance: th.tol_det_v });
    }
    Ok(VMatrix { v, det_closed, det_direct })
}

/// `V_ij = (h_,ij - sum_k h_,k Γᵏᵢⱼ) / L_jj + h δ_ij`, the general
/// connection-based route to `V`.
pub fn v_matrix_from_connection(fj: &Jet2, h: f64, l11: f64, gamma: &Christoffel) -> Matrix2<f64> {
    let grad = support_gradient(fj, h);
    let hess = support_hessian(fj, h);
    Matrix2::from_fn(|i, j| {
        let conn: f64 = (0..2).map(|k| grad[k] * gamma.get(k, i, j)).sum();
        (hess[(i, j)] - conn) / l11 + if i == j { h } else { 0.0 }
    })
}

/// Immersion point from the closed form in `f`, `g`.
pub fn position_closed(fj: &Jet2, gj: &Jet2, h: f64, t: f64, eps_g: f64) -> Result<Vector3<f64>, CoreError> {
    let dg2 = check_g_prime(gj, eps_g)?;
    let (g, dg, df) = (gj.v, gj.d1, fj.d1);
    let k = h / (2.0 * dg2);
    let mixed = pairing(dg, g * df);
    let tangential = t * dg * df.conj() - 2.0 * g * mixed;
    let sphere = c(2.0 * g.re, 2.0 * g.im) / t;
    Ok(Vector3::new(
        k * tangential.re + h * sphere.re,
        k * tangential.im + h * sphere.im,
        k * (-2.0 * mixed) + h * (2.0 - t) / t,
    ))
}

/// Immersion point as `sum_j h_,j / L_jj N_,j + h N`.
pub fn position_gradient(
    fj: &Jet2,
    gj: &Jet2,
    h: f64,
    l11: f64,
    normal_derivs: &[Vector3<f64>; 2],
) -> Result<Vector3<f64>, CoreError> {
    if !(l11 > 0.0) {
        return Err(CoreError::DegenerateGaussMap { g_prime_abs: gj.d1.norm() });
    }
    let grad = support_gradient(fj, h);
    Ok(normal_derivs[0] * (grad[0] / l11) + normal_derivs[1] * (grad[1] / l11) + gauss_map(gj) * h)
}

/// Form coefficients from the explicit expressions in `f`, `g`.
pub fn form_coefficients(fj: &Jet2, h: f64, xi: ComplexScalar, l11: f64, sign: A2Sign) -> (FirstForm, SecondForm) {
    let df = fj.d1;
    // T^2 / (4 |g'|^2)
    let c = 1.0 / l11;
    let p = pairing(ONE, df);
    let q = pairing(ONE, I * df);
    let re_xi = pairing(ONE, xi);
    let a1 = p * p - re_xi;
    let a2 = match sign {
        A2Sign::Plus => q * q + re_xi,
        A2Sign::Minus => q * q - re_xi,
    };
    let b = pairing(I, xi - df * df / 2.0);
    let h2 = h * h;
    let first = FirstForm {
        e: h2 * (c * (a1 * a1 + b * b) + 2.0 * a1 + l11),
        f: h2 * (c * df.norm_sqr() + 2.0) * b,
        g: h2 * (c * (a2 * a2 + b * b) + 2.0 * a2 + l11),
    };
    let second = SecondForm { e: h * a1 + h * l11, f: h * b, g: h * a2 + h * l11 };
    (first, second)
}

/// `I = V L V^T` and `II = V L` for the conformal `L = l11 Id`.
pub fn forms_from_v(v: &Matrix2<f64>, l11: f64) -> (FirstForm, SecondForm) {
    let (v11, v12, v21, v22) = (v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]);
    let first = FirstForm {
        e: l11 * (v11 * v11 + v12 * v12),
        f: l11 * (v11 * v21 + v12 * v22),
        g: l11 * (v21 * v21 + v22 * v22),
    };
    let second = SecondForm { e: l11 * v11, f: l11 * v12, g: l11 * v22 };
    (first, second)
}

/// First and second fundamental forms, cross-checked against `V`.
pub fn fundamental_forms(
    fj: &Jet2,
    h: f64,
    xi: ComplexScalar,
    v: &Matrix2<f64>,
    l11: f64,
    tol: f64,
) -> Result<(FirstForm, SecondForm), CoreError> {
    let (first, second) = form_coefficients(fj, h, xi, l11, A2Sign::Plus);
    let (first_v, second_v) = forms_from_v(v, l11);
    let deviation = forms_deviation(&first, &second, &first_v, &second_v);
    if !(deviation <= tol) {
        return Err(CoreError::Consistency { check: "fundamental forms", deviation, tolerance: tol });
    }
    Ok((first, second))
}

/// Relative deviation between two `(I, II)` pairs, each form scaled by its own magnitude.
pub fn forms_deviation(a1: &FirstForm, a2: &SecondForm, b1: &FirstForm, b2: &SecondForm) -> f64 {
    rel_dev_slice(&a1.as_array(), &b1.as_array()).max(rel_dev_slice(&a2.as_array(), &b2.as_array()))
}

/// Mean and Gauss curvature `(H, K)` from `V`.
pub fn curvatures(v: &Matrix2<f64>, det_v: f64, h: f64, eps_det: f64) -> Result<(f64, f64), CoreError> {
    let threshold = eps_det * h * h;
    if !(det_v.abs() >= threshold) {
        return Err(CoreError::SingularPoint { det_v, threshold });
    }
    Ok((-(v[(0, 0)] + v[(1, 1)]) / (2.0 * det_v), 1.0 / det_v))
}

/// Support function `Psi` and quadratic distance `Lambda = |grad_L h|^2 + h^2`.
pub fn psi_lambda(fj: &Jet2, h: f64, l11: f64) -> (f64, f64) {
    let [h1, h2] = support_gradient(fj, h);
    (h, (h1 * h1 + h2 * h2) / l11 + h * h)
}

/// `2 Psi H + (Lambda + Psi^2) K`
pub fn rt_residual(psi: f64, lambda: f64, mean: f64, gauss: f64) -> f64 {
    2.0 * psi * mean + (lambda + psi * psi) * gauss
}

/// `T^4 <xi, f'^2 - xi> + 4 T^2 |f'|^2 |g'|^2 + 16 |g'|^4`, checked against `16 |g'|^4 det V / h^2`.
pub fn regularity(
    fj: &Jet2,
    gj: &Jet2,
    t: f64,
    xi: ComplexScalar,
    det_v: f64,
    h: f64,
    tol: f64,
) -> Result<(f64, f64), CoreError> {
    let df = fj.d1;
    let dg2 = gj.d1.norm_sqr();
    let t2 = t * t;
    let value = t2 * t2 * pairing(xi, df * df - xi) + 4.0 * t2 * df.norm_sqr() * dg2 + 16.0 * dg2 * dg2;
    let expected = 16.0 * dg2 * dg2 * det_v / (h * h);
    let deviation = rel_dev(value, expected);
    if !(deviation <= tol) {
        return Err(CoreError::Consistency { check: "regularity", deviation, tolerance: tol });
    }
    Ok((value, deviation))
}

/// Evaluate every closed-form quantity at `z`, running all internal checks.
pub fn evaluate(gen: &GeneratorPair, z: ComplexScalar, th: &Thresholds) -> Result<SurfaceJet, CoreError> {
    let (fj, gj) = gen.jets(z)?;
    evaluate_jets(z, fj, gj, th)
}

/// As [`evaluate`], from precomputed jets.
pub fn evaluate_jets(z: ComplexScalar, fj: Jet2, gj: Jet2, th: &Thresholds) -> Result<SurfaceJet, CoreError> {
    let t = conformal_t(&gj);
    let l11 = third_form(&gj, th.eps_g)?;
    let gamma = christoffel(&gj, th.eps_g)?;
    let xi = xi(&fj, &gj, t, th.eps_g)?;
    let h = support(&fj);
    if !(h * h).is_normal() {
        return Err(CoreError::SupportOutOfRange { re_f: fj.v.re });
    }
    let vm = v_matrix(&fj, &gj, h, t, xi, th)?;

    let normal = gauss_map(&gj);
    let normal_derivs = gauss_map_derivatives(&gj);
    let x = position_closed(&fj, &gj, h, t, th.eps_g)?;
    let x_gradient = position_gradient(&fj, &gj, h, l11, &normal_derivs)?;
    let position_dev = rel_dev_slice(x.as_slice(), x_gradient.as_slice());
    if !(position_dev <= th.tol_position) {
        return Err(CoreError::Consistency {
            check: "dual immersion",
            deviation: position_dev,
            tolerance: th.tol_position,
        });
    }

    let (first, second) = form_coefficients(&fj, h, xi, l11, A2Sign::Plus);
    let (first_v, second_v) = forms_from_v(&vm.v, l11);
    let forms_dev = forms_deviation(&first, &second, &first_v, &second_v);
    if !(forms_dev <= th.tol_forms) {
        return Err(CoreError::Consistency {
            check: "fundamental forms",
            deviation: forms_dev,
            tolerance: th.tol_forms,
        });
    }

    let (mean, gauss) = curvatures(&vm.v, vm.det_closed, h, th.eps_det)?;
    let (psi, lambda) = psi_lambda(&fj, h, l11);
    let residual = rt_residual(psi, lambda, mean, gauss);
    let residual_scale = (2.0 * psi * mean).abs() + ((lambda + psi * psi) * gauss).abs();
    let (regularity, regularity_dev) = regularity(&fj, &gj, t, xi, vm.det_direct, h, th.tol_regularity)?;

    Ok(SurfaceJet {
        z,
        fj,
        gj,
        h,
        t,
        xi,
        normal,
        normal_derivs,
        l11,
        gamma,
        v: vm.v,
        det_v: vm.det_closed,
        det_v_direct: vm.det_direct,
        x,
        x_gradient,
        first,
        second,
        mean,
        gauss,
        psi,
        lambda,
        residual,
        residual_scale,
        regularity,
        checks: ConsistencyChecks {
            det_v: rel_dev(vm.det_closed, vm.det_direct),
            position: position_dev,
            forms: forms_dev,
            regularity: regularity_dev,
        },
    })
}
