use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::{ComplexScalar, ExprNode, Func};

/// Value, first and second complex derivative of a holomorphic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: ComplexScalar,
    pub d1: ComplexScalar,
    pub d2: ComplexScalar,
}

impl Jet2 {
    pub fn new(v: ComplexScalar, d1: ComplexScalar, d2: ComplexScalar) -> Self {
        Jet2 { v, d1, d2 }
    }

    pub fn constant(v: ComplexScalar) -> Self {
        let zero = ComplexScalar::new(0.0, 0.0);
        Jet2 { v, d1: zero, d2: zero }
    }

    /// The identity function seeded at `z`.
    pub fn variable(z: ComplexScalar) -> Self {
        Jet2 { v: z, d1: ComplexScalar::new(1.0, 0.0), d2: ComplexScalar::new(0.0, 0.0) }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn scale(self, a: ComplexScalar) -> Self {
        Jet2 { v: a * self.v, d1: a * self.d1, d2: a * self.d2 }
    }

    /// Outer function `phi` applied to this jet, given `phi(v)`, `phi'(v)`, `phi''(v)`.
    fn compose(self, phi: ComplexScalar, dphi: ComplexScalar, ddphi: ComplexScalar) -> Self {
        Jet2 { v: phi, d1: dphi * self.d1, d2: ddphi * self.d1 * self.d1 + dphi * self.d2 }
    }

    fn recip(self) -> Self {
        let r = self.v.inv();
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    fn powi(self, k: i32) -> Self {
        match k {
            0 => Jet2::constant(ComplexScalar::new(1.0, 0.0)),
            1 => self,
            _ => {
                // v^(k-2) is finite here: either k >= 2 or v != 0.
                let kf = k as f64;
                let pm2 = self.v.powi(k - 2);
                let pm1 = pm2 * self.v;
                self.compose(pm1 * self.v, kf * pm1, kf * (kf - 1.0) * pm2)
            }
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogOfZero,
    /// Overflow or an otherwise non-finite intermediate.
    NonFinite,
}

/// Evaluation failure, carrying the printed subexpression where it happened.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind:?} in `{subexpr}`")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subexpr: String,
}

impl EvalError {
    fn at(kind: EvalErrorKind, e: &ExprNode) -> Self {
        EvalError { kind, subexpr: e.to_string() }
    }
}

/// Evaluate `e` and its first two derivatives at `z` by forward jet arithmetic.
///
/// Poles and the branch point of `log` are reported as errors rather than
/// producing infinities.
pub fn eval_jet2(e: &ExprNode, z: ComplexScalar) -> Result<Jet2, EvalError> {
    let zero = ComplexScalar::new(0.0, 0.0);
    let j = match e {
        ExprNode::Const(c) => Jet2::constant(*c),
        ExprNode::Var => Jet2::variable(z),
        ExprNode::Add(a, b) => eval_jet2(a, z)? + eval_jet2(b, z)?,
        ExprNode::Sub(a, b) => eval_jet2(a, z)? - eval_jet2(b, z)?,
        ExprNode::Mul(a, b) => eval_jet2(a, z)? * eval_jet2(b, z)?,
        ExprNode::Div(a, b) => {
            let num = eval_jet2(a, z)?;
            let den = eval_jet2(b, z)?;
            if den.v == zero {
                return Err(EvalError::at(EvalErrorKind::DivisionByZero, e));
            }
            num * den.recip()
        }
        ExprNode::Neg(a) => -eval_jet2(a, z)?,
        ExprNode::IntPow(a, k) => {
            let base = eval_jet2(a, z)?;
            if *k < 0 && base.v == zero {
                return Err(EvalError::at(EvalErrorKind::DivisionByZero, e));
            }
            base.powi(*k)
        }
        ExprNode::Call(func, a) => {
            let inner = eval_jet2(a, z)?;
            let v = inner.v;
            match func {
                Func::Exp => {
                    let ev = v.exp();
                    inner.compose(ev, ev, ev)
                }
                Func::Log => {
                    if v == zero {
                        return Err(EvalError::at(EvalErrorKind::LogOfZero, e));
                    }
                    let r = v.inv();
                    inner.compose(v.ln(), r, -r * r)
                }
                Func::Sin => {
                    let (s, c) = (v.sin(), v.cos());
                    inner.compose(s, c, -s)
                }
                Func::Cos => {
                    let (s, c) = (v.sin(), v.cos());
                    inner.compose(c, -s, -c)
                }
            }
        }
    };
    if !j.is_finite() {
        return Err(EvalError::at(EvalErrorKind::NonFinite, e));
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn jet(s: &str, z: ComplexScalar) -> Jet2 {
        eval_jet2(&parse(s).unwrap(), z).unwrap()
    }

    #[test]
    fn square_at_one_plus_i() {
        let j = jet("z^2", c(1.0, 1.0));
        assert_eq!(j.v, c(0.0, 2.0));
        assert_eq!(j.d1, c(2.0, 2.0));
        assert_eq!(j.d2, c(2.0, 0.0));
    }

    #[test]
    fn exp_at_zero() {
        let j = jet("exp(z)", c(0.0, 0.0));
        assert_eq!((j.v, j.d1, j.d2), (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let j = jet("3", c(0.7, -2.0));
        assert_eq!((j.v, j.d1, j.d2), (c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn low_powers_at_zero_are_finite() {
        let j = jet("z^0 + z^1 + z^2 + z^3", c(0.0, 0.0));
        assert_eq!((j.v, j.d1, j.d2), (c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)));
    }

    #[test]
    fn closed_form_derivatives() {
        let z = c(0.3, -0.8);
        let close = |a: ComplexScalar, b: ComplexScalar| (a - b).norm() <= 1e-13 * (1.0 + b.norm());

        let j = jet("1/z", z);
        assert!(close(j.d1, -1.0 / (z * z)));
        assert!(close(j.d2, 2.0 / (z * z * z)));

        let j = jet("log(z)", z);
        assert!(close(j.v, z.ln()));
        assert!(close(j.d1, 1.0 / z));
        assert!(close(j.d2, -1.0 / (z * z)));

        let j = jet("sin(2*z)", z);
        assert!(close(j.d1, 2.0 * (2.0 * z).cos()));
        assert!(close(j.d2, -4.0 * (2.0 * z).sin()));

        let j = jet("cos(z)", z);
        assert!(close(j.d1, -z.sin()));
        assert!(close(j.d2, -z.cos()));

        let j = jet("z^-3", z);
        assert!(close(j.d1, -3.0 * z.powi(-4)));
        assert!(close(j.d2, 12.0 * z.powi(-5)));

        let j = jet("exp(z^2)", z);
        let ez = (z * z).exp();
        assert!(close(j.d1, 2.0 * z * ez));
        assert!(close(j.d2, (2.0 + 4.0 * z * z) * ez));
    }

    #[test]
    fn poles_and_branch_points_fail_loudly() {
        let zero = c(0.0, 0.0);
        let err = eval_jet2(&parse("1 + 1/z").unwrap(), zero).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);
        assert_eq!(err.subexpr, "(1.0/z)");

        let err = eval_jet2(&parse("log(z-1)").unwrap(), c(1.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::LogOfZero);
        assert_eq!(err.subexpr, "log((z-1.0))");

        let err = eval_jet2(&parse("z^-2").unwrap(), zero).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);

        let err = eval_jet2(&parse("exp(exp(z))").unwrap(), c(10.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::NonFinite);
    }
}
