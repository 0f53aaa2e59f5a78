//! Seeded random holomorphic expressions for property checks.
//!
//! Trees are built so that they stay holomorphic and finite on the disk
//! `|z| <= SAMPLE_RADIUS`: divisions and logarithms only ever see `z`
//! shifted by a constant of modulus at least 2, and arguments of `exp`,
//! `sin` and `cos` are damped.

use rand::Rng;

use crate::expr::{eval_jet2, ComplexScalar, ExprNode, Func};
use crate::weierstrass::GeneratorPair;

/// Radius of the disk random evaluation points are drawn from.
pub const SAMPLE_RADIUS: f64 = 0.8;

fn small_constant<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> ExprNode {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    ExprNode::constant(r * theta.cos(), r * theta.sin())
}

/// `z + c` with `2 <= |c| <= 3`.
fn shifted_var<R: Rng + ?Sized>(rng: &mut R) -> ExprNode {
    let r = rng.gen_range(2.0..3.0);
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    ExprNode::add(ExprNode::Var, ExprNode::constant(r * theta.cos(), r * theta.sin()))
}

/// A random expression of at most `depth` nested operations.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> ExprNode {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) { ExprNode::Var } else { small_constant(rng, 1.5) };
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 | 1 => ExprNode::add(random_expr(rng, d), random_expr(rng, d)),
        2 => ExprNode::sub(random_expr(rng, d), random_expr(rng, d)),
        3 | 4 => ExprNode::mul(random_expr(rng, d), random_expr(rng, d)),
        5 => ExprNode::neg(random_expr(rng, d)),
        6 => ExprNode::powi(random_expr(rng, d), rng.gen_range(0..=3)),
        7 => {
            let damp = small_constant(rng, 0.8);
            ExprNode::call(Func::Exp, ExprNode::mul(damp, random_expr(rng, d)))
        }
        8 => {
            let func = if rng.gen_bool(0.5) { Func::Sin } else { Func::Cos };
            ExprNode::call(func, ExprNode::mul(small_constant(rng, 1.0), random_expr(rng, d)))
        }
        9 => ExprNode::div(random_expr(rng, d), shifted_var(rng)),
        _ => ExprNode::call(Func::Log, shifted_var(rng)),
    }
}

/// A random `f` paired with a random `g` whose derivative is not identically zero.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> GeneratorPair {
    let f = random_expr(rng, 3);
    let probe = ComplexScalar::new(0.31, -0.17);
    let g = loop {
        let g = random_expr(rng, 3);
        if eval_jet2(&g, probe).is_ok_and(|j| j.d1.norm() > 1e-3) {
            break g;
        }
    };
    GeneratorPair::new(f, g)
}

/// Uniform point in the sampling disk.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    let r = SAMPLE_RADIUS * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    ComplexScalar::from_polar(r, theta)
}

/// The three pairs drawn in the figures: `(z, z)`, `(z^2, z)`, `(z, z^2)`.
pub fn figure_pairs() -> [(&'static str, &'static str); 3] {
    [("z", "z"), ("z^2", "z"), ("z", "z^2")]
}
