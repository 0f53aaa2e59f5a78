use nalgebra::Vector3;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rt_core::corpus::{random_pair, random_point};
use rt_core::fd::{fd_gradient, fd_laplacian, fd_partials};
use rt_core::weierstrass::{christoffel, pairing, Thresholds};
use rt_core::{evaluate, ComplexScalar, GeneratorPair, SurfaceJet};

/// A random pair and point, or `None` where the surface is singular or `g'` vanishes.
fn sample(seed: u64) -> Option<(GeneratorPair, SurfaceJet)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let gen = random_pair(&mut rng);
    let z = random_point(&mut rng);
    match evaluate(&gen, z, &Thresholds::default()) {
        Ok(jet) => Some((gen, jet)),
        Err(e) if e.is_degenerate() => None,
        Err(e) => panic!("seed {seed}: {} / {} at {z}: {e}", gen.f, gen.g),
    }
}

/// Central-difference step for tangent vectors; positions can have large third
/// derivatives, so this is smaller than the default oracle step.
const TANGENT_STEP: f64 = 1e-6;

/// Largest relative deviation of `N_,i` from `sum_j W_ij X_,j`, both by central
/// differences, or `None` at singular points and where `V` is ill-conditioned.
fn weingarten_deviation(seed: u64) -> Option<f64> {
    let (gen, jet) = sample(seed)?;
    let w = jet.weingarten()?;
    // conditioning of V in the max norm
    if jet.v.abs().max() * w.abs().max() >= 1e4 {
        return None;
    }
    let z = |a: f64, b: f64| ComplexScalar::new(a, b);
    let xs = fd_partials(|a, b| gen.position(z(a, b), 1e-12).unwrap(), u(&jet), TANGENT_STEP);
    let ns = fd_partials(|a, b| gen.normal(z(a, b)).unwrap(), u(&jet), TANGENT_STEP);
    let dev = (0..2).map(|i| {
        let predicted: Vector3<f64> = xs[0] * w[(i, 0)] + xs[1] * w[(i, 1)];
        (predicted - ns[i]).norm() / ns[i].norm()
    });
    Some(dev.fold(0.0, f64::max))
}

fn complex<R: Rng>(rng: &mut R) -> ComplexScalar {
    ComplexScalar::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
}

fn u(jet: &SurfaceJet) -> (f64, f64) {
    (jet.z.re, jet.z.im)
}

/// Fixed seed and no regression files, so every run checks the same cases.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn rt_identity_holds(seed in any::<u64>()) {
        if let Some((_, jet)) = sample(seed) {
            prop_assert!(jet.normalized_residual() <= 1e-9, "{jet:?}");
        }
    }

    #[test]
    fn redundant_routes_agree(seed in any::<u64>()) {
        if let Some((_, jet)) = sample(seed) {
            prop_assert!(jet.checks.position <= 1e-10, "{:?}", jet.checks);
            prop_assert!(jet.checks.det_v <= 1e-10, "{:?}", jet.checks);
            prop_assert!(jet.checks.forms <= 1e-9, "{:?}", jet.checks);
            prop_assert!(jet.checks.regularity <= 1e-9, "{:?}", jet.checks);
        }
    }

    #[test]
    fn normal_is_unit_and_lambda_dominates(seed in any::<u64>()) {
        if let Some((_, jet)) = sample(seed) {
            prop_assert!((jet.normal.norm() - 1.0).abs() <= 1e-14);
            prop_assert!(jet.lambda >= jet.psi * jet.psi);
            prop_assert!((jet.lambda - jet.x.norm_squared()).abs() <= 1e-10 * jet.lambda);
            prop_assert!((jet.psi - jet.x.dot(&jet.normal)).abs() <= 1e-10 * jet.x.norm().max(jet.psi.abs()));
        }
    }

    #[test]
    fn pairing_moves_conjugate_factor(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (f, g, h) = (complex(&mut rng), complex(&mut rng), complex(&mut rng));
        let lhs = pairing(f * h, g);
        let rhs = pairing(f, h.conj() * g);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (f.norm() * g.norm() * h.norm()).max(1.0));
        prop_assert_eq!(pairing(f, g), pairing(g, f));
    }

    #[test]
    fn christoffel_symmetries(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gen = random_pair(&mut rng);
        let (_, gj) = gen.jets(random_point(&mut rng)).unwrap();
        if let Ok(gm) = christoffel(&gj, 1e-12) {
            let s = [gm.g1_11, gm.g2_22].iter().map(|x| x.abs()).fold(1.0, f64::max);
            prop_assert!((gm.g1_11 - gm.g2_12).abs() <= 1e-14 * s);
            prop_assert!((gm.g2_22 - gm.g1_12).abs() <= 1e-14 * s);
            prop_assert!((gm.g1_11 + gm.g1_22).abs() <= 1e-14 * s);
            prop_assert!((gm.g2_22 + gm.g2_11).abs() <= 1e-14 * s);
        }
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn tangent_vectors_are_normal_to_n(seed in any::<u64>()) {
        if let Some((gen, jet)) = sample(seed) {
            let pos = |a: f64, b: f64| gen.position(ComplexScalar::new(a, b), 1e-12).unwrap();
            for xi in fd_partials(pos, u(&jet), TANGENT_STEP) {
                prop_assert!(xi.dot(&jet.normal).abs() <= 1e-6 * xi.norm(), "{xi} vs {}", jet.normal);
            }
        }
    }

    #[test]
    fn log_support_is_harmonic(seed in any::<u64>()) {
        if let Some((gen, jet)) = sample(seed) {
            let log_h = |a: f64, b: f64| gen.f.eval(ComplexScalar::new(a, b)).unwrap().re;
            prop_assert!(fd_laplacian(log_h, u(&jet), 1e-4).abs() <= 1e-5);
            let grad = fd_gradient(log_h, u(&jet), 1e-6);
            prop_assert!((grad[0] - jet.fj.d1.re).abs() <= 1e-6 * jet.fj.d1.norm().max(1.0));
            prop_assert!((grad[1] + jet.fj.d1.im).abs() <= 1e-6 * jet.fj.d1.norm().max(1.0));
        }
    }

    #[test]
    fn weingarten_maps_tangents_to_normal_derivatives(seed in any::<u64>()) {
        if let Some(dev) = weingarten_deviation(seed) {
            prop_assert!(dev <= 1e-5, "seed {seed}: {dev:e}");
        }
    }
}

#[test]
fn weingarten_on_a_steep_sample() {
    // position with large third derivatives; needs the small tangent step
    let dev = weingarten_deviation(12492711674731176823).unwrap();
    assert!(dev <= 1e-5, "{dev:e}");
}

#[test]
fn most_random_samples_are_regular() {
    let regular = (0..1000u64).filter(|&s| sample(s).is_some()).count();
    assert!(regular >= 900, "{regular}");
}
