use rt_core::corpus::figure_pairs;
use rt_core::oracle::check_point;
use rt_core::{ComplexScalar, GeneratorPair, Thresholds};

#[test]
fn oracle_agrees_on_figure_pairs() {
    let th = Thresholds::default();
    for (f, g) in figure_pairs() {
        let gen = GeneratorPair::parse(f, g).unwrap();
        let mut checked = 0;
        for i in 0..9 {
            for j in 0..9 {
                let z = ComplexScalar::new(-0.4 + 0.1 * i as f64, -0.4 + 0.1 * j as f64);
                // g = z^2 has a branch point of the Gauss map at the origin
                let Ok((_, _, dev)) = check_point(&gen, z, 1e-4, &th) else { continue };
                assert!(dev.max() <= 1e-5, "({f}, {g}) at {z}: {dev:?}");
                checked += 1;
            }
        }
        assert!(checked >= 80, "({f}, {g}): only {checked} regular points");
    }
}
