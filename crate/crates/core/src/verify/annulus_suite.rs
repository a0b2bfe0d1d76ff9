use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{worst, Check};
use crate::annulus::*;

type C = Complex<f64>;

pub(super) fn run(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let quad = annulus_quad();
    let mut checks = Vec::new();

    let mut triv = Vec::new();
    for m in [0.5, 1.0, 2.0] {
        let a = StripAnnulus::new(m).expect("positive modulus");
        for _ in 0..20 {
            let phi = PeriodicQuadDiff::random(m, 5, 3, rng);
            let c = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            triv.push(triviality_residual(c, &a, &phi, &quad).unwrap_or(f64::NAN));
        }
    }
    checks.push(Check::at_most(
        "triviality",
        worst(triv),
        1e-9,
        "max |<phi, c mu_t> - <phi, 2c mu_h>| over 20 differentials at each m in {0.5, 1, 2}",
    ));

    let h = harmonic_norm_bound(&[(C::new(1.0, 0.0), 1.0)], &quad);
    let two_pi2 = 2.0 * std::f64::consts::PI.powi(2);
    let (hd, hb) = h.map_or((f64::NAN, f64::NAN), |h| {
        ((h.direct - two_pi2).abs(), (h.bound - two_pi2).abs())
    });
    checks.push(Check::at_most(
        "harmonic_norm_direct",
        hd,
        1e-8,
        "|direct - 2 pi^2| for c = 1, m = 1",
    ));
    checks.push(Check::at_most(
        "harmonic_norm_closed_form",
        hb,
        1e-12,
        "|closed form - 2 pi^2| for c = 1, m = 1",
    ));

    let mut sets: Vec<Vec<f64>> = vec![vec![1.0], vec![0.5, 2.0], vec![0.25, 1.0, 4.0]];
    for _ in 0..5 {
        let k = rng.gen_range(1..=6);
        sets.push((0..k).map(|_| rng.gen_range(0.05..10.0)).collect());
    }
    let wp: Vec<f64> = sets
        .iter()
        .map(|ms| wp_path_bound(ms).map_or(f64::NAN, |w| (w.quadrature - w.closed_form).abs() / w.closed_form))
        .collect();
    checks.push(Check::at_most(
        "wp_path_bound",
        worst(wp),
        1e-8,
        format!(
            "max relative |quadrature - 2 pi sqrt(sum 1/m)| over {} moduli sets",
            sets.len()
        ),
    ));

    // dyadic data keeps every product exact
    let mut bad = 0;
    let mut total = 0;
    for m in [0.5, 1.0, 2.0] {
        for (s1, s2) in [(2.0, 4.0), (0.5, 2.0), (0.25, 8.0), (4.0, 0.5)] {
            let f = CuspDeformation::with_scale(m, s1).expect("valid");
            let g = f.then(s2).expect("valid");
            let h = CuspDeformation::with_scale(m, s1 * s2).expect("valid");
            for y in [1.0, 1.25, 1.5, 2.0, 3.0, 5.5, 9.0, 17.0] {
                let z = C::new(0.375, y);
                total += 1;
                if g.apply(f.apply(z)) != h.apply(z) || g.image_modulus() != h.image_modulus() {
                    bad += 1;
                }
            }
        }
    }
    checks.push(Check::none_failed(
        "cusp_semigroup",
        bad,
        total,
        "exact equality of composed and combined stretches",
    ));
    checks
}
