//! Randomized invariants checked against independent closed forms.

use num_complex::Complex;
use proptest::prelude::*;
use surgeflow::annulus::{annulus_quad, harmonic_norm_bound};
use surgeflow::path_geometry::{excursion_length, PolyPath};
use surgeflow::schwarzian::*;
use surgeflow::surface_bounds::{collar_injectivity, collar_width};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn small_poly() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 2..6)
}

fn poly_map(tail: &[(f64, f64)]) -> AnalyticMap<f64> {
    let mut coeffs = vec![c(0.0, 0.0), c(1.0, 0.0)];
    for (k, &(re, im)) in tail.iter().enumerate() {
        coeffs.push(c(re, im) * 0.5f64.powi(k as i32));
    }
    AnalyticMap::from_series(PowerSeries::new(coeffs, DEFAULT_ORDER), 0.9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // post-composing with a Möbius map leaves the Schwarzian unchanged
    #[test]
    fn mobius_post_composition(tail in small_poly(), m in (-0.3f64..0.3, -0.3f64..0.3, 0.5f64..2.0), r in 0.0f64..0.4, th in 0.0f64..std::f64::consts::TAU) {
        let f = poly_map(&tail);
        let mob = AnalyticMap::mobius(c(m.2, 0.0), c(m.0, 0.3), c(m.1, -m.0), c(1.0, 0.0));
        let z = C::from_polar(r, th);
        let direct = schwarzian(&f, z).unwrap();
        let composed = schwarzian_of_jet(&compose_jet(&mob, &f, z).unwrap()).unwrap();
        prop_assert!((direct - composed).norm() <= 1e-9 * (1.0 + direct.norm()));
    }

    // S[f(a z)](z) = a^2 Sf(a z)
    #[test]
    fn dilation_scaling(tail in small_poly(), a in 0.2f64..1.0, r in 0.0f64..0.5, th in 0.0f64..std::f64::consts::TAU) {
        let f = poly_map(&tail);
        let z = C::from_polar(r, th);
        let inner = AnalyticMap::new(MapKind::Scale { factor: a });
        let lhs = schwarzian_of_jet(&compose_jet(&f, &inner, z).unwrap()).unwrap();
        let rhs = schwarzian(&f, z * a).unwrap() * (a * a);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn reversion_inverts(tail in small_poly()) {
        let f = poly_map(&tail).taylor().unwrap().truncate(24);
        let h = f.reversion().unwrap();
        let id = f.compose(&h).unwrap();
        for (k, a) in id.coeffs().iter().enumerate() {
            let want = if k == 1 { 1.0 } else { 0.0 };
            prop_assert!((a - c(want, 0.0)).norm() < 1e-9, "k = {} -> {}", k, a);
        }
    }

    // the excursion length ignores orientation and rigid motions
    #[test]
    fn excursion_invariance(
        verts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..8),
        z in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..4),
        eps in 0.01f64..0.3,
        shift in (-5.0f64..5.0, -5.0f64..5.0),
    ) {
        let v: Vec<Vec<f64>> = verts.iter().map(|&(x, y)| vec![x, y]).collect();
        let zs: Vec<Vec<f64>> = z.iter().map(|&(x, y)| vec![x, y]).collect();
        let p = PolyPath::new(v.clone()).unwrap();
        let base = excursion_length(&p, &zs, eps);
        prop_assert!(base >= -1e-12 && base <= p.length() + 1e-12);

        let rev = PolyPath::new(v.iter().rev().cloned().collect()).unwrap();
        prop_assert!((excursion_length(&rev, &zs, eps) - base).abs() < 1e-10);

        // swap coordinates (a reflection) and translate
        let mv = |q: &Vec<f64>| vec![q[1] + shift.0, q[0] + shift.1];
        let moved = PolyPath::new(v.iter().map(mv).collect()).unwrap();
        let mz: Vec<Vec<f64>> = zs.iter().map(mv).collect();
        prop_assert!((excursion_length(&moved, &mz, eps) - base).abs() < 1e-9);
    }

    #[test]
    fn collar_monotone(l in 0.01f64..1.7, t in 0.0f64..1.0) {
        let w = collar_width(l);
        prop_assert!(collar_width(l * 1.01) < w);
        let lo = collar_injectivity(l, t * w * 0.5).unwrap();
        let hi = collar_injectivity(l, t * w * 0.5 + w * 0.5).unwrap();
        prop_assert!(lo <= hi && lo >= l / 2.0 - 1e-15);
    }
}

#[test]
fn exp_map_has_constant_schwarzian() {
    // f = e^z - 1: f''/f' = 1, so S = -1/2
    let f = AnalyticMap::new(MapKind::Exp);
    for z in [c(0.0, 0.0), c(0.3, -0.2), c(-0.5, 0.5)] {
        assert!((schwarzian(&f, z).unwrap() - c(-0.5, 0.0)).norm() < 1e-13);
    }
}

#[test]
fn harmonic_norm_scales_with_coefficient_and_modulus() {
    let q = annulus_quad();
    let base = harmonic_norm_bound(&[(c(1.0, 0.0), 1.0)], &q).unwrap();
    let h = harmonic_norm_bound(&[(c(0.6, 0.8), 2.0), (c(0.0, 2.0), 0.5)], &q).unwrap();
    // |c|^2/m = 1/2 + 8
    assert!((h.direct - 8.5 * base.direct).abs() < 1e-9 * h.direct);
    assert!((h.bound - 8.5 * base.bound).abs() < 1e-12 * h.bound);
}
