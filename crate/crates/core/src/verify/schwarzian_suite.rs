use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{worst, Check};
use crate::schwarzian::*;

type C = Complex<f64>;

fn disk_point(rng: &mut ChaCha8Rng, r: f64) -> C {
    C::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn unit(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

// Cubic-to-sextic polynomial with f(0) = 0, f'(0) near 1 and small higher terms.
fn random_poly(rng: &mut ChaCha8Rng) -> PowerSeries<f64> {
    let deg = rng.gen_range(3..=6);
    let mut c = vec![C::new(0.0, 0.0), C::new(1.0, 0.0) + unit(rng) * 0.2];
    for k in 2..=deg {
        c.push(unit(rng) * 0.3f64.powi(k - 1));
    }
    PowerSeries::new(c, DEFAULT_ORDER)
}

pub(super) fn run(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut checks = Vec::new();

    // Möbius maps with the pole outside |z| <= 2
    let mob: Vec<f64> = (0..100)
        .map(|_| {
            let (a, b) = (unit(rng) + 1.5, unit(rng));
            let d = C::new(1.0, 0.0) + unit(rng) * 0.2;
            let c = unit(rng) * 0.3;
            let z = disk_point(rng, 0.95);
            schwarzian(&AnalyticMap::mobius(a, b, c, d), z).map_or(f64::NAN, |s| s.norm())
        })
        .collect();
    checks.push(Check::at_most(
        "mobius_vanishes",
        worst(mob),
        1e-12,
        "max |S(Mobius)| over 100 random (map, point) pairs",
    ));

    let comp: Vec<f64> = (0..50)
        .map(|_| {
            let f = AnalyticMap::from_series(random_poly(rng), 0.95);
            let g = AnalyticMap::from_series(random_poly(rng), 0.95);
            let z = disk_point(rng, 0.3);
            compose_rule_residual_series(&f, &g, z).unwrap_or(f64::NAN)
        })
        .collect();
    checks.push(Check::at_most(
        "composition_rule",
        worst(comp),
        1e-9,
        "max |S(f o g) - (Sf o g) g'^2 - Sg| over 50 random polynomial pairs",
    ));

    let zero = C::new(0.0, 0.0);
    let k = AnalyticMap::koebe();
    let sk = schwarzian(&k, zero).map_or(C::new(f64::NAN, 0.0), |s| s);
    checks.push(Check::at_most(
        "koebe_schwarzian",
        (sk - C::new(-6.0, 0.0)).norm(),
        1e-12,
        "|Sk(0) + 6|",
    ));
    let nk = pointwise_norm(&QuadDiffDisk::Schwarzian(k), zero).unwrap_or(f64::NAN);
    checks.push(Check::at_most(
        "koebe_norm",
        (nk - 1.5).abs(),
        1e-12,
        "| ||Sk(0)|| - 3/2 |",
    ));

    let zoo = builtin_zoo::<f64>();
    let neh: Vec<f64> = zoo
        .iter()
        .map(|e| {
            let f = e.map();
            match (schwarzian(&f, zero), nehari_coefficients(&f, 4)) {
                (Ok(s), Ok(n)) => (n.schwarzian_at_zero() - s).norm() / s.norm().max(1.0),
                _ => f64::NAN,
            }
        })
        .collect();
    checks.push(Check::at_most(
        "nehari_b1",
        worst(neh),
        1e-8,
        format!("max relative error of -6 b1 against Sf(0) over {} zoo maps", zoo.len()),
    ));

    let cfg = NormConfig::default();
    let kn: Vec<f64> = zoo
        .iter()
        .map(|e| lp_norm(&QuadDiffDisk::Schwarzian(e.map()), LpExponent::Inf, &cfg).map_or(f64::NAN, |r| r.value))
        .collect();
    checks.push(Check::at_most(
        "kraus_nehari",
        worst(kn),
        1.5 + 1e-6,
        format!("max sup norm of Sf on |z| <= {} over the zoo", cfg.radius),
    ));

    let bd: Vec<f64> = zoo
        .iter()
        .map(|e| match check_bigdisk(&e.map(), e.certified_radius.radius(), 0.0) {
            Ok(c) => c.norm_at_zero - c.bound,
            Err(_) => f64::NAN,
        })
        .collect();
    let bd_worst = bd
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) });
    checks.push(Check::at_most(
        "bigdisk",
        bd_worst,
        1e-12,
        "max ||Sf(0)|| - (3/2) sech(r/2) over (map, certified r) pairs",
    ));

    let aw: Vec<f64> = (0..100)
        .map(|i| {
            let t = i as f64 / 99.0 / 3.0;
            match ahlfors_weill_distance(t) {
                Ok(AhlforsWeill {
                    distance,
                    linear_bound: Some(b),
                }) => distance - b,
                _ => f64::NAN,
            }
        })
        .collect();
    let aw_worst = aw
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) });
    checks.push(Check::at_most(
        "ahlfors_weill",
        aw_worst,
        1e-15,
        "max distance(t) - 3t over 100 points of [0, 1/3]",
    ));
    checks
}
