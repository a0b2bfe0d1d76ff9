use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{worst, Check};
use crate::surface_bounds::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub(super) fn run(rng: &mut ChaCha8Rng, inputs: &LedgerInputs<f64>) -> Vec<Check> {
    let mut checks = Vec::new();
    let ledgers: Vec<(u32, SurfaceTopology, ConstantsLedger<f64>)> = (2..=5)
        .filter_map(|g| {
            let topo = SurfaceTopology::closed(g).ok()?;
            let l = ConstantsLedger::new(*inputs, &topo).ok()?;
            Some((g, topo, l))
        })
        .collect();
    checks.push(Check::flag(
        "ledger_builds",
        ledgers.len() == 4,
        "ledger constructs for closed genus 2..5",
    ));
    if ledgers.len() != 4 {
        return checks;
    }

    let s2 = std::f64::consts::SQRT_2;
    let c0 = s2 * (inputs.c_drill + 1.0);
    let c1 = 9.0 * s2 * (c0 + 1.0);
    let k0 = 1.0 / (4.0 * (3.0 * std::f64::consts::PI).sqrt() * c1);
    let l = &ledgers[0].2;
    let err = worst([
        rel(l.c0, c0),
        rel(l.c1, c1),
        rel(l.k0, k0),
        rel(l.delta, inputs.delta0 / 2.0),
    ]);
    checks.push(Check::at_most(
        "constants_recomputed",
        err,
        4.0 * f64::EPSILON,
        "max relative error of C0, C1, K0, delta",
    ));
    checks.push(Check::at_most(
        "c1_k0_identity",
        rel(l.c1 * l.k0, 1.0 / (4.0 * (3.0 * std::f64::consts::PI).sqrt())),
        4.0 * f64::EPSILON,
        "C1 K0 = 1 / (4 sqrt(3 pi))",
    ));

    let mut bad = 0;
    let mut total = 0;
    for (_, _, ledger) in &ledgers {
        for i in 1..=24 {
            let eps = ledger.eps0 * i as f64 / 24.0;
            total += 1;
            if !nearnode_chain(eps, ledger).is_ok_and(|c| c.holds()) {
                bad += 1;
            }
        }
    }
    checks.push(Check::none_failed(
        "nearnode_chain",
        bad,
        total,
        "genus 2..5, 24 epsilons in (0, eps0]",
    ));

    const DRAWS: usize = 200;
    let mut bad = 0;
    for _ in 0..DRAWS {
        let (_, topo, ledger) = &ledgers[rng.gen_range(0..ledgers.len())];
        let n = topo.curve_count();
        let lam0 = rng.gen_range(0.1..0.95) * ledger.inputs.l_drill;
        let l2 = lam0.powf((2 * n + 3) as f64 / 2.0);
        let short = rng.gen_range(0..=n);
        let long = rng.gen_range(0..=4);
        let mut lengths: Vec<f64> = (0..short)
            .map(|_| lam0.powf(rng.gen_range(1.05..(2 * n + 5) as f64)))
            .collect();
        lengths.extend((0..long).map(|_| lam0 * rng.gen_range(1.1..6.0)));
        if !simplex_ok(&lengths, l2, topo, ledger) {
            bad += 1;
        }
    }
    checks.push(Check::none_failed(
        "drilling_simplex",
        bad,
        DRAWS,
        "k <= n, window empty, every smaller window occupied, tau = lengths at or below the cut",
    ));
    checks
}

fn simplex_ok(lengths: &[f64], l2: f64, topo: &SurfaceTopology, ledger: &ConstantsLedger<f64>) -> bool {
    let n = topo.curve_count();
    let Ok(s) = select_drilling_simplex(lengths, l2, topo, ledger) else {
        return false;
    };
    let window = |k: usize| (s.lambda.powi(2 * k as i32 + 3), s.lambda.powi(2 * k as i32 + 1));
    let occupied = |k: usize| {
        let (lo, hi) = window(k);
        lengths.iter().any(|&l| l > lo && l <= hi)
    };
    let tau: Vec<usize> = (0..lengths.len()).filter(|&i| lengths[i] <= window(s.k).0).collect();
    s.k <= n && !occupied(s.k) && (0..s.k).all(occupied) && s.tau == tau && s.l_cut == window(s.k).0
}
