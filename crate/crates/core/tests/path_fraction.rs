use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surgeflow::path_geometry::*;
use surgeflow::scalar::euclidean;

// Exhaustive oracle: every (n+1)-subset has a pair at distance >= delta.
fn separated_bruteforce(points: &[Vec<f64>], n: usize, delta: f64) -> bool {
    (0..points.len()).combinations(n + 1).all(|s| {
        s.iter()
            .tuple_combinations()
            .any(|(&i, &j)| euclidean(&points[i], &points[j]) >= delta)
    })
}

// Excursion length by fine midpoint sampling.
fn excursion_sampled(path: &PolyPath<f64>, z: &[Vec<f64>], eps: f64, samples: usize) -> f64 {
    let l = path.length();
    let h = l / samples as f64;
    (0..samples)
        .filter(|&i| {
            let p = path.point_at((i as f64 + 0.5) * h);
            z.iter().all(|q| euclidean(&p, q) > eps)
        })
        .count() as f64
        * h
}

#[test]
fn separation_matches_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    use rand::Rng;
    for _ in 0..300 {
        let k = rng.gen_range(1..=9);
        let n = rng.gen_range(1..=4);
        let pts: Vec<Vec<f64>> = (0..k).map(|_| vec![rng.gen(), rng.gen()]).collect();
        let delta = rng.gen_range(0.05..1.0);
        assert_eq!(
            check_separation(&pts, n, delta).unwrap(),
            separated_bruteforce(&pts, n, delta)
        );
        if let Some(t) = separation_threshold(&pts, n).unwrap() {
            assert!(separated_bruteforce(&pts, n, t));
            assert!(!separated_bruteforce(&pts, n, t * (1.0 + 1e-9)));
        }
    }
}

#[test]
fn random_instances_satisfy_path_fraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let inst = random_instance(&mut rng);
        assert!(check_separation(&inst.set.points, inst.set.n, inst.set.delta).unwrap());
        let r = verify_path_fraction(&inst.path, &inst.set, inst.eps).unwrap();
        assert!(r.holds, "{r:?}");
        let steps = cover_decomposition(&inst.path, &inst.set.points, inst.eps);
        let c = check_cover(&inst.path, &inst.set.points, inst.eps, &steps);
        assert!(c.holds, "{c:?}");
        assert!(steps.iter().map(|s| s.z).all_unique());
    }
}

#[test]
fn excursion_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let inst = random_instance(&mut rng);
        let exact = excursion_length(&inst.path, &inst.set.points, inst.eps);
        let approx = excursion_sampled(&inst.path, &inst.set.points, inst.eps, 50_000);
        assert!(
            (exact - approx).abs() < 2e-3 * (1.0 + inst.path.length()),
            "{exact} vs {approx}"
        );
    }
}

#[test]
fn instance_json_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inst = random_instance(&mut rng);
    let s = serde_json::to_string(&inst).unwrap();
    let back: PathFractionInstance<f64> = serde_json::from_str(&s).unwrap();
    assert_eq!(back, inst);
    assert!(serde_json::from_str::<PolyPath<f64>>(r#"{"vertices":[]}"#).is_err());
}
