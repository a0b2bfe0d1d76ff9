use rand_chacha::ChaCha8Rng;

use super::Check;
use crate::path_geometry::{check_cover, cover_decomposition, random_instance, verify_path_fraction};

pub(super) fn run(rng: &mut ChaCha8Rng) -> Vec<Check> {
    const COUNT: usize = 500;
    let mut fraction_bad = 0;
    let mut cover_bad = 0;
    let mut worst_margin = f64::INFINITY;
    let mut worst_jump = f64::NEG_INFINITY;
    for _ in 0..COUNT {
        let inst = random_instance(rng);
        match verify_path_fraction(&inst.path, &inst.set, inst.eps) {
            Ok(r) => {
                fraction_bad += usize::from(!r.holds);
                worst_margin = worst_margin.min(r.lhs - r.rhs);
            }
            Err(_) => fraction_bad += 1,
        }
        let steps = cover_decomposition(&inst.path, &inst.set.points, inst.eps);
        let c = check_cover(&inst.path, &inst.set.points, inst.eps, &steps);
        cover_bad += usize::from(!c.holds);
        worst_jump = worst_jump.max(c.worst_jump_excess);
    }
    vec![
        Check::none_failed(
            "path_fraction",
            fraction_bad,
            COUNT,
            format!("smallest margin lhs - rhs = {worst_margin:e}"),
        ),
        Check::none_failed(
            "cover_steps",
            cover_bad,
            COUNT,
            format!("steps within 2 eps and gap sum within the excursion; worst jump excess {worst_jump:e}"),
        ),
    ]
}
