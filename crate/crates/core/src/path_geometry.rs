//! Excursion lengths of polylines in `R^d` relative to a separated point set.
//!
//! Neighborhoods are closed balls: a point at distance exactly `eps` from
//! some `z` counts as inside.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{euclidean, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("path needs at least one vertex")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{points} points exceed the brute-force cap of {cap}")]
    SizeLimit { points: usize, cap: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("point set is not ({n}, {delta})-separated")]
    NotSeparated { n: usize, delta: f64 },
}

/// Largest point set accepted by [`check_separation`].
pub const SEPARATION_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", try_from = "RawPath<T>")]
pub struct PolyPath<T> {
    vertices: Vec<Vec<T>>,
    #[serde(skip)]
    cumulative: Vec<T>,
}

impl<T: Real> PolyPath<T> {
    pub fn new(vertices: Vec<Vec<T>>) -> Result<Self, PathError> {
        let dim = vertices.first().ok_or(PathError::Empty)?.len();
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(PathError::Dimension {
                expected: dim,
                found: v.len(),
            });
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        for w in vertices.windows(2) {
            acc = acc + euclidean(&w[0], &w[1]);
            cumulative.push(acc);
        }
        Ok(Self { vertices, cumulative })
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn length(&self) -> T {
        *self.cumulative.last().unwrap_or(&T::zero())
    }

    pub fn segment_lengths(&self) -> Vec<T> {
        self.cumulative.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn end_distance(&self) -> T {
        euclidean(&self.vertices[0], self.vertices.last().expect("non-empty"))
    }

    /// Point at arc length `s`, clamped to `[0, length]`.
    pub fn point_at(&self, s: T) -> Vec<T> {
        let s = s.max(T::zero()).min(self.length());
        let i = match self.cumulative.iter().rposition(|&c| c <= s) {
            Some(i) if i + 1 < self.vertices.len() => i,
            _ => return self.vertices.last().expect("non-empty").clone(),
        };
        let seg = self.cumulative[i + 1] - self.cumulative[i];
        if seg <= T::zero() {
            return self.vertices[i].clone();
        }
        let t = (s - self.cumulative[i]) / seg;
        self.vertices[i]
            .iter()
            .zip(&self.vertices[i + 1])
            .map(|(&a, &b)| a + (b - a) * t)
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawPath<T> {
    vertices: Vec<Vec<T>>,
}

impl<T: Real> TryFrom<RawPath<T>> for PolyPath<T> {
    type Error = PathError;
    fn try_from(raw: RawPath<T>) -> Result<Self, PathError> {
        Self::new(raw.vertices)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SeparatedPointSet<T> {
    pub points: Vec<Vec<T>>,
    pub n: usize,
    pub delta: T,
}

impl<T: Real> SeparatedPointSet<T> {
    /// Builds the set after certifying the separation property.
    pub fn certified(points: Vec<Vec<T>>, n: usize, delta: T) -> Result<Self, PathError> {
        if !check_separation(&points, n, delta)? {
            return Err(PathError::NotSeparated {
                n,
                delta: delta.as_f64(),
            });
        }
        Ok(Self { points, n, delta })
    }
}

/// True iff every `(n + 1)`-subset of `points` contains two points at
/// distance `>= delta`, i.e. the graph joining points closer than `delta`
/// has no clique of size `n + 1`.
pub fn check_separation<T: Real>(points: &[Vec<T>], n: usize, delta: T) -> Result<bool, PathError> {
    if !(delta > T::zero()) || n == 0 {
        return Err(PathError::PreconditionViolated("need delta > 0 and N >= 1".into()));
    }
    if points.len() > SEPARATION_CAP {
        return Err(PathError::SizeLimit {
            points: points.len(),
            cap: SEPARATION_CAP,
        });
    }
    let m = points.len();
    if m <= n {
        return Ok(true);
    }
    let close: Vec<Vec<bool>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| i != j && euclidean(&points[i], &points[j]) < delta)
                .collect()
        })
        .collect();
    let all: Vec<usize> = (0..m).collect();
    Ok(!has_clique(&close, &all, 0, n + 1))
}

// Backtracking clique search with the size bound |clique| + |candidates|.
fn has_clique(close: &[Vec<bool>], candidates: &[usize], size: usize, target: usize) -> bool {
    if size >= target {
        return true;
    }
    if size + candidates.len() < target {
        return false;
    }
    for (idx, &v) in candidates.iter().enumerate() {
        if size + candidates.len() - idx < target {
            return false;
        }
        let next: Vec<usize> = candidates[idx + 1..].iter().copied().filter(|&u| close[v][u]).collect();
        if has_clique(close, &next, size + 1, target) {
            return true;
        }
    }
    false
}

/// Smallest diameter over `(n + 1)`-subsets: the largest `delta` for which
/// the set is `(n, delta)`-separated. `None` when there are at most `n` points.
pub fn separation_threshold<T: Real>(points: &[Vec<T>], n: usize) -> Result<Option<T>, PathError> {
    if points.len() <= n {
        return Ok(None);
    }
    let mut dists: Vec<T> = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            dists.push(euclidean(&points[i], &points[j]));
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    // Separated for delta iff no clique of close pairs; the threshold is the
    // smallest pairwise distance d with the set not separated at d + 0.
    for &d in &dists {
        let just_above = d + d.abs() * T::epsilon() * T::lit(4.0) + T::min_positive_value();
        if !check_separation(points, n, just_above)? {
            return Ok(Some(d));
        }
    }
    Ok(Some(*dists.last().expect("at least two points")))
}

// Parameter sub-intervals of a segment lying in the closed ball B(z, eps).
fn segment_ball<T: Real>(a: &[T], b: &[T], z: &[T], eps: T) -> Option<(T, T)> {
    let len = euclidean(a, b);
    if len <= T::zero() {
        return (euclidean(a, z) <= eps).then_some((T::zero(), T::zero()));
    }
    // |a + s u - z|^2 = eps^2 with u the unit direction, s in [0, len].
    let mut proj = T::zero();
    let mut dist2 = T::zero();
    for ((&ai, &bi), &zi) in a.iter().zip(b).zip(z) {
        let u = (bi - ai) / len;
        proj = proj + (zi - ai) * u;
        dist2 = dist2 + (ai - zi) * (ai - zi);
    }
    let perp2 = (dist2 - proj * proj).max(T::zero());
    let eps2 = eps * eps;
    if perp2 > eps2 {
        return None;
    }
    let half = (eps2 - perp2).sqrt();
    let lo = (proj - half).max(T::zero());
    let hi = (proj + half).min(len);
    (lo <= hi).then_some((lo, hi))
}

fn merge<T: Real>(mut v: Vec<(T, T)>) -> Vec<(T, T)> {
    v.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
    let mut out: Vec<(T, T)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Arc-length intervals where the path lies in the closed `eps`-ball about `z`.
pub fn ball_times<T: Real>(path: &PolyPath<T>, z: &[T], eps: T) -> Vec<(T, T)> {
    let v = path.vertices();
    let mut out = Vec::new();
    if v.len() == 1 {
        if euclidean(&v[0], z) <= eps {
            out.push((T::zero(), T::zero()));
        }
        return out;
    }
    for (i, w) in v.windows(2).enumerate() {
        if let Some((lo, hi)) = segment_ball(&w[0], &w[1], z, eps) {
            let base = path.cumulative[i];
            out.push((base + lo, base + hi));
        }
    }
    merge(out)
}

/// Length of the part of the path at distance `> eps` from every point of `z`.
pub fn excursion_length<T: Real>(path: &PolyPath<T>, z: &[Vec<T>], eps: T) -> T {
    let all: Vec<(T, T)> = z.iter().flat_map(|p| ball_times(path, p, eps)).collect();
    let covered: T = merge(all).iter().map(|(a, b)| *b - *a).sum();
    (path.length() - covered).max(T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverStep<T> {
    /// Index into the point set.
    pub z: usize,
    pub t_minus: T,
    pub t_plus: T,
}

/// Greedy decomposition: `t_i^-` is the first time after `t_{i-1}^+` the path
/// meets a ball, `z_i` a point whose ball contains it (latest exit on ties),
/// and `t_i^+` the last time the path is in that ball.
pub fn cover_decomposition<T: Real>(path: &PolyPath<T>, z: &[Vec<T>], eps: T) -> Vec<CoverStep<T>> {
    let times: Vec<Vec<(T, T)>> = z.iter().map(|p| ball_times(path, p, eps)).collect();
    let mut steps = Vec::new();
    let mut t_prev: Option<T> = None;
    loop {
        let mut best: Option<(usize, T, T)> = None;
        for (k, ints) in times.iter().enumerate() {
            let Some(&(_, sup)) = ints.last() else { continue };
            // first entry time strictly after t_prev (or from the start)
            let entry = match t_prev {
                None => ints[0].0,
                Some(t) => {
                    if sup <= t {
                        continue;
                    }
                    ints.iter()
                        .find(|(_, b)| *b > t)
                        .map(|(a, _)| a.max(t))
                        .expect("sup > t")
                }
            };
            let better = match best {
                None => true,
                Some((_, e, s)) => entry < e || (entry == e && sup > s),
            };
            if better {
                best = Some((k, entry, sup));
            }
        }
        match best {
            Some((k, t_minus, t_plus)) => {
                steps.push(CoverStep { z: k, t_minus, t_plus });
                t_prev = Some(t_plus);
            }
            None => return steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverCheck<T> {
    /// Largest `d(alpha(t_i^-), alpha(t_i^+)) - 2 eps` over steps (should be <= 0).
    pub worst_jump_excess: T,
    /// `sum d(alpha(t_{i-1}^+), alpha(t_i^-))` including the final stretch.
    pub gap_sum: T,
    pub excursion: T,
    pub holds: bool,
}

/// Checks the two inequalities satisfied by a cover decomposition.
pub fn check_cover<T: Real>(path: &PolyPath<T>, z: &[Vec<T>], eps: T, steps: &[CoverStep<T>]) -> CoverCheck<T> {
    let excursion = excursion_length(path, z, eps);
    let mut worst = -T::infinity();
    let mut gap_sum = T::zero();
    let mut prev = T::zero();
    for s in steps {
        let jump = euclidean(&path.point_at(s.t_minus), &path.point_at(s.t_plus));
        worst = worst.max(jump - (eps + eps));
        gap_sum = gap_sum + euclidean(&path.point_at(prev), &path.point_at(s.t_minus));
        prev = s.t_plus;
    }
    gap_sum = gap_sum + euclidean(&path.point_at(prev), &path.point_at(path.length()));
    if steps.is_empty() {
        worst = T::zero() - eps - eps;
    }
    let slack = T::lit(1e-12) * (T::one() + path.length());
    CoverCheck {
        worst_jump_excess: worst,
        gap_sum,
        excursion,
        holds: worst <= slack && gap_sum <= excursion + slack,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathFraction<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

/// `L_eps >= ((delta - 2N eps)/delta) (d(ends) - 2N eps)` for `eps < delta/(2N)`.
pub fn verify_path_fraction<T: Real>(
    path: &PolyPath<T>,
    set: &SeparatedPointSet<T>,
    eps: T,
) -> Result<PathFraction<T>, PathError> {
    let two_n_eps = T::lit(2.0) * T::from_count(set.n) * eps;
    if !(eps > T::zero() && two_n_eps < set.delta) {
        return Err(PathError::PreconditionViolated(format!(
            "need 0 < eps < delta/(2N); eps = {}, delta = {}, N = {}",
            eps.as_f64(),
            set.delta.as_f64(),
            set.n
        )));
    }
    let lhs = excursion_length(path, &set.points, eps);
    let rhs = (set.delta - two_n_eps) / set.delta * (path.end_distance() - two_n_eps);
    let slack = T::lit(1e-12) * (T::one() + path.length());
    Ok(PathFraction {
        lhs,
        rhs,
        holds: lhs >= rhs - slack,
    })
}

/// A self-contained path-fraction test case, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PathFractionInstance<T> {
    pub path: PolyPath<T>,
    pub set: SeparatedPointSet<T>,
    pub eps: T,
}

/// Random instance in the unit square. `delta` is a random fraction of the
/// exact separation threshold and `eps` a random fraction of `delta/(2N)`.
pub fn random_instance<R: Rng>(rng: &mut R) -> PathFractionInstance<f64> {
    loop {
        let k = rng.gen_range(2..=8);
        let n = rng.gen_range(1..k);
        let points: Vec<Vec<f64>> = (0..k).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let Ok(Some(threshold)) = separation_threshold(&points, n) else {
            continue;
        };
        if threshold <= 1e-6 {
            continue;
        }
        let delta = threshold * rng.gen_range(0.3..=1.0);
        let eps = delta / (2.0 * n as f64) * rng.gen_range(0.05..0.95);
        let nv = rng.gen_range(2..=10);
        let vertices: Vec<Vec<f64>> = (0..nv)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    // pass close to a point of the set
                    let p = &points[rng.gen_range(0..k)];
                    vec![
                        p[0] + rng.gen_range(-1.5..1.5) * eps,
                        p[1] + rng.gen_range(-1.5..1.5) * eps,
                    ]
                } else {
                    vec![rng.gen_range(-0.2..1.2), rng.gen_range(-0.2..1.2)]
                }
            })
            .collect();
        let path = PolyPath::new(vertices).expect("non-empty 2-d vertices");
        let set = SeparatedPointSet { points, n, delta };
        return PathFractionInstance { path, set, eps };
    }
}
