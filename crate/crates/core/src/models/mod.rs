//! Concrete flow problems with known critical points and strata, plus
//! sampling-based certification of the axioms the flow bounds rely on.

mod builtin;
pub mod expr;
mod manifest;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{DegeneratePoint, FlowProblem, Objective};
use crate::path_geometry::{check_separation, PathError};
use crate::scalar::{euclidean, norm, Real};

pub use builtin::{builtin_model, default_model, default_start_grid, quadratic_model, BUILTIN_NAMES};
pub use manifest::{Manifest, ManifestDegenerate, ManifestDomain, ManifestSeparation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("axiom ({item}) violated: {detail}")]
    AxiomViolation { item: String, detail: String },
    #[error(transparent)]
    Separation(#[from] PathError),
}

/// Axis-aligned box; the lower face is excluded along axes flagged open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BoxDomain<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub open_lower: Vec<bool>,
}

impl<T: Real> BoxDomain<T> {
    pub fn closed(lower: Vec<T>, upper: Vec<T>) -> Self {
        let open_lower = vec![false; lower.len()];
        Self {
            lower,
            upper,
            open_lower,
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && (0..x.len()).all(|i| {
                let lo_ok = if self.open_lower[i] {
                    x[i] > self.lower[i]
                } else {
                    x[i] >= self.lower[i]
                };
                lo_ok && x[i] <= self.upper[i]
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AEntry<T> {
    pub epsilon: T,
    /// Certified floor: safety factor times `sampled_min`.
    pub a: T,
    /// Smallest gradient norm found at distance `>= epsilon` from `G`.
    pub sampled_min: T,
    pub argmin: Vec<T>,
}

#[derive(Clone)]
pub enum SmallGradient<T> {
    ClosedForm(Arc<dyn Fn(T) -> T + Send + Sync>),
    /// Step function: the entry with the largest `epsilon <= eps`, else 0.
    Table(Vec<AEntry<T>>),
    Uncertified,
}

impl<T: Real> SmallGradient<T> {
    pub fn eval(&self, eps: T) -> T {
        match self {
            SmallGradient::ClosedForm(f) => f(eps),
            SmallGradient::Table(rows) => rows
                .iter()
                .filter(|r| r.epsilon <= eps)
                .max_by(|a, b| a.epsilon.partial_cmp(&b.epsilon).expect("finite"))
                .map_or(T::zero(), |r| r.a),
            SmallGradient::Uncertified => T::zero(),
        }
    }
}

#[derive(Clone)]
pub struct ModelInstance<T> {
    pub name: String,
    pub objective: Arc<dyn Objective<T>>,
    pub domain: BoxDomain<T>,
    pub degenerate: Vec<DegeneratePoint<T>>,
    /// Unit direction of the straight restart ray, per non-terminal `G`-point.
    pub restart_directions: Vec<Option<Vec<T>>>,
    pub n_points: usize,
    pub delta: T,
    /// Claimed lower bound for `f`.
    pub floor: T,
    /// Working neighborhood radius.
    pub epsilon: T,
    pub small_gradient: SmallGradient<T>,
    pub gradient_cap: Option<T>,
    pub properties: Vec<AxiomItem>,
}

/// Samples on a restart ray `z + t u`, `t in [0, eps/2]`.
pub const RESTART_SAMPLES: usize = 16;

fn restart_ray<T: Real>(z: &[T], u: &[T], eps: T) -> Vec<Vec<T>> {
    let len = norm(u);
    (0..=RESTART_SAMPLES)
        .map(|k| {
            let t = eps * T::lit(0.5) * T::from_count(k) / T::from_count(RESTART_SAMPLES);
            z.iter().zip(u).map(|(&zi, &ui)| zi + t * ui / len).collect()
        })
        .collect()
}

impl<T: Real> ModelInstance<T> {
    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// `ceil(log2 N)`, the exponent in the surgery count bound.
    pub fn count_exponent(&self) -> u32 {
        self.n_points.next_power_of_two().trailing_zeros()
    }

    pub fn restart_path(&self, index: usize, eps: T) -> Vec<Vec<T>> {
        match self.restart_directions.get(index) {
            Some(Some(u)) => restart_ray(&self.degenerate[index].point, u, eps),
            _ => Vec::new(),
        }
    }

    pub fn to_problem(&self) -> FlowProblem<T> {
        let sg = self.small_gradient.clone();
        let dirs = self.restart_directions.clone();
        let points: Vec<Vec<T>> = self.degenerate.iter().map(|g| g.point.clone()).collect();
        FlowProblem {
            objective: self.objective.clone(),
            degenerate: self.degenerate.clone(),
            n_points: self.n_points,
            delta: self.delta,
            small_gradient: Arc::new(move |e| sg.eval(e)),
            gradient_cap: self.gradient_cap.unwrap_or(T::infinity()),
            floor: self.floor,
            restart: Arc::new(move |i, e| match dirs.get(i) {
                Some(Some(u)) => restart_ray(&points[i], u, e),
                _ => Vec::new(),
            }),
        }
    }

    /// Runs [`validate_axioms`] and stores the certified `A(eps)` table and
    /// gradient cap.
    pub fn certified(mut self, cfg: &SamplingConfig<T>) -> Result<(Self, AxiomReport<T>), ModelError> {
        let report = validate_axioms(&self, cfg)?;
        if let Some(bad) = report.items.iter().find(|i| !i.passed) {
            return Err(ModelError::AxiomViolation {
                item: bad.id.clone(),
                detail: bad.detail.clone(),
            });
        }
        if !matches!(self.small_gradient, SmallGradient::ClosedForm(_)) {
            self.small_gradient = SmallGradient::Table(report.a_table.clone());
        }
        if self.gradient_cap.is_none() {
            self.gradient_cap = Some(report.gradient_cap);
        }
        self.properties = report.items.clone();
        Ok((self, report))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SamplingConfig<T> {
    /// Grid nodes per axis (capped so the grid has at most `max_points`).
    pub per_axis: usize,
    pub max_points: usize,
    pub epsilons: Vec<T>,
    /// `A(eps)` is this fraction of the sampled minimum.
    pub safety: T,
    /// Nodes per axis for the finite-difference gradient check.
    pub fd_per_axis: usize,
}

impl<T: Real> Default for SamplingConfig<T> {
    fn default() -> Self {
        Self {
            per_axis: 201,
            max_points: 1_000_000,
            epsilons: [0.05, 0.1, 0.15, 0.2, 0.25, 0.3].map(T::lit).to_vec(),
            safety: T::lit(0.9),
            fd_per_axis: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomItem {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

fn item(id: &str, passed: bool, detail: String) -> AxiomItem {
    AxiomItem {
        id: id.to_string(),
        passed,
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AxiomReport<T> {
    pub model: String,
    pub per_axis: usize,
    pub samples: usize,
    pub floor_sampled: T,
    pub gradient_max: T,
    pub gradient_cap: T,
    pub a_table: Vec<AEntry<T>>,
    pub items: Vec<AxiomItem>,
}

impl<T> AxiomReport<T> {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn grid<T: Real>(domain: &BoxDomain<T>, per_axis: usize) -> Vec<Vec<T>> {
    let d = domain.dim();
    let total = per_axis.pow(d as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut p = Vec::with_capacity(d);
        for i in 0..d {
            let k = idx % per_axis;
            idx /= per_axis;
            let s = T::from_count(k) / T::from_count(per_axis - 1);
            p.push(domain.lower[i] + (domain.upper[i] - domain.lower[i]) * s);
        }
        if domain.contains(&p) {
            out.push(p);
        }
    }
    out
}

// Compass search on |grad f| restricted to the domain minus the open eps-neighborhood of G.
fn polish_min<T: Real>(model: &ModelInstance<T>, start: &[T], eps: T, step: T) -> (Vec<T>, T) {
    let admissible =
        |x: &[T]| model.domain.contains(x) && model.degenerate.iter().all(|g| euclidean(x, &g.point) >= eps);
    let gn = |x: &[T]| norm(&model.objective.gradient(x));
    let mut x = start.to_vec();
    let mut best = gn(&x);
    let mut s = step;
    let mut iters = 0;
    while s > T::lit(1e-13) && iters < 2000 {
        iters += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [T::one(), -T::one()] {
                let mut y = x.clone();
                y[i] = y[i] + sign * s;
                if admissible(&y) {
                    let v = gn(&y);
                    if v < best {
                        best = v;
                        x = y;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            s = s * T::lit(0.5);
        }
    }
    (x, best)
}

/// Certifies by sampling: (a) the floor, (c) the gradient cap, (e-1) the
/// small-gradient table, (e-2) separation of `G`, (e-3) restart descent, and
/// the analytic gradient against central differences.
pub fn validate_axioms<T: Real>(
    model: &ModelInstance<T>,
    cfg: &SamplingConfig<T>,
) -> Result<AxiomReport<T>, ModelError> {
    let d = model.dim();
    let mut per_axis = cfg.per_axis.max(2);
    while per_axis > 2 && per_axis.saturating_pow(d as u32) > cfg.max_points {
        per_axis -= 1;
    }
    let pts = grid(&model.domain, per_axis);
    let obj = model.objective.as_ref();
    let vals: Vec<(T, T, T)> = pts
        .iter()
        .map(|p| {
            (obj.value(p), norm(&obj.gradient(p)), {
                model
                    .degenerate
                    .iter()
                    .map(|g| euclidean(p, &g.point))
                    .fold(T::infinity(), T::min)
            })
        })
        .collect();
    let mut items = Vec::new();

    let floor_sampled = vals.iter().map(|v| v.0).fold(T::infinity(), T::min);
    let tol = T::lit(1e-12) * (T::one() + model.floor.abs());
    items.push(item(
        "a",
        floor_sampled >= model.floor - tol,
        format!(
            "sampled min f = {:.6e}, claimed floor = {:.6e}",
            floor_sampled.as_f64(),
            model.floor.as_f64()
        ),
    ));

    let gradient_max = vals.iter().map(|v| v.1).fold(T::zero(), T::max);
    let (cap_ok, gradient_cap) = match model.gradient_cap {
        Some(c) => (gradient_max <= c, c),
        None => (gradient_max.is_finite(), gradient_max * T::lit(1.1)),
    };
    items.push(item(
        "c",
        cap_ok,
        format!(
            "sampled max |grad f| = {:.6e}, cap = {:.6e}",
            gradient_max.as_f64(),
            gradient_cap.as_f64()
        ),
    ));

    // gradient consistency on a coarse interior grid
    let mut fd_worst = T::zero();
    for p in grid(&model.domain, cfg.fd_per_axis.max(3)) {
        let g = obj.gradient(&p);
        for i in 0..d {
            let h = T::lit(1e-6) * (T::one() + p[i].abs());
            let mut a = p.clone();
            let mut b = p.clone();
            a[i] = a[i] + h;
            b[i] = b[i] - h;
            if !(model.domain.contains(&a) && model.domain.contains(&b)) {
                continue;
            }
            let fd = (obj.value(&a) - obj.value(&b)) / (h + h);
            fd_worst = fd_worst.max((fd - g[i]).abs() / g[i].abs().max(T::one()));
        }
    }
    items.push(item(
        "grad",
        fd_worst < T::lit(1e-6),
        format!("worst relative finite-difference error = {:.3e}", fd_worst.as_f64()),
    ));

    let step = (0..d)
        .map(|i| (model.domain.upper[i] - model.domain.lower[i]) / T::from_count(per_axis - 1))
        .fold(T::zero(), T::max);
    let mut a_table = Vec::new();
    let mut e1_ok = true;
    let mut e1_detail = Vec::new();
    for &eps in &cfg.epsilons {
        let best = pts
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.2 >= eps)
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite"));
        let Some((p, v)) = best else {
            e1_detail.push(format!("eps = {}: no samples outside N_eps(G)", eps.as_f64()));
            continue;
        };
        let (argmin, polished) = polish_min(model, p, eps, step);
        let sampled_min = v.1.min(polished);
        let floor_tol = T::lit(1e-6) * (T::one() + gradient_max);
        let mut ok = sampled_min > floor_tol;
        if let SmallGradient::ClosedForm(f) = &model.small_gradient {
            ok &= f(eps) <= sampled_min * (T::one() + T::lit(1e-9));
        }
        if !ok {
            e1_ok = false;
            e1_detail.push(format!(
                "eps = {}: |grad f| = {:.3e} at {:?}",
                eps.as_f64(),
                sampled_min.as_f64(),
                argmin.iter().map(|c| c.as_f64()).collect::<Vec<_>>()
            ));
        }
        let a = match &model.small_gradient {
            SmallGradient::ClosedForm(f) => f(eps),
            _ => cfg.safety * sampled_min,
        };
        a_table.push(AEntry {
            epsilon: eps,
            a,
            sampled_min,
            argmin,
        });
    }
    if e1_detail.is_empty() {
        e1_detail.push(format!("{} epsilon values", a_table.len()));
    }
    items.push(item("e-1", e1_ok && !a_table.is_empty(), e1_detail.join("; ")));

    let g_pts: Vec<Vec<T>> = model.degenerate.iter().map(|g| g.point.clone()).collect();
    let separated = check_separation(&g_pts, model.n_points, model.delta)?;
    items.push(item(
        "e-2",
        separated,
        format!(
            "|G| = {}, N = {}, delta = {:.6e}",
            g_pts.len(),
            model.n_points,
            model.delta.as_f64()
        ),
    ));

    let mut e3 = Vec::new();
    for (i, g) in model.degenerate.iter().enumerate() {
        if g.terminal {
            continue;
        }
        let path = model.restart_path(i, model.epsilon);
        let mut prev = g.value;
        let mut ok = path.len() >= 2 && (obj.value(&g.point) - g.value).abs() <= tol;
        for q in path.iter().skip(1) {
            let v = obj.value(q);
            ok &= model.domain.contains(q) && v < prev;
            prev = v;
        }
        if !ok {
            e3.push(i);
        }
    }
    items.push(item(
        "e-3",
        e3.is_empty(),
        if e3.is_empty() {
            "restart paths strictly descend".into()
        } else {
            format!("non-descending restart at G-points {e3:?}")
        },
    ));

    Ok(AxiomReport {
        model: model.name.clone(),
        per_axis,
        samples: pts.len(),
        floor_sampled,
        gradient_max,
        gradient_cap,
        a_table,
        items,
    })
}
