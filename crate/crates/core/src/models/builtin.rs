use std::sync::Arc;

use super::{BoxDomain, ModelError, ModelInstance, SmallGradient};
use crate::flow::{DegeneratePoint, Objective};
use crate::scalar::{euclidean, Real};

pub const BUILTIN_NAMES: [&str; 2] = ["default", "quadratic"];

/// `x^4 - (1 - 2y^2) x^2 + 1 + y^4` on `(0, 2] x [-2, 2]`.
struct Saddle<T> {
    domain: BoxDomain<T>,
}

impl<T: Real> Objective<T> for Saddle<T> {
    fn dim(&self) -> usize {
        2
    }

    fn value(&self, p: &[T]) -> T {
        let (x2, y2) = (p[0] * p[0], p[1] * p[1]);
        x2 * x2 - (T::one() - T::lit(2.0) * y2) * x2 + T::one() + y2 * y2
    }

    fn gradient(&self, p: &[T]) -> Vec<T> {
        let (x, y) = (p[0], p[1]);
        let two = T::lit(2.0);
        vec![
            two * x * (two * x * x - T::one() + two * y * y),
            T::lit(4.0) * y * (x * x + y * y),
        ]
    }

    fn contains(&self, x: &[T]) -> bool {
        self.domain.contains(x)
    }
}

/// Stratum `{x = 0}` with the saddle `(0, 0)` (f = 1) and interior minimum
/// `(1/sqrt 2, 0)` (f = 3/4). Restart from the saddle along `t -> (t, 0)`.
pub fn default_model<T: Real>() -> ModelInstance<T> {
    let two = T::lit(2.0);
    let domain = BoxDomain {
        lower: vec![T::zero(), -two],
        upper: vec![two, two],
        open_lower: vec![true, false],
    };
    let origin = vec![T::zero(), T::zero()];
    let xbar = vec![T::lit(0.5).sqrt(), T::zero()];
    let delta = euclidean(&origin, &xbar);
    ModelInstance {
        name: "default".into(),
        objective: Arc::new(Saddle { domain: domain.clone() }),
        domain,
        degenerate: vec![
            DegeneratePoint {
                point: origin,
                value: T::one(),
                terminal: false,
            },
            DegeneratePoint {
                point: xbar,
                value: T::lit(0.75),
                terminal: true,
            },
        ],
        restart_directions: vec![Some(vec![T::one(), T::zero()]), None],
        n_points: 1,
        delta,
        floor: T::lit(0.75),
        epsilon: T::lit(0.3),
        small_gradient: SmallGradient::Uncertified,
        gradient_cap: None,
        properties: Vec::new(),
    }
}

struct SquaredNorm<T> {
    domain: BoxDomain<T>,
}

impl<T: Real> Objective<T> for SquaredNorm<T> {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn value(&self, x: &[T]) -> T {
        x.iter().map(|&v| v * v).sum()
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        x.iter().map(|&v| T::lit(2.0) * v).collect()
    }

    fn contains(&self, x: &[T]) -> bool {
        self.domain.contains(x)
    }
}

/// `|x|^2` on `[-2, 2]^dim` with `G = {0}`; `A(eps) = 2 eps` exactly.
pub fn quadratic_model<T: Real>(dim: usize) -> Result<ModelInstance<T>, ModelError> {
    if dim == 0 {
        return Err(ModelError::InvalidDimension);
    }
    let two = T::lit(2.0);
    let domain = BoxDomain::closed(vec![-two; dim], vec![two; dim]);
    Ok(ModelInstance {
        name: format!("quadratic:{dim}"),
        objective: Arc::new(SquaredNorm { domain: domain.clone() }),
        domain,
        degenerate: vec![DegeneratePoint {
            point: vec![T::zero(); dim],
            value: T::zero(),
            terminal: true,
        }],
        restart_directions: vec![None],
        n_points: 1,
        delta: T::one(),
        floor: T::zero(),
        epsilon: T::lit(0.1),
        small_gradient: SmallGradient::ClosedForm(Arc::new(|e: T| T::lit(2.0) * e)),
        gradient_cap: Some(T::lit(4.0) * T::from_count(dim).sqrt()),
        properties: Vec::new(),
    })
}

/// `default`, `quadratic` (dimension 1) or `quadratic:<dim>`.
pub fn builtin_model<T: Real>(name: &str) -> Result<ModelInstance<T>, ModelError> {
    match name {
        "default" => Ok(default_model()),
        "quadratic" => quadratic_model(1),
        _ => match name.strip_prefix("quadratic:").map(str::parse::<usize>) {
            Some(Ok(d)) => quadratic_model(d),
            _ => Err(ModelError::UnknownModel(name.to_string())),
        },
    }
}

/// `x0` on `logspace(-3, log10 1.8, 10)`, `y0` on `linspace(-1.8, 1.8, 10)`.
pub fn default_start_grid() -> Vec<[f64; 2]> {
    let lo = -3.0f64;
    let hi = 1.8f64.log10();
    let mut out = Vec::with_capacity(100);
    for i in 0..10 {
        let x = 10f64.powf(lo + (hi - lo) * i as f64 / 9.0);
        for j in 0..10 {
            out.push([x, -1.8 + 3.6 * j as f64 / 9.0]);
        }
    }
    out
}
