use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::{BoxDomain, ModelError, ModelInstance, SmallGradient};
use crate::flow::{DegeneratePoint, Objective};
use crate::scalar::Real;

/// Custom model description, deserializable from JSON or TOML.
///
/// ```toml
/// name = "saddle"
/// variables = ["x", "y"]
/// f = "x^4 - (1 - 2*y^2)*x^2 + 1 + y^4"
/// floor = 0.75
/// epsilon = 0.3
///
/// [domain]
/// lower = [0.0, -2.0]
/// upper = [2.0, 2.0]
/// open_lower = [true, false]
///
/// [separation]
/// n = 1
/// delta = 0.7071067811865476
///
/// [[degenerate]]
/// point = [0.0, 0.0]
/// restart_direction = [1.0, 0.0]
///
/// [[degenerate]]
/// point = [0.7071067811865476, 0.0]
/// ```
///
/// A degenerate point without `restart_direction` is the terminal one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub variables: Vec<String>,
    pub f: String,
    pub floor: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub gradient_cap: Option<f64>,
    pub domain: ManifestDomain,
    pub separation: ManifestSeparation,
    pub degenerate: Vec<ManifestDegenerate>,
}

fn default_epsilon() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default)]
    pub open_lower: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestSeparation {
    pub n: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDegenerate {
    pub point: Vec<f64>,
    #[serde(default)]
    pub restart_direction: Option<Vec<f64>>,
}

struct ExprObjective<T> {
    expr: Expr,
    domain: BoxDomain<T>,
}

impl<T: Real> Objective<T> for ExprObjective<T> {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn value(&self, x: &[T]) -> T {
        self.expr.eval(x)
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        self.expr.eval_grad(x).1
    }

    fn contains(&self, x: &[T]) -> bool {
        self.domain.contains(x)
    }
}

fn bad(msg: impl Into<String>) -> ModelError {
    ModelError::Manifest(msg.into())
}

impl Manifest {
    pub fn into_model<T: Real>(self) -> Result<ModelInstance<T>, ModelError> {
        let d = self.variables.len();
        if d == 0 {
            return Err(ModelError::InvalidDimension);
        }
        let lit = |v: &[f64]| v.iter().map(|&c| T::lit(c)).collect::<Vec<T>>();
        let dom = &self.domain;
        if dom.lower.len() != d || dom.upper.len() != d {
            return Err(bad(format!("domain bounds must have {d} entries")));
        }
        if dom.lower.iter().zip(&dom.upper).any(|(a, b)| !(a < b)) {
            return Err(bad("domain needs lower < upper on every axis"));
        }
        let open_lower = match dom.open_lower.len() {
            0 => vec![false; d],
            n if n == d => dom.open_lower.clone(),
            _ => return Err(bad(format!("open_lower must have {d} entries"))),
        };
        let domain = BoxDomain {
            lower: lit(&dom.lower),
            upper: lit(&dom.upper),
            open_lower,
        };
        let expr = Expr::parse(&self.f, &self.variables).map_err(|e| bad(format!("f: {e}")))?;
        if self.separation.n == 0 || !(self.separation.delta > 0.0) {
            return Err(bad("separation needs n >= 1 and delta > 0"));
        }
        if !(self.epsilon > 0.0) {
            return Err(bad("epsilon must be positive"));
        }
        let mut degenerate = Vec::new();
        let mut restart_directions = Vec::new();
        for g in &self.degenerate {
            if g.point.len() != d {
                return Err(bad(format!("degenerate point {:?} must have {d} entries", g.point)));
            }
            let point = lit(&g.point);
            let value = expr.eval(&point);
            match &g.restart_direction {
                Some(u) if u.len() != d || u.iter().all(|&c| c == 0.0) => {
                    return Err(bad(format!("restart direction {u:?} must be a nonzero {d}-vector")));
                }
                _ => {}
            }
            degenerate.push(DegeneratePoint {
                point,
                value,
                terminal: g.restart_direction.is_none(),
            });
            restart_directions.push(g.restart_direction.as_deref().map(lit));
        }
        if degenerate.iter().filter(|g| g.terminal).count() != 1 {
            return Err(bad("exactly one degenerate point must omit restart_direction"));
        }
        Ok(ModelInstance {
            name: self.name,
            objective: Arc::new(ExprObjective {
                expr,
                domain: domain.clone(),
            }),
            domain,
            degenerate,
            restart_directions,
            n_points: self.separation.n,
            delta: T::lit(self.separation.delta),
            floor: T::lit(self.floor),
            epsilon: T::lit(self.epsilon),
            small_gradient: SmallGradient::Uncertified,
            gradient_cap: self.gradient_cap.map(T::lit),
            properties: Vec::new(),
        })
    }
}
