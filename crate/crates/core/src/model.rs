//! Problem data, the running cost, and the first-integral diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the liquidation problem: sell `holdings` shares over
/// `[0, horizon]` minimising `int_0^T F(x, x') dt` with
///
/// ```text
/// F(x, y) = -gamma x y + eta (-y)^(k+1) + lambda sigma^2 x^2
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Permanent impact coefficient. Does not change the optimal path.
    pub gamma: f64,
    /// Temporary impact coefficient.
    pub eta: f64,
    /// Risk aversion.
    #[serde(rename = "lambda")]
    pub lam: f64,
    pub sigma: f64,
    /// Temporary impact exponent.
    pub k: f64,
    /// Initial holdings X.
    #[serde(rename = "X")]
    pub holdings: f64,
    /// Horizon T.
    #[serde(rename = "T")]
    pub horizon: f64,
}

impl ModelParams {
    /// `lambda = sigma = eta = X = T = 1`, `gamma = 0`.
    pub fn unit(k: f64) -> Self {
        Self { gamma: 0.0, eta: 1.0, lam: 1.0, sigma: 1.0, k, holdings: 1.0, horizon: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("eta", self.eta),
            ("lambda", self.lam),
            ("sigma", self.sigma),
            ("k", self.k),
            ("X", self.holdings),
            ("T", self.horizon),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value, reason: "must be positive and finite" });
            }
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                reason: "must be non-negative and finite",
            });
        }
        Ok(())
    }

    /// `lambda sigma^2 / (k eta)`, the coefficient of `x^2` in the
    /// first-order equation `v^(k+1) = v0^(k+1) + (lambda sigma^2/(k eta)) x^2`.
    pub fn risk_to_impact(&self) -> f64 {
        self.lam * self.sigma * self.sigma / (self.k * self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    /// Holdings.
    pub x: f64,
    /// Trading speed `-x'`.
    pub v: f64,
    /// `beltrami_constant(x, v) + k eta v0^(k+1)`; zero on an exact extremal.
    pub beltrami_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub params: ModelParams,
    pub v0: f64,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// Checks ordering and sign invariants: times strictly increasing from 0
    /// to T, holdings non-negative and non-increasing, speeds non-negative.
    pub fn new(params: ModelParams, v0: f64, points: Vec<TrajectoryPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InsufficientSamples { got: points.len(), need: 2 });
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first.t != 0.0 {
            return Err(Error::Domain { op: "Trajectory::new", name: "t[0]", value: first.t, reason: "must be 0" });
        }
        if last.t != params.horizon {
            return Err(Error::Domain {
                op: "Trajectory::new",
                name: "t[last]",
                value: last.t,
                reason: "must equal T",
            });
        }
        for w in points.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::Domain {
                    op: "Trajectory::new",
                    name: "t",
                    value: w[1].t,
                    reason: "must be strictly increasing",
                });
            }
            if w[1].x > w[0].x {
                return Err(Error::Domain {
                    op: "Trajectory::new",
                    name: "x",
                    value: w[1].x,
                    reason: "must be non-increasing",
                });
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.x >= 0.0) || !(p.v >= 0.0)) {
            return Err(Error::Domain {
                op: "Trajectory::new",
                name: "x/v",
                value: p.x.min(p.v),
                reason: "must be non-negative",
            });
        }
        Ok(Self { params, v0, points })
    }
}

/// Running cost `F(x, x')`. Only sell programs are modelled, so `xdot <= 0`.
pub fn impact_integrand(p: &ModelParams, x: f64, xdot: f64) -> Result<f64> {
    if xdot > 0.0 {
        return Err(Error::Domain { op: "impact_integrand", name: "xdot", value: xdot, reason: "must be <= 0" });
    }
    let v = -xdot;
    Ok(-p.gamma * x * xdot + p.eta * v.powf(p.k + 1.0) + p.lam * p.sigma * p.sigma * x * x)
}

/// `F - x' dF/dy` rewritten in terms of the speed `v = -x'`:
/// `lambda sigma^2 x^2 - k eta v^(k+1)`. Constant along an extremal, where it
/// equals `-k eta v0^(k+1)`.
pub fn beltrami_constant(p: &ModelParams, x: f64, v: f64) -> f64 {
    p.lam * p.sigma * p.sigma * x * x - p.k * p.eta * v.powf(p.k + 1.0)
}

/// Second derivative of `F` in its speed argument, `eta k (k+1) v^(k-1)`.
/// Positive values certify a minimiser. For `k < 1` at `v = 0` the value
/// diverges and `f64::INFINITY` is returned.
pub fn legendre_check(p: &ModelParams, v: f64) -> f64 {
    let k = p.k;
    if v == 0.0 && k < 1.0 {
        return f64::INFINITY;
    }
    p.eta * k * (k + 1.0) * v.powf(k - 1.0)
}

/// Composite Simpson weights on `n` uniformly spaced nodes, falling back to
/// the 3/8 rule on the last three intervals when the interval count is odd.
pub(crate) fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let intervals = n - 1;
    if intervals == 1 {
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return w;
    }
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if simpson_end < intervals {
        let s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    w
}

/// `int_0^T F(x, -v) dt` over a trajectory sampled on a uniform grid.
///
/// The permanent-impact term `-gamma x x'` is the derivative of
/// `-gamma x^2 / 2`, so it contributes exactly `gamma (x(0)^2 - x(T)^2) / 2`.
/// The temporary-impact and risk terms use composite Simpson on the samples.
pub fn cost_of_trajectory(traj: &Trajectory) -> Result<f64> {
    let n = traj.points.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { got: n, need: 3 });
    }
    let p = &traj.params;
    let first = traj.points[0];
    let last = traj.points[n - 1];
    let h = (last.t - first.t) / (n - 1) as f64;
    let weights = simpson_weights(n, h);
    let running_only = ModelParams { gamma: 0.0, ..*p };
    let running = traj
        .points
        .iter()
        .zip(weights)
        .try_fold(0.0, |acc, (pt, w)| Ok(acc + w * impact_integrand(&running_only, pt.x, -pt.v)?))?;
    Ok(running + 0.5 * p.gamma * (first.x * first.x - last.x * last.x))
}
