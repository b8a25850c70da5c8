//! Independent oracle: fixed-step RK4 on the first-order equation
//! `x' = -(v0^(k+1) + lambda sigma^2 x^2 / (k eta))^(1/(k+1))`, integrated
//! backward from `x(T) = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Trajectory};
use crate::solver::{speed_at_x, SolveReport};

/// Below this terminal speed (k > 1 only) the first step follows the
/// zero-speed local solution instead of RK4.
pub const TINY_V0: f64 = 1e-10;
pub const MIN_STEPS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSolution {
    pub t_grid: Vec<f64>,
    pub x_values: Vec<f64>,
    pub v_values: Vec<f64>,
    pub step_count: usize,
}

impl OdeSolution {
    /// Cubic Hermite interpolation of `x` at `t`, using `x' = -v` at the nodes.
    pub fn x_at(&self, t: f64) -> f64 {
        let n = self.t_grid.len();
        let t0 = self.t_grid[0];
        let h = (self.t_grid[n - 1] - t0) / (n - 1) as f64;
        let j = (((t - t0) / h).floor().max(0.0) as usize).min(n - 2);
        let s = (t - self.t_grid[j]) / h;
        if s == 0.0 {
            return self.x_values[j];
        }
        let (x0, x1) = (self.x_values[j], self.x_values[j + 1]);
        let (d0, d1) = (-self.v_values[j] * h, -self.v_values[j + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * x0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * x1 + (s3 - s2) * d1
    }
}

/// Integrate from `(T, x = 0)` back to `t = 0` with `n_steps` classical RK4
/// steps and return the solution in forward time.
pub fn integrate_first_order(p: &ModelParams, v0: f64, n_steps: usize) -> Result<OdeSolution> {
    p.validate()?;
    if n_steps < MIN_STEPS {
        return Err(Error::InsufficientSamples { got: n_steps, need: MIN_STEPS });
    }
    let zero_speed_ok = p.k > 1.0;
    if !(v0 >= 0.0) || !v0.is_finite() || (v0 == 0.0 && !zero_speed_ok) {
        return Err(Error::Domain {
            op: "integrate_first_order",
            name: "v0",
            value: v0,
            reason: "must be positive (zero allowed only for k > 1)",
        });
    }

    let h = p.horizon / n_steps as f64;
    let rhs = |x: f64| speed_at_x(p, v0, x);
    // Backward in time: with tau = T - t, dx/dtau = speed(x).
    let mut xs = Vec::with_capacity(n_steps + 1);
    let mut x = 0.0_f64;
    xs.push(x);
    for step in 0..n_steps {
        x = if step == 0 && zero_speed_ok && v0 < TINY_V0 {
            let k = p.k;
            ((k - 1.0) * h / (k + 1.0)).powf((k + 1.0) / (k - 1.0)) * p.risk_to_impact().powf(1.0 / (k - 1.0))
        } else {
            let k1 = rhs(x);
            let k2 = rhs(x + 0.5 * h * k1);
            let k3 = rhs(x + 0.5 * h * k2);
            let k4 = rhs(x + h * k3);
            x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        };
        if !x.is_finite() {
            return Err(Error::StepFailure { step: step + 1 });
        }
        xs.push(x);
    }
    xs.reverse();
    let t_grid =
        (0..=n_steps).map(|i| if i == n_steps { p.horizon } else { p.horizon * i as f64 / n_steps as f64 }).collect();
    let v_values = xs.iter().map(|&x| rhs(x)).collect();
    Ok(OdeSolution { t_grid, x_values: xs, v_values, step_count: n_steps })
}

/// Checks the order reduction `x'' = y dy/du` (with `u = x`, `y = x'`)
/// against the Euler-Lagrange right-hand side
/// `2 lambda sigma^2 / (eta k (k+1)) x v^(1-k)`. `dy/du` is a central
/// difference along the solution. Returns the largest mismatch over interior
/// nodes.
pub fn reduction_check(p: &ModelParams, sol: &OdeSolution) -> Result<f64> {
    let n = sol.x_values.len();
    if n < 5 {
        return Err(Error::InsufficientSamples { got: n, need: 5 });
    }
    let coef = 2.0 * p.lam * p.sigma * p.sigma / (p.eta * p.k * (p.k + 1.0));
    let mut worst = 0.0_f64;
    for i in 1..n - 1 {
        let du = sol.x_values[i + 1] - sol.x_values[i - 1];
        if du == 0.0 {
            continue;
        }
        let dy = -(sol.v_values[i + 1] - sol.v_values[i - 1]);
        let y = -sol.v_values[i];
        let reduced = y * dy / du;
        let euler_lagrange = coef * sol.x_values[i] * sol.v_values[i].powf(1.0 - p.k);
        worst = worst.max((reduced - euler_lagrange).abs());
    }
    Ok(worst)
}

/// Sup-norm gap between a sampled trajectory and the RK4 oracle started from
/// the same terminal speed.
pub fn trajectory_deviation(traj: &Trajectory, n_steps: usize) -> Result<f64> {
    let sol = integrate_first_order(&traj.params, traj.v0, n_steps)?;
    Ok(traj.points.iter().map(|q| (q.x - sol.x_at(q.t)).abs()).fold(0.0, f64::max))
}

pub fn cross_validate(p: &ModelParams, report: &SolveReport, n_steps: usize) -> Result<f64> {
    let traj = Trajectory { params: *p, ..report.trajectory.clone() };
    trajectory_deviation(&traj, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{closed_form_k1, solve, solve_v0, zero_speed_x};

    const V0_K1: f64 = 0.850_918_128_239_321_5;

    #[test]
    fn terminal_data() {
        let p = ModelParams::unit(0.5);
        let sol = integrate_first_order(&p, 0.6, 64).unwrap();
        assert_eq!(sol.step_count, 64);
        assert_eq!(sol.t_grid.len(), 65);
        assert_eq!(*sol.t_grid.last().unwrap(), 1.0);
        assert_eq!(*sol.x_values.last().unwrap(), 0.0);
        assert_eq!(*sol.v_values.last().unwrap(), 0.6);
        assert!(sol.x_values.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn linear_case_start() {
        let sol = integrate_first_order(&ModelParams::unit(1.0), V0_K1, 1024).unwrap();
        assert!((sol.x_values[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_half_example_start() {
        let sol = integrate_first_order(&ModelParams::unit(0.5), 0.671_525, 2048).unwrap();
        assert!((sol.x_values[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ModelParams::unit(0.5);
        assert!(matches!(integrate_first_order(&p, 0.6, 8), Err(Error::InsufficientSamples { .. })));
        assert!(integrate_first_order(&p, 0.0, 64).is_err());
        assert!(integrate_first_order(&ModelParams::unit(2.0), 0.0, 64).is_ok());
    }

    #[test]
    fn rk4_fourth_order() {
        let p = ModelParams::unit(1.0);
        let err = |n| (integrate_first_order(&p, V0_K1, n).unwrap().x_values[0] - 1.0).abs();
        let ratio = err(32) / err(64);
        assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn beltrami_along_rk4() {
        for k in [0.125, 0.5, 1.0, 2.0, 8.0] {
            let p = ModelParams::unit(k);
            let v0 = solve_v0(&p).unwrap().v0;
            let sol = integrate_first_order(&p, v0, 1024).unwrap();
            let anchor = k * v0.powf(k + 1.0);
            let worst = sol
                .x_values
                .iter()
                .zip(&sol.v_values)
                .map(|(x, v)| (x * x - k * v.powf(k + 1.0) + anchor).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "k={k}: {worst}");
            assert!((sol.x_values[0] - 1.0).abs() < 1e-4, "k={k}");
        }
    }

    #[test]
    fn reduction_on_linear_case() {
        // Sample the sinh solution directly.
        let p = ModelParams::unit(1.0);
        let n = 2048;
        let t_grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let x_values: Vec<f64> = t_grid.iter().map(|&t| closed_form_k1(&p, t).unwrap()).collect();
        let v_values: Vec<f64> = t_grid.iter().map(|&t| (1.0 - t).cosh() / 1.0_f64.sinh()).collect();
        let sol = OdeSolution { t_grid, x_values, v_values, step_count: n };
        assert!(reduction_check(&p, &sol).unwrap() < 1e-4);
    }

    #[test]
    fn reduction_on_zero_speed_case() {
        let p = ModelParams::unit(2.0);
        let n = 2048;
        let t_grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let x_values: Vec<f64> = t_grid.iter().map(|&t| zero_speed_x(&p, t).unwrap()).collect();
        let v_values: Vec<f64> = x_values.iter().map(|&x| speed_at_x(&p, 0.0, x)).collect();
        let sol = OdeSolution { t_grid, x_values, v_values, step_count: n };
        assert!(reduction_check(&p, &sol).unwrap() < 1e-4);
    }

    #[test]
    fn reduction_needs_five_points() {
        let sol = OdeSolution { t_grid: vec![0.0; 4], x_values: vec![0.0; 4], v_values: vec![1.0; 4], step_count: 3 };
        assert!(matches!(reduction_check(&ModelParams::unit(1.0), &sol), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn zero_speed_start_follows_closed_form() {
        let p = ModelParams::unit(2.0);
        let sol = integrate_first_order(&p, 0.0, 4096).unwrap();
        let exact = zero_speed_x(&p, 0.0).unwrap();
        // The right-hand side behaves like x^(2/3) near the terminal point, so
        // RK4 runs below fourth order here.
        assert!((sol.x_values[0] - exact).abs() < 1e-6, "{} vs {exact}", sol.x_values[0]);
        let coarse = integrate_first_order(&p, 0.0, 1024).unwrap();
        assert!((sol.x_values[0] - exact).abs() < (coarse.x_values[0] - exact).abs());
    }

    #[test]
    fn cross_validation_examples() {
        for (k, tol) in [(1.0, 1e-6), (0.5, 1e-5), (8.0, 1e-5)] {
            let p = ModelParams::unit(k);
            let report = solve(&p, 101).unwrap();
            let dev = cross_validate(&p, &report, 4096).unwrap();
            assert!(dev < tol, "k={k}: {dev}");
        }
    }

    #[test]
    fn hermite_reproduces_nodes_and_cubics() {
        let t_grid: Vec<f64> = (0..=4).map(|i| i as f64 * 0.25).collect();
        let f = |t: f64| 1.0 - t * t * t;
        let sol = OdeSolution {
            x_values: t_grid.iter().map(|&t| f(t)).collect(),
            v_values: t_grid.iter().map(|&t| 3.0 * t * t).collect(),
            t_grid,
            step_count: 4,
        };
        assert_eq!(sol.x_at(0.5), f(0.5));
        assert!((sol.x_at(0.6) - f(0.6)).abs() < 1e-15);
        assert!((sol.x_at(1.0) - f(1.0)).abs() < 1e-15);
    }
}
