//! Terminal-speed shooting, the implicit hypergeometric solution, and the
//! end-to-end solve.

mod closed_form;
mod shooting;

use serde::Serialize;

pub use closed_form::{
    closed_form_k1, closed_form_k1_v0, zero_speed_admissible, zero_speed_depletion_time, zero_speed_x, zero_speed_x0,
};
pub use shooting::{
    implicit_time_of_x, shooting_lhs, solve_v0, speed_at_x, x_at_time, ShootingResult, ShootingSample,
    BRACKET_REL_WIDTH, ROOT_TOL,
};

use crate::error::{Error, Result};
use crate::model::{beltrami_constant, cost_of_trajectory, ModelParams, Trajectory, TrajectoryPoint};
use crate::verify;

/// RK4 steps used for the oracle comparison inside [`solve`].
pub const ORACLE_STEPS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveChecks {
    /// `max |lambda sigma^2 x^2 - k eta v^(k+1) + k eta v0^(k+1)|` over the samples.
    pub beltrami_max_residual: f64,
    pub boundary_x0_error: f64,
    #[serde(rename = "boundary_xT_error")]
    pub boundary_xt_error: f64,
    /// Sup-norm gap to the RK4 integration of the first-order equation.
    pub oracle_max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub params: ModelParams,
    pub shooting: ShootingResult,
    pub trajectory: Trajectory,
    pub cost: f64,
    pub checks: SolveChecks,
}

/// Uniform grid of `n` times on `[0, T]` with both endpoints exact.
pub fn time_grid(horizon: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { horizon } else { horizon * i as f64 / (n - 1) as f64 }).collect()
}

/// Sample the optimal path for terminal speed `v0` on a uniform grid.
pub fn sample_trajectory(p: &ModelParams, v0: f64, n_samples: usize) -> Result<Trajectory> {
    if n_samples < 3 {
        return Err(Error::InsufficientSamples { got: n_samples, need: 3 });
    }
    let anchor = p.k * p.eta * v0.powf(p.k + 1.0);
    let points = time_grid(p.horizon, n_samples)
        .into_iter()
        .map(|t| {
            let x = x_at_time(p, v0, t)?;
            let v = speed_at_x(p, v0, x);
            Ok(TrajectoryPoint { t, x, v, beltrami_residual: beltrami_constant(p, x, v) + anchor })
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(*p, v0, points)
}

/// Find the terminal speed, sample the path on `n_samples` uniform times,
/// and attach cost and verification residuals.
pub fn solve(p: &ModelParams, n_samples: usize) -> Result<SolveReport> {
    p.validate()?;
    if n_samples < 3 {
        return Err(Error::InsufficientSamples { got: n_samples, need: 3 });
    }
    let shooting = solve_v0(p)?;
    let trajectory = sample_trajectory(p, shooting.v0, n_samples)?;
    let cost = cost_of_trajectory(&trajectory)?;

    let points = &trajectory.points;
    let first = points[0];
    let last = points[points.len() - 1];
    let checks = SolveChecks {
        beltrami_max_residual: points.iter().map(|q| q.beltrami_residual.abs()).fold(0.0, f64::max),
        boundary_x0_error: (first.x - p.holdings).abs(),
        boundary_xt_error: last.x.abs(),
        oracle_max_deviation: verify::trajectory_deviation(&trajectory, ORACLE_STEPS)?,
    };
    log::debug!("solved k={} v0={} in {} iterations", p.k, shooting.v0, shooting.iterations);
    Ok(SolveReport { params: *p, shooting, trajectory, cost, checks })
}
