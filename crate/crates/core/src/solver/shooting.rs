//! The shooting equation for the terminal speed and the implicit solution it
//! parameterises.
//!
//! Starting from `x(T) = 0` with speed `v0`, holdings `x` are reached after a
//! time-to-go
//!
//! ```text
//! tau(x) = (x / v0) 2F1(1/2, 1/(k+1); 3/2; -lambda sigma^2 x^2 / (k eta v0^(k+1)))
//! ```
//!
//! so the terminal speed is the root of `tau(X) = T`, and `x(t)` inverts
//! `tau(x) = T - t`.

use serde::Serialize;

use super::closed_form::{zero_speed_admissible, zero_speed_depletion_time};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::specfun::{hyp2f1, Hyp2F1Params};

/// Bisection stops once the bracket is this narrow relative to its upper end.
pub const BRACKET_REL_WIDTH: f64 = 1e-12;
/// Largest acceptable `|tau(X) - T|` at the returned terminal speed, relative
/// to `max(T, 1)`.
pub const ROOT_TOL: f64 = 1e-9;
/// Bracket expansion stops above `2^60 X/T` ...
pub const MAX_EXPANSIONS_UP: i32 = 60;
/// ... and below `2^-600 X/T`.
pub const MAX_EXPANSIONS_DOWN: i32 = 600;
const MAX_BISECTIONS: usize = 200;
const MAX_INVERSION_STEPS: usize = 200;
/// Residual in time allowed when `x(0)` is clamped to `X`.
const INVERSION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingSample {
    pub v0: f64,
    pub lhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShootingResult {
    pub v0: f64,
    /// `tau(X) - T` at `v0`.
    pub residual: f64,
    /// Bracket expansions plus bisection steps.
    pub iterations: usize,
    pub bracket: (f64, f64),
    /// Every evaluation of the shooting function, in order.
    #[serde(skip)]
    pub history: Vec<ShootingSample>,
}

/// Time to liquidate `x` shares when finishing at speed `v0`.
fn time_to_go(p: &ModelParams, v0: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let b = 1.0 / (p.k + 1.0);
    // Assemble the argument in logs so that tiny v0 does not underflow first.
    let log_arg = p.risk_to_impact().ln() + 2.0 * x.ln() - (p.k + 1.0) * v0.ln();
    let f = hyp2f1(Hyp2F1Params::new(0.5, b, 1.5, -log_arg.exp())?)?;
    Ok(x / v0 * f.value)
}

fn check_speed(v0: f64, op: &'static str) -> Result<()> {
    if v0 > 0.0 && v0.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { op, name: "v0", value: v0, reason: "must be positive and finite" })
    }
}

/// Left-hand side of the shooting equation, `tau(X)`. Strictly decreasing in
/// `v0`.
pub fn shooting_lhs(p: &ModelParams, v0: f64) -> Result<f64> {
    check_speed(v0, "shooting_lhs")?;
    time_to_go(p, v0, p.holdings)
}

/// Solve `shooting_lhs(p, v0) = T` for the terminal speed.
///
/// The search starts at the constant-speed guess `X/T`, doubles or halves
/// until the residual changes sign, then bisects.
pub fn solve_v0(p: &ModelParams) -> Result<ShootingResult> {
    p.validate()?;
    let horizon = p.horizon;
    if zero_speed_admissible(p) {
        let boundary_time = zero_speed_depletion_time(p)?;
        if horizon >= boundary_time {
            return Err(Error::NoRoot { horizon, boundary_time });
        }
    }

    let mut history = Vec::new();
    let mut eval = |v: f64| -> Result<f64> {
        let lhs = shooting_lhs(p, v)?;
        history.push(ShootingSample { v0: v, lhs });
        Ok(lhs - horizon)
    };

    let guess = p.holdings / horizon;
    let f_guess = eval(guess)?;
    let mut iterations = 0;
    let (mut lo, mut hi) = if f_guess > 0.0 {
        // Too slow: the position is not liquidated in time.
        let upper = guess * 2f64.powi(MAX_EXPANSIONS_UP);
        let mut lo = guess;
        let mut hi = 2.0 * guess;
        loop {
            iterations += 1;
            if hi > upper {
                return Err(Error::BracketFailure { lo: guess, hi });
            }
            let f = eval(hi).map_err(|_| Error::BracketFailure { lo: guess, hi })?;
            if f <= 0.0 {
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        (lo, hi)
    } else if f_guess < 0.0 {
        let lower = guess * 2f64.powi(-MAX_EXPANSIONS_DOWN);
        let mut hi = guess;
        let mut lo = 0.5 * guess;
        loop {
            iterations += 1;
            if lo < lower {
                return Err(Error::BracketFailure { lo, hi: guess });
            }
            let f = eval(lo).map_err(|_| Error::BracketFailure { lo, hi: guess })?;
            if f >= 0.0 {
                break;
            }
            hi = lo;
            lo *= 0.5;
        }
        (lo, hi)
    } else {
        (guess, guess)
    };

    while hi - lo > BRACKET_REL_WIDTH * hi {
        if iterations > MAX_BISECTIONS + MAX_EXPANSIONS_DOWN as usize {
            return Err(Error::BracketFailure { lo, hi });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let v0 = 0.5 * (lo + hi);
    let residual = eval(v0)?;
    if !(residual.abs() < ROOT_TOL * horizon.max(1.0)) {
        return Err(Error::BracketFailure { lo, hi });
    }
    Ok(ShootingResult { v0, residual, iterations, bracket: (lo, hi), history })
}

/// Time at which holdings equal `x` on the path with terminal speed `v0`:
/// `T - tau(x)`.
pub fn implicit_time_of_x(p: &ModelParams, v0: f64, x: f64) -> Result<f64> {
    check_speed(v0, "implicit_time_of_x")?;
    if !(x >= 0.0) {
        return Err(Error::Domain { op: "implicit_time_of_x", name: "x", value: x, reason: "must be non-negative" });
    }
    Ok(p.horizon - time_to_go(p, v0, x)?)
}

/// Trading speed at holdings `x`: `(v0^(k+1) + lambda sigma^2 x^2 / (k eta))^(1/(k+1))`.
pub fn speed_at_x(p: &ModelParams, v0: f64, x: f64) -> f64 {
    let k1 = p.k + 1.0;
    (v0.powf(k1) + p.risk_to_impact() * x * x).powf(1.0 / k1)
}

/// Holdings at time `t`, inverting `tau(x) = T - t` on `[0, X]`.
///
/// Newton steps use `tau'(x) = 1 / speed_at_x`; any step leaving the current
/// bracket is replaced by bisection.
pub fn x_at_time(p: &ModelParams, v0: f64, t: f64) -> Result<f64> {
    check_speed(v0, "x_at_time")?;
    let horizon = p.horizon;
    if !(0.0..=horizon).contains(&t) {
        return Err(Error::Domain { op: "x_at_time", name: "t", value: t, reason: "must lie in [0, T]" });
    }
    if t == horizon {
        return Ok(0.0);
    }
    let target = horizon - t;
    let residual = |x: f64| -> Result<f64> { Ok(time_to_go(p, v0, x)? - target) };

    let x_max = p.holdings;
    let f_max = residual(x_max)?;
    if f_max <= 0.0 {
        // Only reachable at t ~ 0 when tau(X) falls a hair short of T.
        return if -f_max <= INVERSION_TOL * horizon.max(1.0) {
            Ok(x_max)
        } else {
            Err(Error::InversionFailure { t, residual: f_max })
        };
    }

    let (mut lo, mut hi) = (0.0, x_max);
    // tau(x) ~ x / v0 near zero.
    let mut x = (target * v0).clamp(0.0, x_max);
    if x <= lo || x >= hi {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..MAX_INVERSION_STEPS {
        let f = residual(x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f * speed_at_x(p, v0, x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x_max || hi - lo <= 4.0 * f64::EPSILON * x_max {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::InversionFailure { t, residual: residual(x)? })
}
