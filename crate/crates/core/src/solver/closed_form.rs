//! Closed-form special cases: the linear-impact sinh solution and the
//! zero-terminal-speed solution that exists only for k > 1.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Linear impact (k = 1): `X sinh(kappa (T - t)) / sinh(kappa T)` with
/// `kappa = sigma sqrt(lambda / eta)`.
pub fn closed_form_k1(p: &ModelParams, t: f64) -> Result<f64> {
    if p.k != 1.0 {
        return Err(Error::Domain { op: "closed_form_k1", name: "k", value: p.k, reason: "requires k = 1" });
    }
    let kappa = (p.lam / p.eta).sqrt() * p.sigma;
    Ok(p.holdings * (kappa * (p.horizon - t)).sinh() / (kappa * p.horizon).sinh())
}

/// Terminal speed of the k = 1 solution, `X kappa / sinh(kappa T)`.
pub fn closed_form_k1_v0(p: &ModelParams) -> Result<f64> {
    if p.k != 1.0 {
        return Err(Error::Domain { op: "closed_form_k1_v0", name: "k", value: p.k, reason: "requires k = 1" });
    }
    let kappa = (p.lam * p.sigma * p.sigma / (p.eta * p.k)).sqrt();
    Ok(p.holdings * kappa / (kappa * p.horizon).sinh())
}

/// A zero terminal speed is compatible with the problem only when the
/// integral `int_0 z^(-2/(k+1)) dz` converges, i.e. `k > 1`.
pub fn zero_speed_admissible(p: &ModelParams) -> bool {
    p.k > 1.0
}

fn require_zero_speed(p: &ModelParams, op: &'static str) -> Result<()> {
    if zero_speed_admissible(p) {
        Ok(())
    } else {
        Err(Error::Domain { op, name: "k", value: p.k, reason: "zero terminal speed requires k > 1" })
    }
}

/// Holdings at time `t` on the zero-terminal-speed path
/// `((k-1)(T-t)/(k+1))^((k+1)/(k-1)) (lambda sigma^2/(k eta))^(1/(k-1))`.
pub fn zero_speed_x(p: &ModelParams, t: f64) -> Result<f64> {
    require_zero_speed(p, "zero_speed_x")?;
    let k = p.k;
    let base = (k - 1.0) * (p.horizon - t) / (k + 1.0);
    Ok(base.powf((k + 1.0) / (k - 1.0)) * p.risk_to_impact().powf(1.0 / (k - 1.0)))
}

/// The initial holdings forced by a zero terminal speed.
pub fn zero_speed_x0(p: &ModelParams) -> Result<f64> {
    require_zero_speed(p, "zero_speed_x0")?;
    zero_speed_x(p, 0.0)
}

/// Time the zero-speed path needs to liquidate `X`:
/// `(k+1)/(k-1) X^((k-1)/(k+1)) (lambda sigma^2/(k eta))^(-1/(k+1))`.
/// It is the supremum of the shooting function over `v0 > 0`, so horizons at
/// or beyond it admit no positive terminal speed.
pub fn zero_speed_depletion_time(p: &ModelParams) -> Result<f64> {
    require_zero_speed(p, "zero_speed_depletion_time")?;
    let k = p.k;
    Ok((k + 1.0) / (k - 1.0) * p.holdings.powf((k - 1.0) / (k + 1.0)) * p.risk_to_impact().powf(-1.0 / (k + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn k1_examples() {
        let p = ModelParams::unit(1.0);
        assert_relative_eq!(closed_form_k1(&p, 0.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(closed_form_k1(&p, 1.0).unwrap(), 0.0);
        let mid = closed_form_k1(&p, 0.5).unwrap();
        assert!((mid - 0.5_f64.sinh() / 1.0_f64.sinh()).abs() < 1e-15);
        assert!((mid - 0.443_409_4).abs() < 1e-7);
        assert!(closed_form_k1(&ModelParams::unit(0.5), 0.5).is_err());
        assert_relative_eq!(closed_form_k1_v0(&p).unwrap(), 1.0 / 1.0_f64.sinh());
    }

    #[test]
    fn admissibility() {
        assert!(!zero_speed_admissible(&ModelParams::unit(0.5)));
        assert!(!zero_speed_admissible(&ModelParams::unit(1.0)));
        assert!(zero_speed_admissible(&ModelParams::unit(2.0)));
    }

    #[test]
    fn zero_speed_examples() {
        let p = ModelParams::unit(2.0);
        assert_eq!(zero_speed_x(&p, 1.0).unwrap(), 0.0);
        assert!((zero_speed_x(&p, 0.0).unwrap() - 1.0 / 54.0).abs() < 1e-15);
        assert!((zero_speed_x0(&p).unwrap() - 1.0 / 54.0).abs() < 1e-15);
        let p3 = ModelParams { horizon: 3.0, ..p };
        assert!((zero_speed_x0(&p3).unwrap() - 0.5).abs() < 1e-15);
        // k = 3 with lambda sigma^2 / (k eta) = 1 and T - t = 2.
        let p = ModelParams { lam: 3.0, horizon: 2.0, ..ModelParams::unit(3.0) };
        assert!((zero_speed_x(&p, 0.0).unwrap() - 1.0).abs() < 1e-15);
        for k in [0.25, 0.5, 1.0] {
            assert!(zero_speed_x0(&ModelParams::unit(k)).is_err());
        }
    }

    #[test]
    fn depletion_time_inverts_forced_holdings() {
        for k in [1.5, 2.0, 3.0, 8.0] {
            let p = ModelParams::unit(k);
            let t0 = zero_speed_depletion_time(&p).unwrap();
            let q = ModelParams { horizon: t0, ..p };
            assert_relative_eq!(zero_speed_x0(&q).unwrap(), 1.0, max_relative = 1e-13);
        }
        assert_relative_eq!(
            zero_speed_depletion_time(&ModelParams::unit(2.0)).unwrap(),
            3.0 * 2.0_f64.cbrt(),
            max_relative = 1e-15
        );
    }
}
