//! Gauss hypergeometric function 2F1(a, b; c; t) for real parameters and
//! real arguments t < 1.
//!
//! Evaluation paths:
//!
//! * `-0.5 <= t < 1`: the defining power series.
//! * `-9 <= t < -0.5`: Pfaff transformation to `z = t/(t-1)` in `(1/3, 0.9]`.
//! * `t < -9`: the connection formula to `1/t`, two series in `|1/t| < 1/9`.
//!   When `a - b` is within `1e-4` of an integer the two branches cancel, so
//!   the Pfaff series is used while it stays fast enough and the Euler
//!   integral beyond that.

use serde::Serialize;

use super::gamma::{gamma_real, is_nonpositive_integer, rgamma};
use super::quadrature::euler_integral;
use crate::error::{Error, Result};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;
const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_ABS_FLOOR: f64 = 1e-300;

const DIRECT_MIN_T: f64 = -0.5;
const PFAFF_MAX_Z: f64 = 0.9;
const PFAFF_FALLBACK_MAX_Z: f64 = 0.999;
const INTEGER_GAP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64, t: f64) -> Result<Self> {
        const OP: &str = "hyp2f1";
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain {
                op: OP,
                name: "a/b",
                value: if a.is_finite() { b } else { a },
                reason: "must be finite",
            });
        }
        if !c.is_finite() || is_nonpositive_integer(c) {
            return Err(Error::Domain { op: OP, name: "c", value: c, reason: "must not be a non-positive integer" });
        }
        if !(t < 1.0) || t.is_nan() || t == f64::NEG_INFINITY {
            return Err(Error::Domain { op: OP, name: "t", value: t, reason: "requires finite t < 1" });
        }
        Ok(Self { a, b, c, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectSeries,
    PfaffSeries,
    ReciprocalSeries,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyp2F1Eval {
    pub value: f64,
    pub method: Method,
    /// Series terms summed, over all series involved. Zero for quadrature.
    pub terms_used: usize,
    pub estimated_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct SeriesSum {
    sum: f64,
    terms: usize,
    error: f64,
}

/// Sum the defining series of 2F1(a, b; c; z). Requires `|z| < 1` or a
/// terminating series.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<SeriesSum> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut abs_sum = 1.0_f64;
    let mut n = 0usize;
    loop {
        if n + 1 >= MAX_TERMS {
            return Err(Error::NoConvergence { a, b, c, t: z, terms: MAX_TERMS });
        }
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        n += 1;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            // Terminating series (a or b a non-positive integer).
            return Ok(SeriesSum { sum, terms: n + 1, error: 2.0 * f64::EPSILON * abs_sum });
        }
        let nf = n as f64;
        let next_ratio = ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z).abs();
        let small = term.abs() < SERIES_REL_TOL * sum.abs() || term.abs() < SERIES_ABS_FLOOR;
        if small && next_ratio < 1.0 {
            let rho = next_ratio.max(z.abs());
            let tail = term.abs() * rho / (1.0 - rho);
            return Ok(SeriesSum { sum, terms: n + 1, error: tail + 2.0 * f64::EPSILON * abs_sum });
        }
    }
}

fn direct(p: &Hyp2F1Params) -> Result<Hyp2F1Eval> {
    let s = series(p.a, p.b, p.c, p.t)?;
    Ok(Hyp2F1Eval { value: s.sum, method: Method::DirectSeries, terms_used: s.terms, estimated_error: s.error })
}

/// `2F1(a, b; c; t) = (1 - t)^(-a) 2F1(a, c - b; c; t/(t - 1))`, with the
/// roles of `a` and `b` chosen so the transformed series terminates if it can
/// and otherwise decays fastest.
fn pfaff(p: &Hyp2F1Params) -> Result<Hyp2F1Eval> {
    let Hyp2F1Params { a, b, c, t } = *p;
    let (first, second) = if is_nonpositive_integer(c - b) {
        (a, b)
    } else if is_nonpositive_integer(c - a) || b < a {
        (b, a)
    } else {
        (a, b)
    };
    let z = t / (t - 1.0);
    let s = series(first, c - second, c, z)?;
    let prefactor = (1.0 - t).powf(-first);
    let value = prefactor * s.sum;
    Ok(Hyp2F1Eval {
        value,
        method: Method::PfaffSeries,
        terms_used: s.terms,
        estimated_error: prefactor * s.error + 2.0 * f64::EPSILON * value.abs(),
    })
}

/// Connection formula for `t < -1`, valid when `a - b` is not an integer:
///
/// ```text
/// F = G(c)G(b-a)/(G(b)G(c-a)) (-t)^(-a) F(a, a-c+1; a-b+1; 1/t)
///   + G(c)G(a-b)/(G(a)G(c-b)) (-t)^(-b) F(b, b-c+1; b-a+1; 1/t)
/// ```
fn reciprocal(p: &Hyp2F1Params) -> Result<Hyp2F1Eval> {
    let Hyp2F1Params { a, b, c, t } = *p;
    let w = -t;
    let inv = 1.0 / t;
    let gc = gamma_real(c);
    let coef_a = gc * gamma_real(b - a) * rgamma(b) * rgamma(c - a) * w.powf(-a);
    let coef_b = gc * gamma_real(a - b) * rgamma(a) * rgamma(c - b) * w.powf(-b);

    let mut terms = 0;
    let mut error = 0.0;
    let mut part = |coef: f64, x: f64, y: f64, z: f64| -> Result<f64> {
        if coef == 0.0 {
            return Ok(0.0);
        }
        let s = series(x, y, z, inv)?;
        terms += s.terms;
        error += coef.abs() * s.error;
        Ok(coef * s.sum)
    };
    let left = part(coef_a, a, a - c + 1.0, a - b + 1.0)?;
    let right = part(coef_b, b, b - c + 1.0, b - a + 1.0)?;
    let value = left + right;
    // Gamma values carry about 1e-15 relative error each.
    error += 8.0 * f64::EPSILON * (left.abs() + right.abs());
    Ok(Hyp2F1Eval { value, method: Method::ReciprocalSeries, terms_used: terms, estimated_error: error })
}

fn quadrature(p: &Hyp2F1Params) -> Result<Hyp2F1Eval> {
    let Hyp2F1Params { a, b, c, t } = *p;
    // The integral needs c > a > 0 on whichever upper parameter plays `a`.
    let value = if c > a && a > 0.0 { euler_integral(a, b, c, t)? } else { euler_integral(b, a, c, t)? };
    Ok(Hyp2F1Eval {
        value,
        method: Method::Quadrature,
        terms_used: 0,
        estimated_error: 1e-13 * value.abs().max(1e-300),
    })
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_GAP
}

/// Evaluate 2F1(a, b; c; t).
pub fn hyp2f1(p: Hyp2F1Params) -> Result<Hyp2F1Eval> {
    if p.t == 0.0 {
        return Ok(Hyp2F1Eval { value: 1.0, method: Method::DirectSeries, terms_used: 1, estimated_error: 0.0 });
    }
    if p.t >= DIRECT_MIN_T {
        return direct(&p);
    }
    // Polynomial cases terminate in the direct series at any argument.
    if is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b) {
        return direct(&p);
    }
    let z = p.t / (p.t - 1.0);
    if z <= PFAFF_MAX_Z {
        return pfaff(&p);
    }
    if !near_integer(p.a - p.b) {
        return reciprocal(&p);
    }
    let integrable = (p.c > p.a && p.a > 0.0) || (p.c > p.b && p.b > 0.0);
    if z <= PFAFF_FALLBACK_MAX_Z || !integrable {
        return pfaff(&p);
    }
    quadrature(&p)
}

/// 2F1 by direct quadrature of the Euler integral. Requires `c > a > 0`.
/// Independent of the series paths and used as their oracle.
pub fn hyp2f1_quadrature(p: Hyp2F1Params) -> Result<f64> {
    euler_integral(p.a, p.b, p.c, p.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(a: f64, b: f64, c: f64, t: f64) -> Hyp2F1Eval {
        hyp2f1(Hyp2F1Params::new(a, b, c, t).unwrap()).unwrap()
    }

    fn quad(a: f64, b: f64, c: f64, t: f64) -> f64 {
        hyp2f1_quadrature(Hyp2F1Params::new(a, b, c, t).unwrap()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let e = eval(0.5, 0.5, 1.5, 0.0);
        assert_eq!(e.value, 1.0);

        let e = eval(0.5, 0.5, 1.5, -1.0);
        assert!((e.value - 1.0_f64.asinh()).abs() < 1e-14);
        assert!((e.value - 0.881_373_587_0).abs() < 1e-10);
        assert_eq!(e.method, Method::PfaffSeries);

        // Oracle value from quadrature of the Euler integral.
        let v = quad(0.5, 2.0 / 3.0, 1.5, -2.0);
        let e = eval(0.5, 2.0 / 3.0, 1.5, -2.0);
        assert!((e.value - v).abs() < 1e-10);
        assert!((e.value - 0.760_474_448_539_885_6).abs() < 1e-13);
    }

    #[test]
    fn path_selection() {
        assert_eq!(eval(0.5, 0.4, 1.5, -0.3).method, Method::DirectSeries);
        assert_eq!(eval(0.5, 0.4, 1.5, 0.7).method, Method::DirectSeries);
        assert_eq!(eval(0.5, 0.4, 1.5, -5.0).method, Method::PfaffSeries);
        assert_eq!(eval(0.5, 0.4, 1.5, -50.0).method, Method::ReciprocalSeries);
        // a = b: cancellation in the connection formula.
        assert_eq!(eval(0.5, 0.5, 1.5, -50.0).method, Method::PfaffSeries);
        assert_eq!(eval(0.5, 0.5, 1.5, -1e6).method, Method::Quadrature);
    }

    #[test]
    fn arcsinh_identity_across_paths() {
        for &z in &[1e-3, 0.3, 1.0, 3.0, 10.0, 100.0, 1e3, 1e5] {
            let e = eval(0.5, 0.5, 1.5, -z * z);
            let exact = z.asinh() / z;
            assert!((e.value - exact).abs() <= 1e-12 * exact, "z={z}: {} vs {exact} via {:?}", e.value, e.method);
        }
    }

    #[test]
    fn error_estimate_bounds_actual_error() {
        for &z in &[0.5, 2.0, 5.0, 40.0] {
            let e = eval(0.5, 0.5, 1.5, -z * z);
            let exact = z.asinh() / z;
            assert!(e.estimated_error >= 0.0);
            assert!((e.value - exact).abs() <= e.estimated_error + 4.0 * f64::EPSILON * exact);
        }
    }

    #[test]
    fn elementary_closed_forms() {
        // 2F1(1, 1; 2; t) = -ln(1 - t)/t
        for &t in &[-0.2, -3.0, -30.0, 0.4] {
            let e = eval(1.0, 1.0, 2.0, t);
            let exact = -(1.0 - t).ln() / t;
            assert!((e.value - exact).abs() < 1e-13 * exact.abs(), "t={t}");
        }
        // 2F1(a, b; b; t) = (1 - t)^(-a), exercised through the reciprocal path.
        for &t in &[-0.3, -4.0, -200.0] {
            let e = eval(0.3, 0.7, 0.7, t);
            assert!((e.value - (1.0 - t).powf(-0.3)).abs() < 1e-13);
        }
        // Terminating series at a large negative argument.
        let e = eval(-2.0, 0.5, 1.5, -100.0);
        let exact = 1.0 + 2.0 * 0.5 / 1.5 * 100.0 + (-2.0 * -1.0) * (0.5 * 1.5) / (1.5 * 2.5) / 2.0 * 1e4;
        assert!((e.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn no_convergence_is_reported() {
        // Direct series right up against t = 1 with divergent boundary behaviour.
        let p = Hyp2F1Params::new(1.5, 1.5, 1.0, 1.0 - 1e-9).unwrap();
        assert!(matches!(hyp2f1(p), Err(Error::NoConvergence { terms: MAX_TERMS, .. })));
    }

    #[test]
    fn invalid_params() {
        assert!(Hyp2F1Params::new(0.5, 0.5, 0.0, -1.0).is_err());
        assert!(Hyp2F1Params::new(0.5, 0.5, -2.0, -1.0).is_err());
        assert!(Hyp2F1Params::new(0.5, 0.5, 1.5, 1.0).is_err());
        assert!(Hyp2F1Params::new(0.5, 0.5, 1.5, f64::NAN).is_err());
        assert!(Hyp2F1Params::new(0.5, 0.5, -2.5, -1.0).is_ok());
    }

    #[test]
    fn terms_within_budget() {
        for &t in &[-0.4, -1.0, -8.9, -9.1, -1e3, -1e9] {
            for k in [0.125, 0.5, 1.0, 2.0, 8.0] {
                let e = eval(0.5, 1.0 / (k + 1.0), 1.5, t);
                assert!(e.terms_used <= MAX_TERMS);
                assert!(e.estimated_error >= 0.0);
            }
        }
    }

    proptest! {
        #[test]
        fn normalization(a in -5.0f64..5.0, b in -5.0f64..5.0, c in 0.1f64..5.0) {
            prop_assert_eq!(eval(a, b, c, 0.0).value, 1.0);
        }

        #[test]
        fn symmetric_in_upper_parameters(a in 0.05f64..2.0, b in 0.05f64..2.0, c in 0.1f64..3.0, t in -80.0f64..0.9) {
            let ab = eval(a, b, c, t);
            let ba = eval(b, a, c, t);
            let scale = ab.value.abs().max(1.0);
            prop_assert!((ab.value - ba.value).abs() <= 1e-11 * scale, "{:?} vs {:?}", ab, ba);
        }

        #[test]
        fn series_matches_quadrature(k in 0.1f64..10.0, t in -60.0f64..0.0) {
            let b = 1.0 / (k + 1.0);
            let e = eval(0.5, b, 1.5, t);
            let q = quad(0.5, b, 1.5, t);
            prop_assert!((e.value - q).abs() < 1e-10, "k={} t={} {} vs {}", k, t, e.value, q);
        }
    }
}
