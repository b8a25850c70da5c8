//! Euler integral representation of 2F1, evaluated by adaptive Gauss-Kronrod
//! quadrature. Kept independent of the series code so it can serve as an
//! oracle for it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gamma::gamma_fn;
use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_687_640_079_580,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Weights of the embedded 10-point Gauss rule, attached to XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const REL_TOL: f64 = 1e-14;
const ABS_TOL: f64 = 1e-16;
const MAX_INTERVALS: usize = 2_000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Globally adaptive 21-point Gauss-Kronrod quadrature on `[lo, hi]`.
/// Returns the integral and an error estimate.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let mut heap = BinaryHeap::new();
    let first = gk21(&f, lo, hi);
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);

    while total_err > ABS_TOL.max(REL_TOL * total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure { estimated_error: total_err, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval exhausted at floating-point resolution.
            return Err(Error::QuadratureFailure { estimated_error: total_err, intervals: heap.len() + 1 });
        }
        let left = gk21(&f, worst.lo, mid);
        let right = gk21(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok((value, error))
}

/// 2F1(a, b; c; t) from the Euler integral
///
/// ```text
/// Gamma(c) / (Gamma(a) Gamma(c-a)) * int_0^1 s^(a-1) (1-s)^(c-a-1) (1-ts)^(-b) ds
/// ```
///
/// valid for `c > a > 0` and real `t < 1`. The integral is split at `s = 1/2`;
/// the left half uses `s = u^(1/a)` and the right half `1 - s = r^(1/(c-a))`,
/// which turns both endpoint power singularities into bounded factors. With
/// `a = 1/2` the left substitution is `s = u^2`.
pub(crate) fn euler_integral(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    const OP: &str = "hyp2f1_quadrature";
    if !(a > 0.0) {
        return Err(Error::Domain { op: OP, name: "a", value: a, reason: "requires a > 0" });
    }
    if !(c > a) {
        return Err(Error::Domain { op: OP, name: "c", value: c, reason: "requires c > a" });
    }
    if !(t < 1.0) || !b.is_finite() {
        return Err(Error::Domain { op: OP, name: "t", value: t, reason: "requires t < 1" });
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let ca = c - a;
    let left = |u: f64| {
        let s = u.powf(1.0 / a);
        (1.0 - s).powf(ca - 1.0) * (1.0 - t * s).powf(-b) / a
    };
    let right = |r: f64| {
        let one_minus_s = r.powf(1.0 / ca);
        let s = 1.0 - one_minus_s;
        s.powf(a - 1.0) * (1.0 - t * s).powf(-b) / ca
    };
    let (l, _) = integrate(left, 0.0, 0.5_f64.powf(a))?;
    let (r, _) = integrate(right, 0.0, 0.5_f64.powf(ca))?;
    let norm = gamma_fn(c)? / (gamma_fn(a)? * gamma_fn(ca)?);
    Ok(norm * (l + r))
}
