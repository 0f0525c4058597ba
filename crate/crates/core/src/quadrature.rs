//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Intervals are kept in a max-heap keyed by their error estimate (the
//! difference between the embedded 10-point Gauss and 21-point Kronrod
//! rules) and the worst one is bisected until the summed estimate falls
//! under the requested tolerance.
//!
//! Integrands with an algebraic singularity at the left endpoint go through
//! [`Quadrature::integrate_endpoint_singular`], which substitutes a power of
//! the offset so that the transformed integrand is bounded.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_846_068_297,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of the fixed 21-point rule on one interval.
#[derive(Debug, Clone, Copy)]
struct Segment {
    lower: f64,
    upper: f64,
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

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lower: f64, upper: f64) -> Segment {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);

    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    Segment {
        lower,
        upper,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_intervals: 4000,
        }
    }
}

impl Quadrature {
    /// Integrates `f` over `[a, b]`. Reversed limits flip the sign.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "integration limits must be finite, got [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        if a > b {
            return self.integrate(f, b, a).map(|v| -v);
        }

        let first = kronrod21(&f, a, b);
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);

        while error > self.tolerance(value) {
            if heap.len() >= self.max_intervals {
                return Err(self.failure(a, b, error, value));
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.lower + worst.upper);
            if mid <= worst.lower || mid >= worst.upper {
                // Interval no longer splittable in floating point.
                return Err(self.failure(a, b, error, value));
            }
            let left = kronrod21(&f, worst.lower, mid);
            let right = kronrod21(&f, mid, worst.upper);
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);

            // Re-sum occasionally so the running totals do not drift.
            if heap.len() % 64 == 0 {
                value = heap.iter().map(|s| s.value).sum();
                error = heap.iter().map(|s| s.error).sum();
            }
        }
        Ok(heap.iter().map(|s| s.value).sum())
    }

    /// Integrates `h(d)` for `d` in `[0, length]` where `h` may blow up like
    /// `d^beta` (`beta > -1`) at the origin. The substitution `d = w^power`
    /// gives `∫_0^{length^(1/power)} power w^(power-1) h(w^power) dw`, whose
    /// integrand is bounded once `power * (1 + beta) >= 1`.
    ///
    /// `h` receives the offset from the singular endpoint rather than an
    /// absolute coordinate, so callers can evaluate it without cancellation.
    pub fn integrate_endpoint_singular<F: Fn(f64) -> f64>(
        &self,
        h: F,
        length: f64,
        power: u32,
    ) -> Result<f64> {
        if length == 0.0 {
            return Ok(0.0);
        }
        if length < 0.0 || power == 0 {
            return Err(Error::InvalidParameter(format!(
                "singular integral needs length >= 0 and power >= 1, got {length}, {power}"
            )));
        }
        let m = power as i32;
        let mf = power as f64;
        let upper = length.powf(1.0 / mf);
        self.integrate(
            |w| {
                if w == 0.0 {
                    0.0
                } else {
                    mf * w.powi(m - 1) * h(w.powi(m))
                }
            },
            0.0,
            upper,
        )
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn failure(&self, a: f64, b: f64, estimate: f64, value: f64) -> Error {
        Error::Quadrature {
            lower: a,
            upper: b,
            estimate,
            tolerance: self.tolerance(value),
        }
    }
}
