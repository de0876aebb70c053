//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals and
//! on `[a, ∞)` by geometrically widening panels.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

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
    0.123_491_976_262_065_851_077_208_980_313_143,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-8,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Quadrature {
    /// The value, or a non-convergence error naming `what`.
    pub fn into_result(self, what: &str) -> Result<Self> {
        if self.converged && self.value.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                est_error: self.error,
            })
        }
    }
}

/// One 21-point Kronrod rule with the QUADPACK error heuristic.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Segment {
    a: f64,
    b: f64,
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

/// Globally adaptive bisection on `[a, b]`, splitting the worst segment first.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let (v, e) = gk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut converged = false;
    while heap.len() < opts.max_intervals {
        if total_err <= opts.target(total) {
            converged = true;
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval at floating-point resolution; cannot refine further.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Quadrature {
        value,
        error,
        evaluations,
        converged: converged || error <= opts.target(value),
    }
}

/// `∫_a^∞ f` over panels `[a + s(2^j − 1), a + s(2^{j+1} − 1)]`.
///
/// The tail beyond the last panel is bounded by geometric extrapolation of
/// the panel contributions. Integrands whose panel sums stop shrinking
/// (tails decaying like `k^{−1}` or slower) are reported as non-convergent.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    opts: &QuadOptions,
) -> Result<Quadrature> {
    const MAX_PANELS: usize = 400;
    let mut total = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut lo = a;
    let mut width = scale;
    let mut prev: Option<f64> = None;
    let mut slow = 0usize;
    for j in 0..MAX_PANELS {
        let hi = lo + width;
        let panel_opts = QuadOptions {
            abs_tol: 0.02 * opts.target(total),
            ..*opts
        };
        let q = integrate(&mut f, lo, hi, &panel_opts);
        if !q.value.is_finite() {
            return Err(Error::NonConvergence {
                what: format!("integrand not finite on [{lo:e}, {hi:e}]"),
                est_error: f64::INFINITY,
            });
        }
        total += q.value;
        error += q.error;
        evaluations += q.evaluations;
        let c = q.value.abs();
        let target = opts.target(total);
        if let Some(p) = prev {
            let ratio = if p > 0.0 { c / p } else if c > 0.0 { f64::INFINITY } else { 0.0 };
            let tail = if ratio < 0.9 { c * ratio / (1.0 - ratio) } else { f64::INFINITY };
            if c <= 0.1 * target && p <= target && tail <= 0.1 * target {
                return Ok(Quadrature {
                    value: total,
                    error: error + tail,
                    evaluations,
                    converged: error <= target,
                });
            }
            if ratio >= 0.98 && c > target {
                slow += 1;
            } else {
                slow = 0;
            }
            if j >= 12 && slow >= 8 {
                return Err(Error::NonConvergence {
                    what: format!(
                        "integral to infinity: panel sums not decaying (ratio {ratio:.3} near x = {hi:e})"
                    ),
                    est_error: f64::INFINITY,
                });
            }
        }
        prev = Some(c);
        lo = hi;
        width *= 2.0;
    }
    Err(Error::NonConvergence {
        what: "integral to infinity: panel limit reached".to_string(),
        est_error: error,
    })
}
