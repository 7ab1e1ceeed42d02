//! Globally adaptive Gauss-Kronrod (10/21 point) integration.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`. Error scaling follows
//! QUADPACK's `qk21`.

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
    0.123_491_976_262_065_851_077_600_525_478_618,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    // set once the interval is too small to split
    exhausted: bool,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        // exhausted pieces sink so the heap top is always splittable if any is
        (!self.exhausted, self.error)
            .partial_cmp(&(!other.exhausted, other.error))
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_g = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let ah = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * ah, res_asc * ah);
    (res_k * half, err)
}

/// Integrates `f` over the finite interval spanned by `points`, which must be
/// sorted; interior points become forced breakpoints.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], tol: Tolerance) -> Result<Integral> {
    if points.len() < 2 {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("integration bounds must be finite: [{a}, {b}]")));
        }
        if b <= a {
            continue;
        }
        let (value, error) = kronrod21(&mut f, a, b);
        evaluations += 21;
        heap.push(Piece {
            a,
            b,
            value,
            error,
            exhausted: false,
        });
    }

    loop {
        let (total, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !total.is_finite() {
            return Err(Error::Numerical {
                message: "integrand produced a non-finite value".into(),
                estimate: total,
            });
        }
        let target = tol.abs.max(tol.rel * total.abs());
        if err <= target {
            return Ok(Integral {
                value: total,
                abs_error: err,
                evaluations,
            });
        }
        let top_splittable = heap.peek().map(|p| !p.exhausted).unwrap_or(false);
        if heap.len() >= tol.max_intervals || !top_splittable {
            // roundoff-limited: report the estimate if it is within reach
            if err <= 100.0 * target || !top_splittable && err <= 1e3 * target {
                return Ok(Integral {
                    value: total,
                    abs_error: err,
                    evaluations,
                });
            }
            return Err(Error::Numerical {
                message: format!(
                    "adaptive quadrature stalled with error {err:e} above target {target:e}"
                ),
                estimate: total,
            });
        }
        let piece = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (piece.a + piece.b);
        let tiny = (piece.b - piece.a) <= 1e3 * f64::EPSILON * piece.a.abs().max(piece.b.abs()).max(f64::MIN_POSITIVE);
        if tiny || mid <= piece.a || mid >= piece.b {
            heap.push(Piece {
                exhausted: true,
                ..piece
            });
            continue;
        }
        let (v1, e1) = kronrod21(&mut f, piece.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, piece.b);
        evaluations += 42;
        heap.push(Piece {
            a: piece.a,
            b: mid,
            value: v1,
            error: e1,
            exhausted: false,
        });
        heap.push(Piece {
            a: mid,
            b: piece.b,
            value: v2,
            error: e2,
            exhausted: false,
        });
    }
}
