use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Deserialize;

use crate::error::{Error, Result};

/// An integration or bracketing domain. Either endpoint may be infinite
/// (`lo = -inf` or `hi = +inf`); the remaining endpoint must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "(f64, f64)")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan()
            || hi.is_nan()
            || !(lo < hi)
            || lo == f64::INFINITY
            || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidParameter(format!(
                "interval needs lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Intersection with another interval, if it has positive length.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = Error;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [0.0; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

/// Adaptive Gauss-Kronrod (7/15) integrator with global error control.
///
/// The domain is first cut at the supplied break points, so no panel ever
/// straddles a kink or a jump of the integrand. Infinite pieces are mapped to
/// `(0, 1]` by `x = a + (1 - t)/t` (and its mirror image).
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_segments: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: super::QUAD_TOL,
            abs_tol: 1e-300,
            max_segments: 2000,
        }
    }
}

impl Quadrature {
    pub fn with_tolerance(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F>(&self, mut f: F, domain: Interval, breaks: &[f64]) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        let mut cuts: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|b| domain.contains(*b))
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut knots = Vec::with_capacity(cuts.len() + 3);
        knots.push(domain.lo);
        if domain.lo.is_infinite() && domain.hi.is_infinite() && cuts.is_empty() {
            knots.push(0.0);
        }
        knots.extend(cuts);
        knots.push(domain.hi);

        // Every piece becomes a finite panel in its own coordinate.
        let mut heap = BinaryHeap::new();
        let mut pieces = Vec::new();
        for (k, w) in knots.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let map = if a.is_finite() && b.is_finite() {
                Map::Identity
            } else if a.is_finite() {
                Map::Upper(a)
            } else {
                Map::Lower(b)
            };
            let (lo, hi) = match map {
                Map::Identity => (a, b),
                _ => (0.0, 1.0),
            };
            pieces.push(map);
            let seg = gauss_kronrod_15(&mut |t| map.eval(&mut f, t), lo, hi);
            heap.push(Tagged { piece: k, seg });
        }

        let mut finished: Vec<Tagged> = Vec::new();
        let mut value: f64 = heap.iter().map(|t| t.seg.value).sum();
        let mut error: f64 = heap.iter().map(|t| t.seg.error).sum();
        loop {
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            if heap.len() + finished.len() + 2 > self.max_segments {
                let total: f64 = heap
                    .iter()
                    .chain(finished.iter())
                    .map(|t| t.seg.value)
                    .sum::<f64>()
                    + worst.seg.value;
                return Err(Error::NonConvergence {
                    lo: domain.lo,
                    hi: domain.hi,
                    intervals: heap.len() + finished.len() + 1,
                    estimate: total,
                    error_estimate: error,
                });
            }
            let Tagged { piece, seg } = worst;
            let mid = 0.5 * (seg.lo + seg.hi);
            if !(seg.lo < mid && mid < seg.hi) {
                // Panel at the resolution limit of f64; nothing more to gain.
                finished.push(worst);
                error -= seg.error;
                continue;
            }
            let map = pieces[piece];
            let left = gauss_kronrod_15(&mut |t| map.eval(&mut f, t), seg.lo, mid);
            let right = gauss_kronrod_15(&mut |t| map.eval(&mut f, t), mid, seg.hi);
            value += left.value + right.value - seg.value;
            error += left.error + right.error - seg.error;
            heap.push(Tagged { piece, seg: left });
            heap.push(Tagged { piece, seg: right });
        }

        let mut all: Vec<Tagged> = heap.into_vec();
        all.extend(finished);
        all.sort_by(|a, b| a.piece.cmp(&b.piece).then(a.seg.lo.total_cmp(&b.seg.lo)));
        Ok(all.iter().map(|t| t.seg.value).sum())
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    Upper(f64),
    Lower(f64),
}

impl Map {
    fn eval<F: FnMut(f64) -> f64>(&self, f: &mut F, t: f64) -> f64 {
        match *self {
            Map::Identity => f(t),
            Map::Upper(a) => {
                let x = a + (1.0 - t) / t;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v / (t * t)
                }
            }
            Map::Lower(b) => {
                let x = b - (1.0 - t) / t;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v / (t * t)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Tagged {
    seg: Segment,
    piece: usize,
}

/// Integrate `f` over `domain` to relative tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, domain: Interval, tol: f64) -> Result<f64> {
    Quadrature::with_tolerance(tol, 1e-300).integrate(f, domain, &[])
}

/// Like [`integrate`], splitting the domain at `breaks` first.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    f: F,
    domain: Interval,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    Quadrature::with_tolerance(tol, 1e-300).integrate(f, domain, breaks)
}
