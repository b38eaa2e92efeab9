//! Adaptive Gauss–Kronrod (7/15) integration on finite intervals and half-lines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

/// Geometric breakpoints seeded on half-lines, in units of `scale`: 1, 2, 4, ...
const TAIL_DOUBLINGS: u32 = 7;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[a, b]`.
    Finite(f64, f64),
    /// `[start, ∞)` mapped through `x = start + scale·t/(1 − t)`, `t ∈ [0, 1)`.
    HalfLine { start: f64, scale: f64 },
}

impl Domain {
    pub fn half_line(start: f64) -> Self {
        Domain::HalfLine { start, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Converts a non-converged result into an error.
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                value: self.value,
                abs_error: self.abs_error_estimate,
                evaluations: self.evaluations,
            })
        }
    }
}

/// Integration settings. `tol` is an absolute tolerance on the total error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub tol: f64,
    pub max_evals: usize,
    pub initial_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_evals: DEFAULT_MAX_EVALS,
            initial_intervals: 1,
        }
    }
}

/// Integrates `f` over `domain` with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Domain, tol: f64) -> QuadratureResult {
    Quadrature {
        tol,
        ..Quadrature::default()
    }
    .integrate(f, domain)
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

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    (value, err)
}

/// Halves of `[a, b]`, each with error at least half the change from the
/// parent estimate `parent`.
fn split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, parent: f64) -> Option<[Segment; 2]> {
    let mid = 0.5 * (a + b);
    if mid <= a.min(b) || mid >= a.max(b) {
        return None;
    }
    let (v1, e1) = gk15(f, a, mid);
    let (v2, e2) = gk15(f, mid, b);
    let drift = 0.5 * (parent - (v1 + v2)).abs();
    Some([
        Segment {
            a,
            b: mid,
            value: v1,
            error: e1.max(drift),
        },
        Segment {
            a: mid,
            b,
            value: v2,
            error: e2.max(drift),
        },
    ])
}

impl Quadrature {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, domain: Domain) -> QuadratureResult {
        match domain {
            Domain::Finite(a, b) => self.adaptive(&f, a, b),
            Domain::HalfLine { start, scale } => {
                let g = |t: f64| {
                    let one_minus = 1.0 - t;
                    if one_minus <= 0.0 {
                        return 0.0;
                    }
                    let x = start + scale * t / one_minus;
                    if x.is_finite() {
                        f(x) * scale / (one_minus * one_minus)
                    } else {
                        0.0
                    }
                };
                // Initial panels cover x - start in [0, scale], [scale, 2 scale],
                // [2 scale, 4 scale], ... so no panel starts out spanning many
                // decay lengths.
                let mut breaks: Vec<f64> = (0..=TAIL_DOUBLINGS).map(|k| {
                    let u = if k == 0 { 0.0 } else { (1u64 << (k - 1)) as f64 };
                    u / (1.0 + u)
                }).collect();
                breaks.push(1.0);
                let mut r = self.adaptive_from(&g, &breaks);
                // Mass beyond the last representable t is invisible to the rule;
                // estimate it from the decay rate between two far points.
                let far = start + scale * (1.0 - f64::EPSILON) / f64::EPSILON;
                let mid = start + 0.5 * (far - start);
                let (f_far, f_mid) = (f(far).abs(), f(mid).abs());
                r.evaluations += 2;
                let tail = if f_far == 0.0 {
                    0.0
                } else {
                    let rate = (f_mid / f_far).ln() / (far - mid);
                    if rate > 0.0 {
                        f_far / rate
                    } else {
                        f64::INFINITY
                    }
                };
                if tail.is_nan() {
                    r.abs_error_estimate = f64::INFINITY;
                } else {
                    r.abs_error_estimate += tail;
                }
                r.converged = r.converged && r.abs_error_estimate <= self.tol;
                r
            }
        }
    }

    /// Integrates over `[points[0], points[last]]`, subdividing at every
    /// interior point, plus an optional half-line tail from the last point.
    pub fn integrate_pieces<F: Fn(f64) -> f64>(
        &self,
        f: F,
        points: &[f64],
        tail_scale: Option<f64>,
    ) -> QuadratureResult {
        let pieces = points.len().saturating_sub(1) + usize::from(tail_scale.is_some());
        let share = Quadrature {
            tol: self.tol / pieces.max(1) as f64,
            max_evals: self.max_evals / pieces.max(1),
            initial_intervals: self.initial_intervals,
        };
        let mut total = QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
        let mut add = |r: QuadratureResult| {
            total.value += r.value;
            total.abs_error_estimate += r.abs_error_estimate;
            total.evaluations += r.evaluations;
            total.converged &= r.converged;
        };
        for w in points.windows(2) {
            if w[1] > w[0] {
                add(share.integrate(&f, Domain::Finite(w[0], w[1])));
            }
        }
        if let (Some(scale), Some(&last)) = (tail_scale, points.last()) {
            add(share.integrate(&f, Domain::HalfLine { start: last, scale }));
        }
        total
    }

    fn adaptive<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> QuadratureResult {
        self.adaptive_from(f, &[a, b])
    }

    /// Adaptive integration over `[breaks[0], breaks[last]]`, starting from
    /// `initial_intervals` equal panels between each pair of breakpoints.
    fn adaptive_from<F: Fn(f64) -> f64>(&self, f: &F, breaks: &[f64]) -> QuadratureResult {
        if breaks.first() == breaks.last() {
            return QuadratureResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                evaluations: 0,
                converged: true,
            };
        }
        let n0 = self.initial_intervals.max(1);
        let mut panels = Vec::with_capacity(n0 * breaks.len());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            for i in 0..n0 {
                let lo = a + (b - a) * i as f64 / n0 as f64;
                let hi = if i + 1 == n0 {
                    b
                } else {
                    a + (b - a) * (i + 1) as f64 / n0 as f64
                };
                panels.push((lo, hi));
            }
        }
        let mut heap = BinaryHeap::with_capacity(64);
        let mut evaluations = 0;
        let mut err_total = 0.0;
        // Every segment is born from a split, so its error carries both the
        // Kronrod-Gauss gap and the disagreement with its parent panel.
        for (lo, hi) in panels {
            let (value, error) = gk15(f, lo, hi);
            evaluations += 15;
            match split(f, lo, hi, value) {
                Some(children) => {
                    evaluations += 30;
                    for c in children {
                        err_total += c.error;
                        heap.push(c);
                    }
                }
                None => {
                    err_total += error;
                    heap.push(Segment {
                        a: lo,
                        b: hi,
                        value,
                        error,
                    });
                }
            }
        }
        while err_total > self.tol && evaluations + 30 <= self.max_evals {
            let Some(worst) = heap.pop() else { break };
            let Some(children) = split(f, worst.a, worst.b, worst.value) else {
                // Interval cannot be split further in floating point.
                heap.push(worst);
                break;
            };
            evaluations += 30;
            err_total -= worst.error;
            for c in children {
                err_total += c.error;
                heap.push(c);
            }
        }
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        QuadratureResult {
            value,
            abs_error_estimate: error,
            evaluations,
            converged: error <= self.tol && value.is_finite(),
        }
    }
}
