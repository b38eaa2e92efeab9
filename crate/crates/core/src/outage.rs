//! Outage probability `P[Γ_d ≤ γ_th]`: closed form through the
//! `A₁, A₂, B₁, B₂` decomposition, quadrature of the defining integrals, and
//! the uncorrected closed forms kept for audit in [`verbatim`].
//!
//! The closed form works in `u = √(γ_th x/γ̄_s)`. With
//! `κ_m = m γ̄_s/(α_bd γ_th)` the density of `γ_v` becomes
//! `Σ c_m κ_m 2u e^{−κ_m(u² − u₁²)}` on `u ≥ u₁ = √(γ_th/γ̄_s)`, and every
//! constituent reduces to integrals of `2u e^{−(au² + 2bu + c)}`.

use std::f64::consts::PI;

use libm::erfc;

use crate::channel::DirectLink;
use crate::error::{Error, Result};
use crate::quadrature::{Quadrature, QuadratureResult};
use crate::stats::{
    antenna_weights, cdf_gamma_srd, cdf_gamma_v, erfcx, pdf_gamma_v, q_approx, q_series_sum,
    LinkStats, Q_SERIES_C, Q_SERIES_P,
};

/// Antenna count above which the alternating closed form is refused.
pub const MAX_CLOSED_FORM_ANTENNAS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageMode {
    WithDirect,
    NoDirect,
}

impl From<DirectLink> for OutageMode {
    fn from(d: DirectLink) -> Self {
        match d {
            DirectLink::Present => OutageMode::WithDirect,
            DirectLink::Absent => OutageMode::NoDirect,
        }
    }
}

/// How an outage value is obtained by callers that do not care about the
/// decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutageMethod {
    /// Closed form up to [`MAX_CLOSED_FORM_ANTENNAS`], quadrature above.
    #[default]
    Auto,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageBreakdown {
    /// Outage probability clamped to `[0, 1]`.
    pub p_out: f64,
    /// Assembled value before clamping.
    pub p_out_raw: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    /// `1 − ω(A₁ + A₂)`.
    pub a_total: f64,
    /// `B₁ − B₂`.
    pub b_total: f64,
    pub mode: OutageMode,
}

impl OutageBreakdown {
    fn assemble(ls: &LinkStats, a1: f64, a2: f64, b1: f64, b2: f64) -> Self {
        let mode = OutageMode::from(ls.direct);
        let a_total = 1.0 - ls.omega * (a1 + a2);
        let b_total = b1 - b2;
        let raw = match mode {
            OutageMode::WithDirect => a_total - ls.direct_weight() * b_total,
            OutageMode::NoDirect => a_total,
        };
        Self {
            p_out: raw.clamp(0.0, 1.0),
            p_out_raw: raw,
            a1,
            a2,
            b1,
            b2,
            a_total,
            b_total,
            mode,
        }
    }

    fn certain(ls: &LinkStats) -> Self {
        Self {
            p_out: 1.0,
            p_out_raw: 1.0,
            a1: 0.0,
            a2: 0.0,
            b1: 0.0,
            b2: 0.0,
            a_total: 1.0,
            b_total: 0.0,
            mode: ls.direct.into(),
        }
    }
}

/// `∫_lo^∞ 2u e^{−(au² + 2bu + c)} du` for `a > 0`.
fn gauss_tail(a: f64, b: f64, c: f64, lo: f64) -> f64 {
    if lo == f64::INFINITY {
        return 0.0;
    }
    let z = (a * lo + b) / a.sqrt();
    let k = b * (PI / a).sqrt();
    if z >= 0.0 {
        (-(a * lo * lo + 2.0 * b * lo + c)).exp() / a * (1.0 - k * erfcx(z))
    } else {
        (b * b / a - c).exp() / a * ((-z * z).exp() - k * erfc(z))
    }
}

fn gauss_span(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        0.0
    } else {
        gauss_tail(a, b, c, lo) - gauss_tail(a, b, c, hi)
    }
}

/// A quadratic exponent `a u² + 2 b u + c` before the γ_v factor is applied.
#[derive(Clone, Copy)]
struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
}

impl Quadratic {
    /// `w (u − μ)²`.
    fn centered(w: f64, mu: f64) -> Self {
        Self {
            a: w,
            b: -w * mu,
            c: w * mu * mu,
        }
    }
}

struct Kernel {
    u1: f64,
    /// `(c_m, κ_m)` pairs.
    terms: Vec<(f64, f64)>,
}

impl Kernel {
    fn new(ls: &LinkStats) -> Self {
        let weights = antenna_weights(ls.n_antennas);
        let base = ls.gamma_bar_s / (ls.alpha_bd * ls.sinr_threshold);
        Self {
            u1: (ls.sinr_threshold / ls.gamma_bar_s).sqrt(),
            terms: weights
                .into_iter()
                .enumerate()
                .map(|(i, c)| (c, (i + 1) as f64 * base))
                .collect(),
        }
    }

    /// `Σ_m c_m κ_m ∫_lo^hi 2u e^{−q(u) − κ_m(u² − u₁²)} du`.
    fn integrate(&self, q: Quadratic, lo: f64, hi: f64) -> f64 {
        let u1sq = self.u1 * self.u1;
        self.terms
            .iter()
            .map(|&(c, kappa)| c * kappa * gauss_span(q.a + kappa, q.b, q.c - kappa * u1sq, lo, hi))
            .sum()
    }
}

fn check_closed_form(ls: &LinkStats) -> Result<()> {
    if ls.n_antennas > MAX_CLOSED_FORM_ANTENNAS {
        return Err(Error::Conditioning(format!(
            "closed-form outage supports at most {MAX_CLOSED_FORM_ANTENNAS} antennas, got {}",
            ls.n_antennas
        )));
    }
    if !(ls.sigma2 > 0.0) {
        return Err(Error::Domain(
            "closed-form outage needs at least one active RIS element".into(),
        ));
    }
    if !(ls.sinr_threshold > 0.0 && ls.gamma_bar_s > 0.0 && ls.alpha_bd > 0.0) {
        return Err(Error::Domain(
            "closed-form outage needs positive threshold, transmit SNR and interference scale".into(),
        ));
    }
    Ok(())
}

fn require_direct(ls: &LinkStats) -> Result<()> {
    match ls.direct {
        DirectLink::Present => Ok(()),
        DirectLink::Absent => Err(Error::InvalidMode(
            "B constituents exist only with a direct link".into(),
        )),
    }
}

/// Series part of `∫ Q̃((u−μ)/σ) f` over `u ≥ lo`.
fn a_series(ls: &LinkStats, k: &Kernel, lo: f64) -> f64 {
    Q_SERIES_C
        .iter()
        .zip(Q_SERIES_P)
        .map(|(&c, p)| c * k.integrate(Quadratic::centered(p / ls.sigma2, ls.mu), lo, f64::INFINITY))
        .sum()
}

/// `A₁ = ∫_{x ≥ max(1, x₀)} Q̃((√(γ_th x/γ̄_s) − μ)/σ) f_{γ_v}(x) dx`,
/// `x₀ = μ²γ̄_s/γ_th`.
pub fn compute_a1(ls: &LinkStats) -> Result<f64> {
    check_closed_form(ls)?;
    let k = Kernel::new(ls);
    Ok(a_series(ls, &k, k.u1.max(ls.mu)))
}

/// `A₂ = ∫_1^{x₀} (1 − Q̃(·)) f_{γ_v}(x) dx`, via `A₁ + F_{γ_v}(x₀) − T` where
/// `T` is the series integral over the whole support.
pub fn compute_a2(ls: &LinkStats, a1: f64) -> Result<f64> {
    check_closed_form(ls)?;
    let k = Kernel::new(ls);
    if ls.mu <= k.u1 {
        return Ok(0.0);
    }
    let x0 = ls.mu * ls.mu * ls.gamma_bar_s / ls.sinr_threshold;
    let full = a_series(ls, &k, k.u1);
    Ok(a1 + cdf_gamma_v(x0, ls.alpha_bd, ls.n_antennas) - full)
}

fn b_envelope(ls: &LinkStats) -> f64 {
    1.0 / (2.0 * ls.sigma2 + ls.beta_sd)
}

/// `B₁ = ∫ e^{−(u−μ)²/(2σ²+β_sd)} (1 − Q̃(z₁)) f_{γ_v} dx` with
/// `z₁ = √(2/a_t)(u/β_sd + μ/(2σ²)) ≥ 0`.
pub fn compute_b1(ls: &LinkStats) -> Result<f64> {
    check_closed_form(ls)?;
    require_direct(ls)?;
    let k = Kernel::new(ls);
    let g = b_envelope(ls);
    let base = Quadratic::centered(g, ls.mu);
    let mut total = k.integrate(base, k.u1, f64::INFINITY);
    // p z₁² = (2p/a_t)(u²/β² + uμ/(βσ²) + μ²/(4σ⁴))
    let (b, s2, at) = (ls.beta_sd, ls.sigma2, ls.a_t);
    for (&c, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
        let q = Quadratic {
            a: base.a + 2.0 * p / (at * b * b),
            b: base.b + p * ls.mu / (at * b * s2),
            c: base.c + p * ls.mu * ls.mu / (2.0 * at * s2 * s2),
        };
        total -= c * k.integrate(q, k.u1, f64::INFINITY);
    }
    Ok(total)
}

/// `B₂ = ∫ e^{−(u−μ)²/(2σ²+β_sd)} Q̃(z₂) f_{γ_v} dx` with
/// `z₂ = √(2/a_t)(u − μ)/(2σ²)`, split at `u = μ`.
pub fn compute_b2(ls: &LinkStats) -> Result<f64> {
    check_closed_form(ls)?;
    require_direct(ls)?;
    let k = Kernel::new(ls);
    let g = b_envelope(ls);
    let split = k.u1.max(ls.mu);
    let mut total = k.integrate(Quadratic::centered(g, ls.mu), k.u1, split);
    for (&c, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
        let w = g + p / (2.0 * ls.a_t * ls.sigma2 * ls.sigma2);
        let q = Quadratic::centered(w, ls.mu);
        total += c * (k.integrate(q, split, f64::INFINITY) - k.integrate(q, k.u1, split));
    }
    Ok(total)
}

/// Closed-form outage probability with its constituents.
pub fn outage_probability(ls: &LinkStats) -> Result<OutageBreakdown> {
    if ls.gamma_bar_s == 0.0 {
        return Ok(OutageBreakdown::certain(ls));
    }
    let a1 = compute_a1(ls)?;
    let a2 = compute_a2(ls, a1)?;
    let (b1, b2) = match ls.direct {
        DirectLink::Present => (compute_b1(ls)?, compute_b2(ls)?),
        DirectLink::Absent => (0.0, 0.0),
    };
    Ok(OutageBreakdown::assemble(ls, a1, a2, b1, b2))
}

/// Breakpoints in `x` (the γ_v axis) where the outage integrands change
/// character: the transition of the γ_srd CDF and the bulk of the γ_v density.
fn x_breakpoints(ls: &LinkStats) -> Vec<f64> {
    let to_x = |u: f64| ls.gamma_bar_s * u * u / ls.sinr_threshold;
    let sigma = ls.sigma();
    let width = (2.0 * ls.sigma2 + ls.beta_sd).sqrt().max(sigma);
    let mut pts = vec![1.0];
    for s in [-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0] {
        for w in [sigma, width] {
            let u = ls.mu + s * w;
            if u > 0.0 {
                pts.push(to_x(u));
            }
        }
    }
    let h: f64 = (1..=ls.n_antennas).map(|k| 1.0 / k as f64).sum();
    for s in [0.25, 1.0, h, h + 4.0, h + 16.0, h + 48.0] {
        pts.push(1.0 + ls.alpha_bd * s);
    }
    pts.retain(|x| x.is_finite() && *x >= 1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    pts
}

fn integrate_x<F: Fn(f64) -> f64>(ls: &LinkStats, q: &Quadrature, lo: f64, hi: f64, f: F) -> QuadratureResult {
    let mut pts: Vec<f64> = x_breakpoints(ls)
        .into_iter()
        .filter(|&x| x > lo && x < hi)
        .collect();
    pts.insert(0, lo);
    if hi.is_finite() {
        pts.push(hi);
        q.integrate_pieces(f, &pts, None)
    } else {
        q.integrate_pieces(f, &pts, Some(ls.alpha_bd))
    }
}

/// Quadrature of `∫_1^∞ F_{γ_srd}(γ_th x) f_{γ_v}(x) dx` with the exact
/// Q-function, returning the raw quadrature result.
pub fn outage_quadrature(ls: &LinkStats, q: &Quadrature) -> QuadratureResult {
    let th = ls.sinr_threshold;
    let (alpha, m) = (ls.alpha_bd, ls.n_antennas);
    integrate_x(ls, q, 1.0, f64::INFINITY, |x| {
        cdf_gamma_srd(th * x, ls).unwrap_or(f64::NAN) * pdf_gamma_v(x, alpha, m)
    })
}

/// Outage probability by adaptive quadrature of the defining integral.
pub fn outage_by_quadrature(ls: &LinkStats) -> Result<f64> {
    if ls.gamma_bar_s == 0.0 {
        return Ok(1.0);
    }
    if !(ls.gamma_bar_s > 0.0 && ls.alpha_bd > 0.0 && ls.sinr_threshold > 0.0) {
        return Err(Error::Domain(
            "quadrature outage needs positive transmit SNR, interference scale and threshold".into(),
        ));
    }
    let q = Quadrature {
        tol: 1e-10,
        ..Quadrature::default()
    };
    outage_quadrature(ls, &q).into_result().map(|p| p.clamp(0.0, 1.0))
}

/// Outage probability by the requested method.
pub fn evaluate_outage(ls: &LinkStats, method: OutageMethod) -> Result<f64> {
    match method {
        OutageMethod::ClosedForm => outage_probability(ls).map(|b| b.p_out),
        OutageMethod::Quadrature => outage_by_quadrature(ls),
        OutageMethod::Auto if ls.n_antennas <= MAX_CLOSED_FORM_ANTENNAS && ls.sigma2 > 0.0 => {
            outage_probability(ls).map(|b| b.p_out)
        }
        OutageMethod::Auto => outage_by_quadrature(ls),
    }
}

/// The four constituents by quadrature of their defining integrals over
/// `x` (same series `Q̃` as the closed form, no closed-form algebra).
pub fn constituents_by_quadrature(ls: &LinkStats, q: &Quadrature) -> Result<OutageBreakdown> {
    if !(ls.sigma2 > 0.0 && ls.gamma_bar_s > 0.0) {
        return Err(Error::Domain("constituents need sigma2 > 0 and gamma_bar_s > 0".into()));
    }
    let (mu, sigma) = (ls.mu, ls.sigma());
    let (alpha, m) = (ls.alpha_bd, ls.n_antennas);
    let u = |x: f64| (ls.sinr_threshold * x / ls.gamma_bar_s).sqrt();
    let f = |x: f64| pdf_gamma_v(x, alpha, m);
    let x0 = mu * mu * ls.gamma_bar_s / ls.sinr_threshold;
    let split = x0.max(1.0);
    let a1 = integrate_x(ls, q, split, f64::INFINITY, |x| {
        q_series_sum((u(x) - mu) / sigma) * f(x)
    })
    .into_result()?;
    let a2 = integrate_x(ls, q, 1.0, split, |x| {
        (1.0 - q_series_sum((u(x) - mu) / sigma)) * f(x)
    })
    .into_result()?;
    let (b1, b2) = match ls.direct {
        DirectLink::Present => {
            let d = 2.0 * ls.sigma2 + ls.beta_sd;
            let r = (2.0 / ls.a_t).sqrt();
            let env = |x: f64| (-(u(x) - mu).powi(2) / d).exp();
            let b1 = integrate_x(ls, q, 1.0, f64::INFINITY, |x| {
                let z1 = r * (u(x) / ls.beta_sd + mu / (2.0 * ls.sigma2));
                env(x) * (1.0 - q_approx(z1)) * f(x)
            })
            .into_result()?;
            let b2 = integrate_x(ls, q, 1.0, f64::INFINITY, |x| {
                let z2 = r * (u(x) - mu) / (2.0 * ls.sigma2);
                env(x) * q_approx(z2) * f(x)
            })
            .into_result()?;
            (b1, b2)
        }
        DirectLink::Absent => (0.0, 0.0),
    };
    Ok(OutageBreakdown::assemble(ls, a1, a2, b1, b2))
}

/// Uncorrected closed forms, kept verbatim. They omit the
/// density weight `m/α_bd`, integrate the shifted γ_v density from zero and
/// carry a factor-two slip in `b_t2`; they are kept only so the discrepancy
/// against quadrature can be reported.
pub mod verbatim {
    use super::*;
    use crate::stats::exp_times_q;

    struct Common {
        scale: f64,
        weights: Vec<f64>,
        base_a: f64,
        m_over_alpha: Vec<f64>,
    }

    fn common(ls: &LinkStats) -> Common {
        let weights = antenna_weights(ls.n_antennas);
        let m_over_alpha = (1..=ls.n_antennas).map(|m| m as f64 / ls.alpha_bd).collect();
        Common {
            scale: ls.gamma_bar_s / ls.sinr_threshold,
            weights,
            base_a: ls.gamma_bar_s / (ls.alpha_bd * ls.sinr_threshold),
            m_over_alpha,
        }
    }

    /// `e^{−c}/a (1 − 2b√(π/a) e^{b²/a} Q(b√(2/a)))`.
    fn lower_term(a: f64, b: f64, c: f64) -> f64 {
        ((-c).exp() - 2.0 * b * (PI / a).sqrt() * exp_times_q(b * b / a - c, b * (2.0 / a).sqrt()))
            / a
    }

    fn a0b0c0(ls: &LinkStats, p: f64, m: usize, cm: &Common) -> (f64, f64, f64) {
        let a0 = p / ls.sigma2 + (m as f64) * cm.base_a;
        let b0 = -ls.mu * p / ls.sigma2;
        let c0 = ls.mu * ls.mu * p / ls.sigma2 - cm.m_over_alpha[m - 1];
        (a0, b0, c0)
    }

    pub fn a1(ls: &LinkStats) -> f64 {
        let cm = common(ls);
        let mu = ls.mu;
        let mut total = 0.0;
        for m in 1..=ls.n_antennas {
            for (&ck, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
                let (a0, b0, c0) = a0b0c0(ls, p, m, &cm);
                let head = (-c0 - (a0 * mu * mu + 2.0 * b0 * mu)).exp();
                let tail = 2.0
                    * b0
                    * (PI / a0).sqrt()
                    * exp_times_q(b0 * b0 / a0 - c0, (mu * a0 + b0) * (2.0 / a0).sqrt());
                total += cm.weights[m - 1] * ck * (head - tail) / a0;
            }
        }
        cm.scale * total
    }

    pub fn a2(ls: &LinkStats, a1: f64) -> f64 {
        let cm = common(ls);
        let gth = ls.sinr_threshold;
        let shifted = (1.0 - ((gth - ls.mu * ls.mu * ls.gamma_bar_s) / (ls.alpha_bd * gth)).exp())
            .powi(ls.n_antennas as i32);
        let mut sum = 0.0;
        for m in 1..=ls.n_antennas {
            for (&ck, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
                let (a0, b0, c0) = a0b0c0(ls, p, m, &cm);
                sum += cm.weights[m - 1] * ck * lower_term(a0, b0, c0);
            }
        }
        a1 + shifted - cm.scale * sum
    }

    struct BCoeffs {
        at1: f64,
        bt1: f64,
        ct1: f64,
    }

    fn bt1(ls: &LinkStats, m: usize, cm: &Common) -> BCoeffs {
        let d = 2.0 * ls.sigma2 + ls.beta_sd;
        BCoeffs {
            at1: 1.0 / d + (m as f64) * cm.base_a,
            bt1: -ls.mu / d,
            ct1: ls.mu * ls.mu / d - cm.m_over_alpha[m - 1],
        }
    }

    pub fn b1(ls: &LinkStats) -> f64 {
        let cm = common(ls);
        let d = 2.0 * ls.sigma2 + ls.beta_sd;
        let mut total = 0.0;
        for m in 1..=ls.n_antennas {
            let t = bt1(ls, m, &cm);
            let mut inner = lower_term(t.at1, t.bt1, t.ct1);
            for (&ck, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
                let at2 = t.at1 + 2.0 * p / (ls.a_t * ls.beta_sd * ls.beta_sd);
                let bt2 = t.bt1 + 4.0 * ls.mu * p / d;
                let ct2 = t.ct1 + ls.mu * ls.mu * p / (2.0 * ls.a_t * ls.sigma2 * ls.sigma2);
                inner -= ck * lower_term(at2, bt2, ct2);
            }
            total += cm.weights[m - 1] * inner;
        }
        cm.scale * total
    }

    pub fn b2(ls: &LinkStats) -> f64 {
        let cm = common(ls);
        let d = 2.0 * ls.sigma2 + ls.beta_sd;
        let mu = ls.mu;
        let mut total = 0.0;
        for m in 1..=ls.n_antennas {
            let t = bt1(ls, m, &cm);
            let (a, b, c) = (t.at1, t.bt1, t.ct1);
            let first = ((-c).exp() * (1.0 - (-(a * mu * mu + 2.0 * b * mu)).exp())
                - 2.0 * b * (PI / a).sqrt() * exp_times_q(b * b / a - c, b * (2.0 / a).sqrt()))
                / a;
            let mut second = 0.0;
            for (&ck, p) in Q_SERIES_C.iter().zip(Q_SERIES_P) {
                let ct2 = t.ct1 + mu * mu * p / (2.0 * ls.a_t * ls.sigma2 * ls.sigma2);
                let g = (ls.beta_sd * p + ls.sigma2) / (ls.sigma2 * d);
                let at3 = g + (m as f64) * cm.base_a;
                let bt3 = -mu * g;
                let lead = (-ct2).exp() * (2.0 * (-(at3 * mu * mu + 2.0 * bt3 * mu)).exp() - 1.0);
                let r = (2.0 / at3).sqrt();
                let e = bt3 * bt3 / at3 - ct2;
                let qs = 2.0 * exp_times_q(e, (mu * at3 + bt3) * r) - exp_times_q(e, bt3 * r);
                second += ck * (lead - 2.0 * bt3 * (PI / at3).sqrt() * qs) / at3;
            }
            total += cm.weights[m - 1] * (first + second);
        }
        cm.scale * total
    }

    /// Printed assembly `1 − ω(A₁ + A₂) − ω√β_sd/√(β_sd+2σ²)(B₁ − B₂)`.
    pub fn outage_probability(ls: &LinkStats) -> OutageBreakdown {
        let a1 = a1(ls);
        let a2 = a2(ls, a1);
        let (b1, b2) = match ls.direct {
            DirectLink::Present => (b1(ls), b2(ls)),
            DirectLink::Absent => (0.0, 0.0),
        };
        OutageBreakdown::assemble(ls, a1, a2, b1, b2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Domain};

    #[test]
    fn gauss_tail_matches_quadrature() {
        for &(a, b, c, lo) in &[
            (2.0f64, -3.0, 1.0, 0.5),
            (2.0, -3.0, 1.0, 2.5),
            (0.7, 0.4, -0.2, 0.1),
            (50.0, -10.0, 0.5, 0.05),
            (1e4, -1e2, 0.25, 0.2),
        ] {
            let exact = integrate(
                |u| 2.0 * u * (-(a * u * u + 2.0 * b * u + c)).exp(),
                Domain::HalfLine {
                    start: lo,
                    scale: 1.0 / a.sqrt(),
                },
                1e-14,
            )
            .value;
            let v = gauss_tail(a, b, c, lo);
            assert!((v - exact).abs() <= 1e-10 * exact.abs().max(1e-6), "{a} {b} {c} {lo}: {v} vs {exact}");
        }
    }

    #[test]
    fn gauss_span_is_additive() {
        let (a, b, c) = (3.0, -2.0, 0.4);
        let whole = gauss_span(a, b, c, 0.2, 3.0);
        let parts = gauss_span(a, b, c, 0.2, 0.9) + gauss_span(a, b, c, 0.9, 3.0);
        assert!((whole - parts).abs() < 1e-15);
        assert_eq!(gauss_span(a, b, c, 1.0, 0.5), 0.0);
    }
}
