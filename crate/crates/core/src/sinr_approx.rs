//! Second-order Taylor surrogate of the mean SINR,
//! `Γ̂ = E[γ_srd]/E[γ_v] + V[γ_v] E[γ_srd]/E[γ_v]³`, and the moments feeding it.

use std::f64::consts::PI;

use crate::channel::{LinkClass, SystemParams};
use crate::error::{Error, Result};
use crate::stats::{alternating_sums, antenna_weights, gumbel_moments, LinkStats};
use crate::topology::Topology;

/// Antenna count up to which [`MomentMode::Auto`] uses exact sums.
pub const AUTO_EXACT_MAX_ANTENNAS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentMode {
    /// Exact sums up to [`AUTO_EXACT_MAX_ANTENNAS`] antennas, Gumbel above.
    #[default]
    Auto,
    /// Exact moments of `1 + max` of exponentials.
    ExactSum,
    /// Large-M extreme-value approximation.
    Gumbel,
    /// Printed moment sums (integrated from zero with `e^{m/α_bd}` factors);
    /// for regression checks only.
    PaperVerbatim,
}

impl MomentMode {
    pub fn resolve(self, m_antennas: usize) -> Self {
        match self {
            MomentMode::Auto if m_antennas <= AUTO_EXACT_MAX_ANTENNAS => MomentMode::ExactSum,
            MomentMode::Auto => MomentMode::Gumbel,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSurrogate {
    pub value: f64,
    pub mean_srd: f64,
    pub mean_v: f64,
    pub var_v: f64,
    pub moment_mode: MomentMode,
}

/// `E[γ_srd] = γ̄_s E[(|h_sd| + X)²] = γ̄_s(β_sd + √(πβ_sd) μ + μ² + σ²)`.
pub fn mean_gamma_srd(ls: &LinkStats) -> f64 {
    let cross = (PI * ls.beta_sd).sqrt() * ls.mu;
    ls.gamma_bar_s * (ls.beta_sd + cross + ls.mu * ls.mu + ls.sigma2)
}

/// Printed form `γ̄_s β_sd(1 + Nαπ√(πβ_srβ_rd)/(4√β_sd) + N²α²β_srβ_rd/β_sd)`,
/// which replaces `μ² + σ²` by `N²α²β_srβ_rd`.
pub fn mean_gamma_srd_verbatim(ls: &LinkStats) -> f64 {
    let n = ls.n_elements as f64;
    let a = ls.element_amplitude;
    let bb = ls.beta_sr * ls.beta_rd;
    ls.gamma_bar_s
        * ls.beta_sd
        * (1.0 + n * a * PI * (PI * bb).sqrt() / (4.0 * ls.beta_sd.sqrt())
            + n * n * a * a * bb / ls.beta_sd)
}

fn verbatim_sums(alpha_bd: f64, m_antennas: usize) -> Result<(f64, f64)> {
    if m_antennas as f64 / alpha_bd > 700.0 {
        return Err(Error::Conditioning(format!(
            "verbatim moment sums overflow: e^(M/alpha_bd) with M/alpha_bd = {}",
            m_antennas as f64 / alpha_bd
        )));
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    for (i, c) in antenna_weights(m_antennas).into_iter().enumerate() {
        let m = (i + 1) as f64;
        let e = (m / alpha_bd).exp();
        s1 += c * e / m;
        s2 += c * e / (m * m);
    }
    Ok((s1, s2))
}

/// `(E[γ_v], V[γ_v])` under the requested moment mode.
pub fn mean_var_gamma_v(alpha_bd: f64, m_antennas: usize, mode: MomentMode) -> Result<(f64, f64)> {
    if m_antennas == 0 {
        return Err(Error::Domain("at least one BS antenna is required".into()));
    }
    match mode.resolve(m_antennas) {
        MomentMode::ExactSum => {
            let (s1, s2) = alternating_sums(m_antennas)?;
            let mean = 1.0 + alpha_bd * s1;
            Ok((mean, alpha_bd * alpha_bd * (2.0 * s2 - s1 * s1)))
        }
        MomentMode::Gumbel => Ok(gumbel_moments(m_antennas, alpha_bd)),
        MomentMode::PaperVerbatim => {
            let (s1, s2) = verbatim_sums(alpha_bd, m_antennas)?;
            let mean = alpha_bd * s1;
            let second = 2.0 * alpha_bd * alpha_bd * s2;
            Ok((mean, second - mean * mean))
        }
        MomentMode::Auto => unreachable!("resolved above"),
    }
}

/// Three-term Taylor assembly; the covariance term vanishes by independence.
pub fn three_term(mean_srd: f64, mean_v: f64, var_v: f64) -> f64 {
    mean_srd / mean_v + var_v * mean_srd / mean_v.powi(3)
}

/// Surrogate from precomputed link statistics.
pub fn sinr_hat_from_stats(ls: &LinkStats, mode: MomentMode) -> Result<SinrSurrogate> {
    let resolved = mode.resolve(ls.n_antennas);
    let (mean_v, var_v) = mean_var_gamma_v(ls.alpha_bd, ls.n_antennas, resolved)?;
    let mean_srd = mean_gamma_srd(ls);
    Ok(SinrSurrogate {
        value: three_term(mean_srd, mean_v, var_v),
        mean_srd,
        mean_v,
        var_v,
        moment_mode: resolved,
    })
}

/// Surrogate mean SINR at placement `d` and transmit power `p_s`.
pub fn sinr_hat(
    d: f64,
    p_s: f64,
    topo: &Topology,
    params: &SystemParams,
    mode: MomentMode,
) -> Result<SinrSurrogate> {
    sinr_hat_from_stats(&LinkStats::new(params, topo, d, p_s)?, mode)
}

/// Fully expanded closed form of the surrogate with the verbatim moments,
/// written in terms of distances. `g` is the reference gain on local links,
/// so `β_sd = g (d₀/d_sd)^η`; with `g = 1` this is the boxed expression.
pub fn sinr_hat_boxed(d: f64, p_s: f64, topo: &Topology, params: &SystemParams) -> Result<f64> {
    let ls = LinkStats::new(params, topo, d, p_s)?;
    let g = params.ref_gain(LinkClass::Local);
    let eta = params.path_loss_exponent;
    let d0e = params.ref_distance.powf(eta);
    let dsde = topo.d_sd.powf(eta);
    let n = params.n_elements as f64;
    let a = params.element_amplitude;
    let bb = ls.beta_sr * ls.beta_rd;
    let lead = 2.0 * p_s * g * d0e / (params.p_b * dsde);
    let bracket = 1.0 + n * a * PI * (PI * dsde * bb).sqrt() / (4.0 * (g * d0e).sqrt())
        + n * n * a * a * dsde * bb / (g * d0e);
    let expo = params.noise_power / (params.p_b * ls.beta_bd);
    if params.n_antennas as f64 * expo > 700.0 {
        return Err(Error::Conditioning("boxed expression overflows".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (i, c) in antenna_weights(params.n_antennas).into_iter().enumerate() {
        let m = (i + 1) as f64;
        let e = (m * expo).exp();
        let r = m / ls.beta_bd;
        num += c * e / (r * r);
        den += c * e / r;
    }
    Ok(lead * bracket * num / den.powi(3))
}
