//! Distributional building blocks: Q-function (exact and exponential-sum),
//! cascaded-channel moments, CDFs of X, Y and γ_srd, the density of γ_v and
//! its Gumbel asymptotics.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use libm::erfc;

use crate::channel::{path_loss, ris_betas, DirectLink, LinkClass, SystemParams};
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Euler–Mascheroni constant to ten decimal places.
pub const EULER_GAMMA: f64 = 0.577_215_664_9;

/// Weights `c_k` of the four-term exponential approximation of `Q`.
pub const Q_SERIES_C: [f64; 4] = [1.0 / 16.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0];
/// Exponents `p_k` of the four-term exponential approximation of `Q`.
pub const Q_SERIES_P: [f64; 4] = [0.5, 1.0, 10.0 / 3.0, 10.0 / 17.0];

/// Largest antenna count accepted by the exact-sum moment paths.
pub const MAX_EXACT_ANTENNAS: usize = 64;

/// Gaussian upper-tail probability `Q(x) = ½ erfc(x/√2)`.
pub fn q_exact(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Even part of the series, `Σ c_k e^{−p_k x²}`.
pub fn q_series_sum(x: f64) -> f64 {
    let x2 = x * x;
    Q_SERIES_C
        .iter()
        .zip(Q_SERIES_P)
        .map(|(c, p)| c * (-p * x2).exp())
        .sum()
}

/// Four-term exponential approximation of `Q`; `1 − Q̃(−x)` for negative `x`.
pub fn q_approx(x: f64) -> f64 {
    if x >= 0.0 {
        q_series_sum(x)
    } else {
        1.0 - q_series_sum(x)
    }
}

/// Scaled complementary error function `e^{z²} erfc(z)`.
pub fn erfcx(z: f64) -> f64 {
    if z < 25.0 {
        (z * z).exp() * erfc(z)
    } else {
        let w = 1.0 / (z * z);
        (1.0 - 0.5 * w * (1.0 - 1.5 * w * (1.0 - 2.5 * w))) / (z * PI.sqrt())
    }
}

/// `e^{e}·Q(x)` without intermediate overflow or underflow.
pub fn exp_times_q(e: f64, x: f64) -> f64 {
    if x > 0.0 {
        let z = x * FRAC_1_SQRT_2;
        0.5 * (e - z * z).exp() * erfcx(z)
    } else {
        e.exp() * q_exact(x)
    }
}

/// CLT moments `(μ, σ²)` of `X = Σ α|h_sr,n||h_rd,n|`.
pub fn clt_moments(n_elements: usize, amplitude: f64, beta_sr: f64, beta_rd: f64) -> (f64, f64) {
    let n = n_elements as f64;
    let bb = beta_sr * beta_rd;
    let mu = n * amplitude * PI / 4.0 * bb.sqrt();
    let sigma2 = n * amplitude * amplitude * bb * (1.0 - PI * PI / 16.0);
    (mu, sigma2)
}

/// Mean power gains of the five link families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub sd: f64,
    pub sr: f64,
    pub rd: f64,
    pub sc: f64,
    pub bd: f64,
}

impl LinkGains {
    pub fn at(params: &SystemParams, topo: &Topology, d: f64) -> Result<Self> {
        let (sr, rd) = ris_betas(d, topo, params)?;
        let sd = match params.direct_link {
            DirectLink::Present => path_loss(topo.d_sd, params, LinkClass::Local)?,
            DirectLink::Absent => 0.0,
        };
        Ok(Self {
            sd,
            sr,
            rd,
            sc: path_loss(params.d_sc, params, LinkClass::Long)?,
            bd: path_loss(params.d_bd, params, LinkClass::Long)?,
        })
    }
}

/// Derived statistics of one operating point (placement, power, parameters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStats {
    pub beta_sd: f64,
    pub beta_sr: f64,
    pub beta_rd: f64,
    pub beta_sc: f64,
    pub beta_bd: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub omega: f64,
    /// `1/β_sd + 1/(2σ²)`; infinite without a direct link.
    pub a_t: f64,
    /// `γ̄_b β_bd`.
    pub alpha_bd: f64,
    pub gamma_bar_s: f64,
    pub gamma_bar_b: f64,
    pub n_elements: usize,
    pub element_amplitude: f64,
    pub n_antennas: usize,
    pub sinr_threshold: f64,
    pub direct: DirectLink,
}

impl LinkStats {
    /// Statistics at placement `d` and transmit power `p_s`.
    pub fn new(params: &SystemParams, topo: &Topology, d: f64, p_s: f64) -> Result<Self> {
        Self::from_gains(params, LinkGains::at(params, topo, d)?, p_s)
    }

    /// Statistics from explicit link gains.
    pub fn from_gains(params: &SystemParams, gains: LinkGains, p_s: f64) -> Result<Self> {
        params.validate()?;
        if !(p_s >= 0.0 && p_s.is_finite()) {
            return Err(Error::Domain(format!("transmit power must be non-negative, got {p_s}")));
        }
        let direct = params.direct_link;
        let beta_sd = match direct {
            DirectLink::Present if !(gains.sd > 0.0) => {
                return Err(Error::Domain("direct link requires beta_sd > 0".into()))
            }
            DirectLink::Present => gains.sd,
            DirectLink::Absent => 0.0,
        };
        let (mu, sigma2) = clt_moments(
            params.n_elements,
            params.element_amplitude,
            gains.sr,
            gains.rd,
        );
        let omega = if sigma2 > 0.0 {
            1.0 / q_exact(-mu / sigma2.sqrt())
        } else {
            1.0
        };
        let a_t = match direct {
            DirectLink::Present => 1.0 / beta_sd + 0.5 / sigma2,
            DirectLink::Absent => f64::INFINITY,
        };
        let gamma_bar_b = params.gamma_bar_b();
        Ok(Self {
            beta_sd,
            beta_sr: gains.sr,
            beta_rd: gains.rd,
            beta_sc: gains.sc,
            beta_bd: gains.bd,
            mu,
            sigma2,
            omega,
            a_t,
            alpha_bd: gamma_bar_b * gains.bd,
            gamma_bar_s: params.gamma_bar_s(p_s),
            gamma_bar_b,
            n_elements: params.n_elements,
            element_amplitude: params.element_amplitude,
            n_antennas: params.n_antennas,
            sinr_threshold: params.sinr_threshold,
            direct,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// `ω √β_sd / √(β_sd + 2σ²)`, the weight of the direct-link correction.
    pub fn direct_weight(&self) -> f64 {
        self.omega * (self.beta_sd / (self.beta_sd + 2.0 * self.sigma2)).sqrt()
    }
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Unclamped truncated-Gaussian CDF of `X`.
pub fn cdf_x_raw(x: f64, ls: &LinkStats) -> f64 {
    if ls.sigma2 == 0.0 {
        return if x >= 0.0 { 1.0 } else { 0.0 };
    }
    1.0 - ls.omega * q_exact((x - ls.mu) / ls.sigma())
}

/// CDF of `X`, truncated to `x ≥ 0`.
pub fn cdf_x(x: f64, ls: &LinkStats) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        clamp01(cdf_x_raw(x, ls))
    }
}

/// Unclamped CDF of `Y = |h_sd| + X` (direct link present).
pub fn cdf_y_raw(y: f64, ls: &LinkStats) -> Result<f64> {
    if ls.direct == DirectLink::Absent {
        return Err(Error::InvalidMode(
            "the CDF of Y needs a direct link; use cdf_x without one".into(),
        ));
    }
    if ls.sigma2 == 0.0 {
        return Ok(if y > 0.0 { -(-y * y / ls.beta_sd).exp_m1() } else { 0.0 });
    }
    let (mu, s2, b) = (ls.mu, ls.sigma2, ls.beta_sd);
    let d = 2.0 * s2 + b;
    let r = (2.0 / ls.a_t).sqrt();
    let gauss = (-(y - mu).powi(2) / d).exp();
    let z1 = r * (y / b + mu / (2.0 * s2));
    let z2 = r * (y - mu) / (2.0 * s2);
    Ok(1.0 - ls.omega * q_exact((y - mu) / ls.sigma())
        - ls.direct_weight() * gauss * (1.0 - q_exact(z1) - q_exact(z2)))
}

/// CDF of `Y = |h_sd| + X`, clamped to `[0, 1]`.
pub fn cdf_y(y: f64, ls: &LinkStats) -> Result<f64> {
    let raw = cdf_y_raw(y, ls)?;
    Ok(if y <= 0.0 { 0.0 } else { clamp01(raw) })
}

/// CDF of `γ_srd = γ̄_s Y²`; reduces to the CDF of `X` without a direct link.
pub fn cdf_gamma_srd(x: f64, ls: &LinkStats) -> Result<f64> {
    if !(ls.gamma_bar_s > 0.0) {
        return Err(Error::Domain("gamma_bar_s must be positive".into()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let y = (x / ls.gamma_bar_s).sqrt();
    match ls.direct {
        DirectLink::Present => cdf_y(y, ls),
        DirectLink::Absent => Ok(cdf_x(y, ls)),
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Alternating weights `c_m = (−1)^{m+1} C(M, m)`, `m = 1..=M`.
pub fn antenna_weights(m_antennas: usize) -> Vec<f64> {
    (1..=m_antennas)
        .map(|m| {
            let c = binomial(m_antennas, m) as f64;
            if m % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Density of `γ_v = 1 + max of M exponentials with mean α_bd`.
pub fn pdf_gamma_v(x: f64, alpha_bd: f64, m_antennas: usize) -> f64 {
    if x < 1.0 || m_antennas == 0 {
        return 0.0;
    }
    let t = (x - 1.0) / alpha_bd;
    let m = m_antennas as f64;
    let body = if m_antennas == 1 {
        1.0
    } else {
        (-(-t).exp_m1()).powi(m_antennas as i32 - 1)
    };
    m / alpha_bd * (-t).exp() * body
}

/// The same density as the alternating sum `Σ (m c_m/α_bd) e^{−m(x−1)/α_bd}`.
pub fn pdf_gamma_v_sum(x: f64, alpha_bd: f64, m_antennas: usize) -> f64 {
    if x < 1.0 {
        return 0.0;
    }
    let t = (x - 1.0) / alpha_bd;
    antenna_weights(m_antennas)
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = (i + 1) as f64;
            m * c / alpha_bd * (-m * t).exp()
        })
        .sum()
}

/// CDF of `γ_v`: `(1 − e^{−(x−1)/α_bd})^M`.
pub fn cdf_gamma_v(x: f64, alpha_bd: f64, m_antennas: usize) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    (-(-(x - 1.0) / alpha_bd).exp_m1()).powi(m_antennas as i32)
}

/// Gumbel approximation `(1 + α_bd(ln M + ζ), α_bd² π²/6)` of the mean and
/// variance of `γ_v`.
pub fn gumbel_moments(m_antennas: usize, alpha_bd: f64) -> (f64, f64) {
    let mean = 1.0 + alpha_bd * ((m_antennas as f64).ln() + EULER_GAMMA);
    (mean, alpha_bd * alpha_bd * PI * PI / 6.0)
}

/// Exact `(Σ c_m/m, Σ c_m/m²)` over `m = 1..=M`, evaluated in rational
/// arithmetic so the alternating cancellation is lossless.
pub fn alternating_sums(m_antennas: usize) -> Result<(f64, f64)> {
    if m_antennas == 0 || m_antennas > MAX_EXACT_ANTENNAS {
        return Err(Error::Conditioning(format!(
            "exact antenna sums support 1..={MAX_EXACT_ANTENNAS} antennas, got {m_antennas}"
        )));
    }
    let mut s1 = BigRational::zero();
    let mut s2 = BigRational::zero();
    for m in 1..=m_antennas {
        let mut c = BigInt::from(binomial(m_antennas, m));
        if m % 2 == 0 {
            c = -c;
        }
        let mb = BigInt::from(m);
        s1 += BigRational::new(c.clone(), mb.clone());
        s2 += BigRational::new(c, &mb * &mb);
    }
    let conv = |r: &BigRational| {
        r.to_f64()
            .ok_or_else(|| Error::Conditioning("rational sum not representable".into()))
    };
    Ok((conv(&s1)?, conv(&s2)?))
}
