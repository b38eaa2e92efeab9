//! System parameters, path loss, fading samples, RIS phase alignment and
//! exact per-realization SINR.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stats::LinkStats;
use crate::topology::Topology;

/// Which links carry the reference loss `C` in `E[|h|²] = C (d₀/d)^η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefLossScope {
    /// Every link, including the D2D-local ones (sd, sr, rd).
    AllLinks,
    /// Only the long links (bd, sc); local links use `(d₀/d)^η`.
    LongLinksOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkClass {
    /// DS–DU, DS–RIS and RIS–DU.
    Local,
    /// BS–DU and DS–CU.
    Long,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectLink {
    Present,
    /// DS–DU path blocked: `h_sd ≡ 0`.
    Absent,
}

/// Physical and protocol parameters, in linear units (watts, linear gains).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub n_elements: usize,
    pub element_amplitude: f64,
    pub n_antennas: usize,
    pub p_s_max: f64,
    pub p_b: f64,
    pub noise_power: f64,
    pub path_loss_exponent: f64,
    pub ref_distance: f64,
    pub ref_path_loss: f64,
    pub ref_loss_scope: RefLossScope,
    pub sinr_threshold: f64,
    pub interference_threshold: f64,
    pub d_bd: f64,
    pub d_sc: f64,
    pub direct_link: DirectLink,
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// SINR threshold for a rate requirement in bit/s/Hz: `2^R − 1`.
pub fn sinr_threshold_from_rate(rate: f64) -> f64 {
    rate.exp2() - 1.0
}

impl Default for SystemParams {
    /// The reference profile: N = 50, α = 0.5, M = 1, N₀ = 0 dBW,
    /// P_s^max = 10 dBW, P_b = 28 dBW, C = 0 dB, d₀ = 1.05 m, η = 2.5,
    /// γ_th = 2 dB, I^th = 11 dBW, d_bd = 1.1 m, d_sc = 250 m.
    fn default() -> Self {
        Self {
            n_elements: 50,
            element_amplitude: 0.5,
            n_antennas: 1,
            p_s_max: db_to_linear(10.0),
            p_b: db_to_linear(28.0),
            noise_power: 1.0,
            path_loss_exponent: 2.5,
            ref_distance: 1.05,
            ref_path_loss: 1.0,
            ref_loss_scope: RefLossScope::AllLinks,
            sinr_threshold: db_to_linear(2.0),
            interference_threshold: db_to_linear(11.0),
            d_bd: 1.1,
            d_sc: 250.0,
            direct_link: DirectLink::Present,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be non-negative, got {v}")))
            }
        };
        if self.n_antennas == 0 {
            return Err(Error::Domain("n_antennas must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.element_amplitude) {
            return Err(Error::Domain(format!(
                "element_amplitude must lie in [0, 1], got {}",
                self.element_amplitude
            )));
        }
        non_negative("p_s_max", self.p_s_max)?;
        non_negative("p_b", self.p_b)?;
        non_negative("interference_threshold", self.interference_threshold)?;
        positive("noise_power", self.noise_power)?;
        positive("path_loss_exponent", self.path_loss_exponent)?;
        positive("ref_distance", self.ref_distance)?;
        positive("ref_path_loss", self.ref_path_loss)?;
        positive("sinr_threshold", self.sinr_threshold)?;
        positive("d_bd", self.d_bd)?;
        positive("d_sc", self.d_sc)
    }

    pub fn gamma_bar_s(&self, p_s: f64) -> f64 {
        p_s / self.noise_power
    }

    pub fn gamma_bar_b(&self) -> f64 {
        self.p_b / self.noise_power
    }

    /// Reference loss applied to links of the given class.
    pub fn ref_gain(&self, class: LinkClass) -> f64 {
        match (class, self.ref_loss_scope) {
            (LinkClass::Local, RefLossScope::LongLinksOnly) => 1.0,
            _ => self.ref_path_loss,
        }
    }
}

/// Mean channel power gain `β = C (d₀/d)^η` of a link at distance `d`.
pub fn path_loss(d: f64, params: &SystemParams, class: LinkClass) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("link distance must be positive, got {d}")));
    }
    Ok(params.ref_gain(class) * (params.ref_distance / d).powf(params.path_loss_exponent))
}

/// `(β_sr, β_rd)` for RIS placement coordinate `d`.
pub fn ris_betas(d: f64, topo: &Topology, params: &SystemParams) -> Result<(f64, f64)> {
    topo.check_feasible(d)?;
    let (d_sr, d_rd) = topo.ris_distances(d);
    Ok((
        path_loss(d_sr, params, LinkClass::Local)?,
        path_loss(d_rd, params, LinkClass::Local)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_sd: Complex64,
    pub h_sr: Vec<Complex64>,
    pub h_rd: Vec<Complex64>,
    pub h_sc: Complex64,
    pub h_bd: Vec<Complex64>,
}

/// Independent link families, each drawn from its own substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Sd = 0,
    Sr = 1,
    Rd = 2,
    Sc = 3,
    Bd = 4,
}

/// Counter-based random streams: one ChaCha8 stream per trial, partitioned
/// into disjoint word ranges per link. Trial `t` of link `l` is the same
/// sequence however trials are scheduled.
#[derive(Debug, Clone)]
pub struct Substreams {
    base: ChaCha8Rng,
}

impl Substreams {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, trial: u64, link: Link) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(trial);
        rng.set_word_pos((link as u128) << 36);
        rng
    }
}

fn cn<R: Rng + ?Sized>(rng: &mut R, beta: f64) -> Complex64 {
    let s = (0.5 * beta).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

impl ChannelRealization {
    pub fn zeros(n_elements: usize, n_antennas: usize) -> Self {
        Self {
            h_sd: Complex64::new(0.0, 0.0),
            h_sr: vec![Complex64::new(0.0, 0.0); n_elements],
            h_rd: vec![Complex64::new(0.0, 0.0); n_elements],
            h_sc: Complex64::new(0.0, 0.0),
            h_bd: vec![Complex64::new(0.0, 0.0); n_antennas],
        }
    }

    /// Overwrites `self` with trial `trial` drawn from `streams`.
    pub fn fill_trial(&mut self, ls: &LinkStats, streams: &Substreams, trial: u64) {
        self.h_sd = cn(&mut streams.stream(trial, Link::Sd), ls.beta_sd);
        let mut rng = streams.stream(trial, Link::Sr);
        self.h_sr.iter_mut().for_each(|h| *h = cn(&mut rng, ls.beta_sr));
        let mut rng = streams.stream(trial, Link::Rd);
        self.h_rd.iter_mut().for_each(|h| *h = cn(&mut rng, ls.beta_rd));
        self.h_sc = cn(&mut streams.stream(trial, Link::Sc), ls.beta_sc);
        let mut rng = streams.stream(trial, Link::Bd);
        self.h_bd.iter_mut().for_each(|h| *h = cn(&mut rng, ls.beta_bd));
    }
}

/// Draws one realization with `h_ij ~ CN(0, β_ij)`, independent across
/// links and elements. `h_sd` is identically zero without a direct link.
pub fn sample_realization<R: Rng + ?Sized>(ls: &LinkStats, rng: &mut R) -> ChannelRealization {
    let h_sd = cn(rng, ls.beta_sd);
    let h_sr = (0..ls.n_elements).map(|_| cn(rng, ls.beta_sr)).collect();
    let h_rd = (0..ls.n_elements).map(|_| cn(rng, ls.beta_rd)).collect();
    let h_sc = cn(rng, ls.beta_sc);
    let h_bd = (0..ls.n_antennas).map(|_| cn(rng, ls.beta_bd)).collect();
    ChannelRealization {
        h_sd,
        h_sr,
        h_rd,
        h_sc,
        h_bd,
    }
}

/// Phases `θ*_n = ∠h_sd − (∠h_sr,n + ∠h_rd,n)`. With `h_sd = 0` the angle of
/// the direct path is taken as zero.
pub fn aligned_phases(real: &ChannelRealization) -> Vec<f64> {
    let ref_phase = real.h_sd.arg();
    real.h_sr
        .iter()
        .zip(&real.h_rd)
        .map(|(sr, rd)| ref_phase - (sr.arg() + rd.arg()))
        .collect()
}

/// Composite `h_sd + Σ α e^{jθ_n} h_sr,n h_rd,n` for arbitrary phases.
pub fn combine(real: &ChannelRealization, phases: &[f64], amplitude: f64) -> Complex64 {
    real.h_sr
        .iter()
        .zip(&real.h_rd)
        .zip(phases)
        .fold(real.h_sd, |acc, ((sr, rd), &theta)| {
            acc + amplitude * Complex64::from_polar(1.0, theta) * sr * rd
        })
}

/// `|h_sd| + α Σ |h_sr,n||h_rd,n|`, the composite magnitude under aligned phases.
pub fn coherent_magnitude(real: &ChannelRealization, amplitude: f64) -> f64 {
    let cascade: f64 = real
        .h_sr
        .iter()
        .zip(&real.h_rd)
        .map(|(sr, rd)| sr.norm() * rd.norm())
        .sum();
    real.h_sd.norm() + amplitude * cascade
}

/// Received SINR `γ̄_s|Y|² / (1 + γ̄_b max_m |h_bd,m|²)` under coherent alignment.
pub fn instantaneous_sinr(real: &ChannelRealization, params: &SystemParams, p_s: f64) -> f64 {
    sinr_with(
        real,
        params.element_amplitude,
        params.gamma_bar_s(p_s),
        params.gamma_bar_b(),
    )
}

/// [`instantaneous_sinr`] with the SNR scales given directly.
pub fn sinr_with(real: &ChannelRealization, amplitude: f64, gamma_bar_s: f64, gamma_bar_b: f64) -> f64 {
    let y = coherent_magnitude(real, amplitude);
    let peak = real.h_bd.iter().map(|h| h.norm_sqr()).fold(0.0, f64::max);
    gamma_bar_s * y * y / (1.0 + gamma_bar_b * peak)
}
