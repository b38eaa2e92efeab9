//! Monte Carlo oracle: empirical outage, mean SINR and interference, plus a
//! brute-force grid over placement and power.
//!
//! Trials are split into fixed-size chunks; each chunk is reduced on its own
//! and the partial results are merged in chunk order, so estimates are
//! bit-identical for any number of worker threads.

use rayon::prelude::*;

use crate::channel::{path_loss, sinr_with, ChannelRealization, Link, LinkClass, Substreams, SystemParams};
use crate::error::{Error, Result};
use crate::optimizer::optimal_power;
use crate::outage::{evaluate_outage, OutageMethod};
use crate::sinr_approx::{sinr_hat_from_stats, MomentMode};
use crate::stats::LinkStats;
use crate::topology::Topology;

pub const MIN_TRIALS: u64 = 1_000;
pub const CHUNK_TRIALS: u64 = 4_096;
/// Default trial count for confidence-interval checks.
pub const DEFAULT_CI_TRIALS: u64 = 100_000;
/// Default trial count for figure reproduction.
pub const DEFAULT_FIGURE_TRIALS: u64 = 1_000_000;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_trials: u64,
    pub seed: u64,
    pub ci95: (f64, f64),
}

impl McEstimate {
    fn proportion(hits: u64, n: u64, seed: u64) -> Self {
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        Self {
            value: p,
            std_error: se,
            n_trials: n,
            seed,
            ci95: ((p - Z95 * se).max(0.0), (p + Z95 * se).min(1.0)),
        }
    }

    fn mean(acc: Moments, seed: u64) -> Self {
        let se = (acc.m2 / (acc.n - 1.0) / acc.n).sqrt();
        Self {
            value: acc.mean,
            std_error: se,
            n_trials: acc.n as u64,
            seed,
            ci95: (acc.mean - Z95 * se, acc.mean + Z95 * se),
        }
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * other.n / n,
            m2: self.m2 + other.m2 + delta * delta * self.n * other.n / n,
        }
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_TRIALS} trials are required, got {trials}"
        )));
    }
    Ok(())
}

/// Runs `f` on each chunk of trial indices and returns the per-chunk results
/// in chunk order.
fn chunked<T: Send, F: Fn(std::ops::Range<u64>) -> T + Sync>(trials: u64, f: F) -> Vec<T> {
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    (0..chunks)
        .into_par_iter()
        .map(|c| f(c * CHUNK_TRIALS..((c + 1) * CHUNK_TRIALS).min(trials)))
        .collect()
}

/// Runs `per_trial` on every coherent SINR sample of trials `0..trials`.
fn for_each_sinr<T, F, G>(ls: &LinkStats, trials: u64, seed: u64, init: G, per_trial: F) -> Vec<T>
where
    T: Send,
    G: Fn() -> T + Sync,
    F: Fn(&mut T, f64) + Sync,
{
    let streams = Substreams::new(seed);
    chunked(trials, |range| {
        let mut acc = init();
        let mut real = ChannelRealization::zeros(ls.n_elements, ls.n_antennas);
        for t in range {
            real.fill_trial(ls, &streams, t);
            per_trial(&mut acc, sinr_with(&real, ls.element_amplitude, ls.gamma_bar_s, ls.gamma_bar_b));
        }
        acc
    })
}

/// Empirical outage from precomputed link statistics.
pub fn estimate_outage_stats(ls: &LinkStats, trials: u64, seed: u64) -> Result<McEstimate> {
    check_trials(trials)?;
    let th = ls.sinr_threshold;
    let hits: u64 = for_each_sinr(ls, trials, seed, || 0u64, |h, s| {
        if s <= th {
            *h += 1
        }
    })
    .into_iter()
    .sum();
    Ok(McEstimate::proportion(hits, trials, seed))
}

/// Fraction of coherently combined realizations with `Γ_d ≤ γ_th`.
pub fn estimate_outage(
    d: f64,
    p_s: f64,
    topo: &Topology,
    params: &SystemParams,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    estimate_outage_stats(&LinkStats::new(params, topo, d, p_s)?, trials, seed)
}

/// Empirical mean SINR from precomputed link statistics.
pub fn estimate_mean_sinr_stats(ls: &LinkStats, trials: u64, seed: u64) -> Result<McEstimate> {
    check_trials(trials)?;
    let acc = for_each_sinr(ls, trials, seed, Moments::default, |m, s| m.push(s))
        .into_iter()
        .fold(Moments::default(), Moments::merge);
    Ok(McEstimate::mean(acc, seed))
}

/// Sample mean of `Γ_d` with its standard error.
pub fn estimate_mean_sinr(
    d: f64,
    p_s: f64,
    topo: &Topology,
    params: &SystemParams,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    estimate_mean_sinr_stats(&LinkStats::new(params, topo, d, p_s)?, trials, seed)
}

/// Sample mean of the interference `P_s |h_sc|²` at the cellular user.
pub fn estimate_interference(p_s: f64, params: &SystemParams, trials: u64, seed: u64) -> Result<McEstimate> {
    check_trials(trials)?;
    let beta = path_loss(params.d_sc, params, LinkClass::Long)?;
    let streams = Substreams::new(seed);
    let acc = chunked(trials, |range| {
        let mut m = Moments::default();
        for t in range {
            let mut rng = streams.stream(t, Link::Sc);
            let re: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
            let im: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
            m.push(p_s * 0.5 * beta * (re * re + im * im));
        }
        m
    })
    .into_iter()
    .fold(Moments::default(), Moments::merge);
    Ok(McEstimate::mean(acc, seed))
}

/// Sample moments of the BS interference gain `γ_v = 1 + α_bd max_m |h̃_m|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaVEstimate {
    pub mean: McEstimate,
    pub variance: f64,
    /// Large-sample standard error `√((m₄ − s⁴)/n)` of the variance.
    pub variance_std_error: f64,
}

/// Simulates `γ_v` with `h̃_m ~ CN(0, 1)` and reports its mean and variance.
pub fn estimate_gamma_v(alpha_bd: f64, m_antennas: usize, trials: u64, seed: u64) -> Result<GammaVEstimate> {
    check_trials(trials)?;
    if m_antennas == 0 {
        return Err(Error::Domain("at least one BS antenna is required".into()));
    }
    if !(alpha_bd >= 0.0 && alpha_bd.is_finite()) {
        return Err(Error::Domain(format!("alpha_bd must be finite and non-negative, got {alpha_bd}")));
    }
    // Power sums are taken about the exact mean of the maximum, H_M, which
    // keeps the fourth moment free of cancellation.
    let shift: f64 = (1..=m_antennas).map(|k| 1.0 / k as f64).sum();
    let streams = Substreams::new(seed);
    let sums = chunked(trials, |range| {
        let mut s = [0.0f64; 4];
        for t in range {
            let mut rng = streams.stream(t, Link::Bd);
            let mut g = 0.0f64;
            for _ in 0..m_antennas {
                let re: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
                let im: f64 = rand::Rng::sample(&mut rng, rand_distr::StandardNormal);
                g = g.max(0.5 * (re * re + im * im));
            }
            let y = g - shift;
            let y2 = y * y;
            s[0] += y;
            s[1] += y2;
            s[2] += y2 * y;
            s[3] += y2 * y2;
        }
        s
    })
    .into_iter()
    .fold([0.0f64; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
    let n = trials as f64;
    let [r1, r2, r3, r4] = sums.map(|v| v / n);
    let m2 = r2 - r1 * r1;
    let m4 = r4 - 4.0 * r1 * r3 + 6.0 * r1 * r1 * r2 - 3.0 * r1.powi(4);
    let var_g = m2 * n / (n - 1.0);
    let a2 = alpha_bd * alpha_bd;
    let mean = 1.0 + alpha_bd * (shift + r1);
    let se = alpha_bd * (var_g / n).sqrt();
    Ok(GammaVEstimate {
        mean: McEstimate {
            value: mean,
            std_error: se,
            n_trials: trials,
            seed,
            ci95: (mean - Z95 * se, mean + Z95 * se),
        },
        variance: a2 * var_g,
        variance_std_error: a2 * ((m4 - m2 * m2).max(0.0) / n).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridObjective {
    ClosedFormOp,
    McOp,
    SinrHat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Lowest power on the axis as a fraction of `P_s^max`.
    pub p_floor_ratio: f64,
    pub trials: u64,
    pub seed: u64,
    pub outage: OutageMethod,
    pub moments: MomentMode,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            p_floor_ratio: 0.01,
            trials: 10_000,
            seed: 1,
            outage: OutageMethod::Auto,
            moments: MomentMode::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSurface {
    pub objective: GridObjective,
    /// Placement axis spanning the feasible interval, inclusive.
    pub d_values: Vec<f64>,
    /// Power axis, dB-uniform from `p_floor_ratio·P_s^max` to `P_s^max`.
    pub p_values: Vec<f64>,
    /// Row-major `[p][d]`; `None` where the power violates the interference cap.
    pub values: Vec<Option<f64>>,
    /// `(p index, d index)` of the best feasible cell.
    pub best: (usize, usize),
    pub best_value: f64,
}

impl GridSurface {
    pub fn at(&self, ip: usize, id: usize) -> Option<f64> {
        self.values[ip * self.d_values.len() + id]
    }
}

/// Evaluates `objective` on a `p_grid × d_grid` mesh. The best cell is the
/// minimum for outage objectives and the maximum for the SINR surrogate.
pub fn grid_search(
    topo: &Topology,
    params: &SystemParams,
    d_grid: usize,
    p_grid: usize,
    objective: GridObjective,
    opts: GridOptions,
) -> Result<GridSurface> {
    if d_grid < 8 || p_grid < 8 {
        return Err(Error::InvalidArgument("grids need at least 8 points per axis".into()));
    }
    if !(opts.p_floor_ratio > 0.0 && opts.p_floor_ratio < 1.0) {
        return Err(Error::InvalidArgument("p_floor_ratio must lie in (0, 1)".into()));
    }
    let (lo, hi) = topo.feasible_interval()?;
    let d_values: Vec<f64> = (0..d_grid)
        .map(|i| lo + (hi - lo) * i as f64 / (d_grid - 1) as f64)
        .collect();
    let floor_db = opts.p_floor_ratio.log10();
    let p_values: Vec<f64> = (0..p_grid)
        .map(|j| params.p_s_max * 10f64.powf(floor_db * (1.0 - j as f64 / (p_grid - 1) as f64)))
        .collect();
    let (p_cap, _) = optimal_power(params, path_loss(params.d_sc, params, LinkClass::Long)?)?;
    let cells: Vec<(usize, usize)> = (0..p_grid)
        .flat_map(|j| (0..d_grid).map(move |i| (j, i)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(j, i)| -> Result<Option<f64>> {
            let p = p_values[j];
            if p > p_cap * (1.0 + 1e-12) {
                return Ok(None);
            }
            let ls = LinkStats::new(params, topo, d_values[i], p)?;
            let v = match objective {
                GridObjective::ClosedFormOp => evaluate_outage(&ls, opts.outage)?,
                GridObjective::McOp => {
                    let cell_seed = opts.seed.wrapping_add((j * d_grid + i) as u64);
                    estimate_outage_stats(&ls, opts.trials, cell_seed)?.value
                }
                GridObjective::SinrHat => sinr_hat_from_stats(&ls, opts.moments)?.value,
            };
            Ok(Some(v))
        })
        .collect::<Result<Vec<_>>>()?;
    let better = |a: f64, b: f64| match objective {
        GridObjective::SinrHat => a > b,
        _ => a < b,
    };
    let mut best = None;
    for (k, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            if best.map_or(true, |(_, bv)| better(v, bv)) {
                best = Some((k, v));
            }
        }
    }
    let (k, best_value) =
        best.ok_or_else(|| Error::Infeasible("no grid cell satisfies the interference cap".into()))?;
    Ok(GridSurface {
        objective,
        d_values,
        p_values,
        values,
        best: (k / d_grid, k % d_grid),
        best_value,
    })
}
