//! Experiment configuration: a TOML file whose decibel quantities carry a
//! `_db` suffix. Everything is converted to linear units once, at load.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use risd2d_core::channel::{db_to_linear, linear_to_db, sinr_threshold_from_rate};
use risd2d_core::topology::fraunhofer_distance;
use risd2d_core::{
    DirectLink, MomentMode, OutageMethod, RefLossScope, SolveOptions, SystemParams, TieBreak, Topology,
};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_240_617;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub system: RawSystem,
    #[serde(default)]
    pub topology: RawTopology,
    #[serde(default)]
    pub options: RawOptions,
    #[serde(default)]
    pub point: RawPoint,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepAxis>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawScope {
    AllLinks,
    LongLinksOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawSystem {
    pub n_elements: usize,
    pub element_amplitude: f64,
    pub n_antennas: usize,
    pub p_s_max_db: f64,
    pub p_b_db: f64,
    pub noise_power_db: f64,
    pub path_loss_exponent: f64,
    pub ref_distance: f64,
    pub ref_path_loss_db: f64,
    pub ref_loss_scope: RawScope,
    /// Either this or `rate_threshold` (bit/s/Hz); 2 dB when both are absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sinr_threshold_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_threshold: Option<f64>,
    pub interference_threshold_db: f64,
    pub d_bd: f64,
    pub d_sc: f64,
    pub direct_link: bool,
}

impl Default for RawSystem {
    fn default() -> Self {
        let p = SystemParams::default();
        Self {
            n_elements: p.n_elements,
            element_amplitude: p.element_amplitude,
            n_antennas: p.n_antennas,
            p_s_max_db: linear_to_db(p.p_s_max),
            p_b_db: linear_to_db(p.p_b),
            noise_power_db: linear_to_db(p.noise_power),
            path_loss_exponent: p.path_loss_exponent,
            ref_distance: p.ref_distance,
            ref_path_loss_db: linear_to_db(p.ref_path_loss),
            ref_loss_scope: RawScope::AllLinks,
            sinr_threshold_db: None,
            rate_threshold: None,
            interference_threshold_db: linear_to_db(p.interference_threshold),
            d_bd: p.d_bd,
            d_sc: p.d_sc,
            direct_link: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawKind {
    Parallel,
    Elliptical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fraunhofer {
    pub frequency_hz: f64,
    pub aperture_m: f64,
    #[serde(default = "speed_of_light")]
    pub speed_of_light: f64,
}

fn speed_of_light() -> f64 {
    299_792_458.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawTopology {
    pub kind: RawKind,
    pub d_sd: f64,
    /// Lateral offset of the parallel track.
    pub y: f64,
    /// Eccentricity of the elliptical track.
    pub eccentricity: f64,
    /// Minimum RIS–terminal separation; alternatively derived from `fraunhofer`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_separation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraunhofer: Option<Fraunhofer>,
}

impl Default for RawTopology {
    fn default() -> Self {
        Self {
            kind: RawKind::Parallel,
            d_sd: 5.0,
            y: 0.5,
            eccentricity: 0.9,
            min_separation: None,
            fraunhofer: None,
        }
    }
}

const DEFAULT_MIN_SEPARATION: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawOutage {
    Auto,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawMoments {
    Auto,
    ExactSum,
    Gumbel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawTie {
    NearerSource,
    NearerDestination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawOptions {
    pub outage: RawOutage,
    pub moments: RawMoments,
    pub tie: RawTie,
    pub grid_d: usize,
    pub grid_p: usize,
}

impl Default for RawOptions {
    fn default() -> Self {
        Self {
            outage: RawOutage::Auto,
            moments: RawMoments::Auto,
            tie: RawTie::NearerSource,
            grid_d: 100,
            grid_p: 100,
        }
    }
}

/// Operating point for `custom` runs. Missing values are replaced by the
/// jointly optimal placement and power.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_s_db: Option<f64>,
}

/// One swept parameter: a dotted path such as `system.n_elements` or
/// `system.sinr_threshold_db`, an optional unit label and the values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub values: Vec<f64>,
}

impl SweepAxis {
    /// Column name used in CSV output.
    pub fn column(&self) -> &str {
        self.parameter.rsplit('.').next().unwrap_or(&self.parameter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub d: Option<f64>,
    pub p_s: Option<f64>,
}

/// A validated configuration in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemParams,
    pub topology: Topology,
    pub options: SolveOptions,
    pub grid: (usize, usize),
    pub point: OperatingPoint,
    pub sweep: Vec<SweepAxis>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    raw: RawConfig,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        let cfg = Self::from_raw(raw)?;
        for axis in &cfg.sweep {
            check_unit(axis)?;
            if axis.values.is_empty() {
                return Err(config_err(format!("sweep over `{}` has no values", axis.parameter)));
            }
            for &v in &axis.values {
                cfg.with_override(&axis.parameter, v)?;
            }
        }
        Ok(cfg)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let s = &raw.system;
        let sinr_threshold = match (s.sinr_threshold_db, s.rate_threshold) {
            (Some(_), Some(_)) => {
                return Err(config_err("give either sinr_threshold_db or rate_threshold, not both"))
            }
            (Some(db), None) => db_to_linear(db),
            (None, Some(rate)) => sinr_threshold_from_rate(rate),
            (None, None) => db_to_linear(2.0),
        };
        let system = SystemParams {
            n_elements: s.n_elements,
            element_amplitude: s.element_amplitude,
            n_antennas: s.n_antennas,
            p_s_max: db_to_linear(s.p_s_max_db),
            p_b: db_to_linear(s.p_b_db),
            noise_power: db_to_linear(s.noise_power_db),
            path_loss_exponent: s.path_loss_exponent,
            ref_distance: s.ref_distance,
            ref_path_loss: db_to_linear(s.ref_path_loss_db),
            ref_loss_scope: match s.ref_loss_scope {
                RawScope::AllLinks => RefLossScope::AllLinks,
                RawScope::LongLinksOnly => RefLossScope::LongLinksOnly,
            },
            sinr_threshold,
            interference_threshold: db_to_linear(s.interference_threshold_db),
            d_bd: s.d_bd,
            d_sc: s.d_sc,
            direct_link: if s.direct_link {
                DirectLink::Present
            } else {
                DirectLink::Absent
            },
        };
        system.validate()?;

        let t = &raw.topology;
        let min_separation = match (t.min_separation, &t.fraunhofer) {
            (Some(_), Some(_)) => return Err(config_err("give either min_separation or fraunhofer, not both")),
            (Some(v), None) => v,
            (None, Some(f)) => fraunhofer_distance(f.frequency_hz, f.aperture_m, f.speed_of_light),
            (None, None) => DEFAULT_MIN_SEPARATION,
        };
        let topology = match t.kind {
            RawKind::Parallel => Topology::parallel(t.d_sd, t.y, min_separation),
            RawKind::Elliptical => Topology::elliptical(t.d_sd, t.eccentricity, min_separation),
        };
        topology.validate()?;

        let o = &raw.options;
        if o.grid_d < 8 || o.grid_p < 8 {
            return Err(config_err("grid_d and grid_p must be at least 8"));
        }
        let options = SolveOptions {
            outage: match o.outage {
                RawOutage::Auto => OutageMethod::Auto,
                RawOutage::ClosedForm => OutageMethod::ClosedForm,
                RawOutage::Quadrature => OutageMethod::Quadrature,
            },
            moments: match o.moments {
                RawMoments::Auto => MomentMode::Auto,
                RawMoments::ExactSum => MomentMode::ExactSum,
                RawMoments::Gumbel => MomentMode::Gumbel,
            },
            tie: match o.tie {
                RawTie::NearerSource => TieBreak::NearerSource,
                RawTie::NearerDestination => TieBreak::NearerDestination,
            },
        };
        if let Some(d) = raw.point.d {
            topology.check_feasible(d)?;
        }
        if let Some(trials) = raw.trials {
            if trials < risd2d_core::montecarlo::MIN_TRIALS {
                return Err(config_err(format!(
                    "trials must be at least {}",
                    risd2d_core::montecarlo::MIN_TRIALS
                )));
            }
        }
        Ok(Self {
            system,
            topology,
            options,
            grid: (o.grid_d, o.grid_p),
            point: OperatingPoint {
                d: raw.point.d,
                p_s: raw.point.p_s_db.map(db_to_linear),
            },
            sweep: raw.sweep.clone(),
            trials: raw.trials,
            seed: raw.seed,
            out_dir: raw.out_dir.clone(),
            raw,
        })
    }

    /// A copy with a different root seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        out.seed = seed;
        out.raw.seed = seed;
        out
    }

    pub fn raw(&self) -> &RawConfig {
        &self.raw
    }

    /// Canonical TOML of the resolved configuration, defaults included.
    pub fn canonical(&self) -> String {
        toml::to_string(&self.raw).expect("configuration serializes")
    }

    /// Hex SHA-256 of [`Self::canonical`].
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.canonical().as_bytes()))
    }

    /// A copy with the dotted `path` set to `value`.
    pub fn with_override(&self, path: &str, value: f64) -> Result<Self, CliError> {
        let mut doc = toml::Value::try_from(&self.raw).map_err(|e| config_err(e.to_string()))?;
        let missing = || config_err(format!("`{path}` does not name a parameter"));
        let (parents, last) = match path.rsplit_once('.') {
            Some((p, l)) => (p.split('.').collect::<Vec<_>>(), l),
            None => (Vec::new(), path),
        };
        let mut node = &mut doc;
        for key in parents {
            node = node.get_mut(key).ok_or_else(missing)?;
        }
        let table = node.as_table_mut().ok_or_else(missing)?;
        let new = match table.get(last) {
            Some(toml::Value::Integer(_)) => {
                if value.fract() != 0.0 || value < 0.0 || value > i64::MAX as f64 {
                    return Err(config_err(format!("`{path}` needs a non-negative integer, got {value}")));
                }
                toml::Value::Integer(value as i64)
            }
            Some(toml::Value::Float(_)) | None => toml::Value::Float(value),
            Some(_) => return Err(config_err(format!("`{path}` is not numeric"))),
        };
        table.insert(last.to_string(), new);
        // A threshold given in one form replaces the other.
        if let Some(sys) = doc.get_mut("system").and_then(toml::Value::as_table_mut) {
            match path {
                "system.sinr_threshold_db" => drop(sys.remove("rate_threshold")),
                "system.rate_threshold" => drop(sys.remove("sinr_threshold_db")),
                _ => {}
            }
        }
        let raw: RawConfig = doc
            .try_into()
            .map_err(|e: toml::de::Error| config_err(format!("`{path}`: {e}")))?;
        Self::from_raw(raw)
    }
}

fn check_unit(axis: &SweepAxis) -> Result<(), CliError> {
    let in_db = axis.parameter.ends_with("_db");
    match axis.unit.as_deref() {
        None => Ok(()),
        Some("dB" | "dBW" | "dBm") if !in_db => Err(config_err(format!(
            "`{}` is linear but the sweep unit is {}",
            axis.parameter,
            axis.unit.as_deref().unwrap_or_default()
        ))),
        Some("dBm") => Err(config_err("dBm is not accepted; use dBW")),
        Some(u) if in_db && !matches!(u, "dB" | "dBW") => Err(config_err(format!(
            "`{}` is in decibels but the sweep unit is {u}",
            axis.parameter
        ))),
        Some(_) => Ok(()),
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
