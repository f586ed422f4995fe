//! Experiment driver: parameter sweeps per beamformer family, fixed
//! broadband-WNG matching, and deterministic CSV emission.
//!
//! Two experiments are supported, mirroring the classic trade-off study
//! layout:
//!
//! 1. **Sweep** — each parametric family (regularized, tunable, Kronecker,
//!    convolutional) is swept over its full parameter range; every point is
//!    scored with broadband white-noise gain and directivity factor, and the
//!    results land in `wng_<fam>.csv` / `df_<fam>.csv` (score vs normalized
//!    parameter) and `wxd_<fam>.csv` (the WNG-vs-DF trade-off cloud).
//! 2. **Match** — a target broadband WNG is fixed and each family is tuned
//!    to meet it (bisection for the continuous families, nearest sweep point
//!    for the discrete ones); the matched design's per-frequency DF curve
//!    lands in `freq_df_<fam>.csv`.
//!
//! Everything is driven by an [`ExperimentConfig`], resolvable from a TOML
//! file plus command-line overrides; the fully resolved configuration is
//! echoed to `run_manifest.txt` next to the CSVs so a result directory is
//! self-describing. Output is byte-deterministic for a given configuration
//! regardless of worker-thread count.

use crate::array::{ArrayGeometry, ArrayError, FrequencyGrid, SPEED_OF_SOUND};
use crate::beamformer::{BeamformerSpec, BuildOptions};
use crate::metrics::{db, evaluate, MetricCurve, MetricsError};
use crate::sigfig::format_sig6;
use serde::Deserialize;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Default sensor count.
pub const DEFAULT_SENSORS: usize = 30;
/// Default inter-sensor spacing in metres (2 cm).
pub const DEFAULT_SPACING_M: f64 = 0.02;
/// Default band lower edge in hertz.
pub const DEFAULT_F_LO_HZ: f64 = 200.0;
/// Default band upper edge in hertz.
pub const DEFAULT_F_HI_HZ: f64 = 8000.0;
/// Default number of frequency bins.
pub const DEFAULT_BINS: usize = 512;
/// Default sample count for the continuous family sweeps.
pub const DEFAULT_SAMPLES: usize = 101;
/// Default broadband WNG target for the matching experiment, in dB.
pub const DEFAULT_TARGET_WNG_DB: f64 = 1.2;
/// Matching tolerance for the continuous families, in dB.
pub const MATCH_TOLERANCE_DB: f64 = 0.01;
/// Grid size for the finest-grid fallback scan in [`match_wng`].
pub const MATCH_FALLBACK_SAMPLES: usize = 201;

/// The four parametric beamformer families an experiment can cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Regularized superdirective, parameter `α ∈ [0, 1]`.
    Rsd,
    /// Tunable noise-cone design, parameter `ψ ∈ [0, π]`.
    Tun,
    /// Kronecker-product design, parameter `M₁` over the divisors of `M`.
    Kp,
    /// Convolutional design, parameter `M₁ ∈ [1, M]`.
    Ckp,
}

impl Family {
    /// All families in canonical order.
    pub const ALL: [Family; 4] = [Family::Rsd, Family::Tun, Family::Kp, Family::Ckp];

    /// Short tag used in file names and config keys.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Rsd => "rsd",
            Family::Tun => "tun",
            Family::Kp => "kp",
            Family::Ckp => "ckp",
        }
    }

    /// Parses a tag back into a family.
    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag)
    }

    /// The design spec at a raw parameter value.
    pub fn spec(self, raw_param: f64) -> BeamformerSpec {
        match self {
            Family::Rsd => BeamformerSpec::Regularized { alpha: raw_param },
            Family::Tun => BeamformerSpec::Tunable { psi: raw_param },
            Family::Kp => BeamformerSpec::Kronecker {
                coarse_sensors: raw_param.round() as usize,
            },
            Family::Ckp => BeamformerSpec::ConvolutionalKronecker {
                sub_sensors: raw_param.round() as usize,
            },
        }
    }

    fn is_continuous(self) -> bool {
        matches!(self, Family::Rsd | Family::Tun)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Errors from configuration loading and validation.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// Config file unreadable.
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// TOML syntax or schema problem (message carries line/field context).
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    /// Geometry or grid field out of range.
    #[error(transparent)]
    Array(#[from] ArrayError),
    /// `families` resolved to nothing to do.
    #[error("families list is empty")]
    EmptyFamilies,
    /// A family tag that is not one of rsd/tun/kp/ckp.
    #[error("unknown family '{0}' (expected rsd, tun, kp, or ckp)")]
    UnknownFamily(String),
    /// The same family listed twice.
    #[error("family '{0}' listed more than once")]
    DuplicateFamily(&'static str),
    /// Continuous sweeps need at least two samples.
    #[error("family '{family}' needs at least 2 sweep samples, got {got}")]
    TooFewSamples { family: &'static str, got: usize },
    /// The matching target exceeds the physical broadband WNG cap.
    #[error(
        "target broadband WNG {target_db} dB exceeds the 10·log10(M) = {cap_db:.4} dB cap at M={sensors}"
    )]
    TargetAboveCap {
        target_db: f64,
        cap_db: f64,
        sensors: usize,
    },
}

/// Errors from running experiments.
#[derive(Debug, Error)]
pub enum ExperimentError {
    /// Configuration problem.
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// Metric or design failure.
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    /// Matching target outside what the family can reach.
    #[error(
        "target {target_db} dB outside family '{family}' achievable broadband WNG [{lo_db:.4}, {hi_db:.4}] dB"
    )]
    Unachievable {
        family: Family,
        target_db: f64,
        lo_db: f64,
        hi_db: f64,
    },
    /// Bisection exhausted its iteration budget (not expected for the
    /// monotone families; kept for honesty rather than silent acceptance).
    #[error("fixed-WNG search did not converge for family '{family}'")]
    NoConvergence { family: Family },
    /// Output file could not be written.
    #[error("could not write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Command-line overrides applied on top of file values and defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub sensors: Option<usize>,
    pub spacing_m: Option<f64>,
    pub f_lo: Option<f64>,
    pub f_hi: Option<f64>,
    pub bins: Option<usize>,
    pub target_wng_db: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sensors: Option<usize>,
    spacing_m: Option<f64>,
    f_lo: Option<f64>,
    f_hi: Option<f64>,
    bins: Option<usize>,
    target_wng_db: Option<f64>,
    out: Option<String>,
    families: Option<Vec<String>>,
    rsd: Option<RawSamples>,
    tun: Option<RawSamples>,
    kp: Option<RawKp>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKp {
    swap: Option<bool>,
}

/// Fully resolved experiment configuration.
///
/// Values resolve in three layers: built-in defaults (the 30-sensor, 2 cm,
/// 200–8000 Hz setup), then the TOML file, then command-line overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Array under study.
    pub geometry: ArrayGeometry,
    /// Evaluation frequency grid.
    pub grid: FrequencyGrid,
    /// Families to run, in output order.
    pub families: Vec<Family>,
    /// Sample count of the regularized-family sweep.
    pub rsd_samples: usize,
    /// Sample count of the tunable-family sweep.
    pub tun_samples: usize,
    /// Swap the sub-array roles in the Kronecker design.
    pub kp_swap: bool,
    /// Broadband WNG target for the matching experiment, in dB.
    pub target_wng_db: f64,
    /// Directory the CSVs and manifest are written to.
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            geometry: ArrayGeometry::new(DEFAULT_SENSORS, DEFAULT_SPACING_M)
                .expect("default geometry is valid"),
            grid: FrequencyGrid::new(DEFAULT_F_LO_HZ, DEFAULT_F_HI_HZ, DEFAULT_BINS)
                .expect("default grid is valid"),
            families: Family::ALL.to_vec(),
            rsd_samples: DEFAULT_SAMPLES,
            tun_samples: DEFAULT_SAMPLES,
            kp_swap: false,
            target_wng_db: DEFAULT_TARGET_WNG_DB,
            out_dir: PathBuf::from("ulabeam-out"),
        }
    }
}

impl ExperimentConfig {
    /// Parses a TOML config text and applies overrides. An empty string
    /// yields the defaults.
    pub fn from_toml_str(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        Self::resolve(raw, overrides)
    }

    /// Reads and parses a TOML config file, then applies overrides.
    pub fn from_file(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, overrides)
    }

    fn resolve(raw: RawConfig, overrides: &Overrides) -> Result<Self, ConfigError> {
        let sensors = overrides.sensors.or(raw.sensors).unwrap_or(DEFAULT_SENSORS);
        let spacing = overrides
            .spacing_m
            .or(raw.spacing_m)
            .unwrap_or(DEFAULT_SPACING_M);
        let f_lo = overrides.f_lo.or(raw.f_lo).unwrap_or(DEFAULT_F_LO_HZ);
        let f_hi = overrides.f_hi.or(raw.f_hi).unwrap_or(DEFAULT_F_HI_HZ);
        let bins = overrides.bins.or(raw.bins).unwrap_or(DEFAULT_BINS);
        let target_wng_db = overrides
            .target_wng_db
            .or(raw.target_wng_db)
            .unwrap_or(DEFAULT_TARGET_WNG_DB);
        let out_dir = overrides
            .out
            .clone()
            .or_else(|| raw.out.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("ulabeam-out"));

        let families = match &raw.families {
            None => Family::ALL.to_vec(),
            Some(list) => {
                let mut out = Vec::with_capacity(list.len());
                for name in list {
                    let fam = Family::from_tag(name)
                        .ok_or_else(|| ConfigError::UnknownFamily(name.clone()))?;
                    if out.contains(&fam) {
                        return Err(ConfigError::DuplicateFamily(fam.tag()));
                    }
                    out.push(fam);
                }
                out
            }
        };
        if families.is_empty() {
            return Err(ConfigError::EmptyFamilies);
        }

        let rsd_samples = raw
            .rsd
            .as_ref()
            .and_then(|s| s.samples)
            .unwrap_or(DEFAULT_SAMPLES);
        let tun_samples = raw
            .tun
            .as_ref()
            .and_then(|s| s.samples)
            .unwrap_or(DEFAULT_SAMPLES);
        for (family, samples) in [("rsd", rsd_samples), ("tun", tun_samples)] {
            if samples < 2 {
                return Err(ConfigError::TooFewSamples { family, got: samples });
            }
        }
        let kp_swap = raw.kp.as_ref().and_then(|k| k.swap).unwrap_or(false);

        let geometry = ArrayGeometry::new(sensors, spacing)?;
        let grid = FrequencyGrid::new(f_lo, f_hi, bins)?;

        let cap_db = db(sensors as f64);
        if !(target_wng_db.is_finite() && target_wng_db <= cap_db) {
            return Err(ConfigError::TargetAboveCap {
                target_db: target_wng_db,
                cap_db,
                sensors,
            });
        }

        Ok(ExperimentConfig {
            geometry,
            grid,
            families,
            rsd_samples,
            tun_samples,
            kp_swap,
            target_wng_db,
            out_dir,
        })
    }

    /// Build options implied by this configuration.
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            kp_swap: self.kp_swap,
        }
    }

    /// Plain-text key-value dump of the fully resolved configuration plus
    /// the library version; written next to the CSVs so a result directory
    /// records exactly what produced it.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "library = {} {}\n",
            env!("CARGO_PKG_NAME"),
            env!("CARGO_PKG_VERSION")
        ));
        s.push_str(&format!("sensors = {}\n", self.geometry.sensors()));
        s.push_str(&format!("spacing_m = {}\n", self.geometry.spacing_m()));
        s.push_str(&format!("speed_of_sound_m_s = {SPEED_OF_SOUND}\n"));
        s.push_str("look_direction = endfire\n");
        s.push_str(&format!("f_lo_hz = {}\n", self.grid.lo_hz()));
        s.push_str(&format!("f_hi_hz = {}\n", self.grid.hi_hz()));
        s.push_str(&format!("bins = {}\n", self.grid.bins()));
        let fams: Vec<&str> = self.families.iter().map(|f| f.tag()).collect();
        s.push_str(&format!("families = {}\n", fams.join(",")));
        s.push_str(&format!("rsd_samples = {}\n", self.rsd_samples));
        s.push_str(&format!("tun_samples = {}\n", self.tun_samples));
        s.push_str(&format!("kp_swap = {}\n", self.kp_swap));
        s.push_str(&format!("target_wng_db = {}\n", self.target_wng_db));
        s.push_str(
            "param_normalization = rsd:alpha tun:psi/pi kp:(m1-1)/(M-1) ckp:(m1-1)/(M-1)\n",
        );
        s.push_str(&format!("out = {}\n", self.out_dir.display()));
        s
    }
}

/// One scored point of a family sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Parameter mapped onto `[0, 1]` (α, ψ/π, or `(M₁−1)/(M−1)`).
    pub normalized_param: f64,
    /// The parameter in its native units (α, ψ in radians, or `M₁`).
    pub raw_param: f64,
    /// Broadband white-noise gain, dB.
    pub wng_db: f64,
    /// Broadband directivity factor, dB.
    pub df_db: f64,
}

/// Positive divisors of `m`, ascending.
fn divisors(m: usize) -> Vec<usize> {
    (1..=m).filter(|k| m % k == 0).collect()
}

/// `(normalized, raw)` parameter pairs for a family sweep, ascending.
fn parameter_points(family: Family, config: &ExperimentConfig) -> Vec<(f64, f64)> {
    let m = config.geometry.sensors();
    let discrete_norm = |m1: usize| {
        if m == 1 {
            0.0
        } else {
            (m1 - 1) as f64 / (m - 1) as f64
        }
    };
    match family {
        Family::Rsd => uniform_unit_grid(config.rsd_samples)
            .map(|t| (t, t))
            .collect(),
        Family::Tun => uniform_unit_grid(config.tun_samples)
            .map(|t| (t, PI * t))
            .collect(),
        Family::Kp => divisors(m)
            .into_iter()
            .map(|m1| (discrete_norm(m1), m1 as f64))
            .collect(),
        Family::Ckp => (1..=m)
            .map(|m1| (discrete_norm(m1), m1 as f64))
            .collect(),
    }
}

fn uniform_unit_grid(samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| i as f64 / last)
}

/// Sweeps one family over its full parameter range, scoring every point with
/// broadband WNG and DF on the configured grid. Rows come back in ascending
/// normalized-parameter order.
pub fn sweep(family: Family, config: &ExperimentConfig) -> Result<Vec<SweepRow>, ExperimentError> {
    let options = config.build_options();
    parameter_points(family, config)
        .into_iter()
        .map(|(normalized, raw)| {
            let (_, _, score) = evaluate(family.spec(raw), &config.geometry, &config.grid, &options)?;
            Ok(SweepRow {
                normalized_param: normalized,
                raw_param: raw,
                wng_db: score.wng_db,
                df_db: score.df_db,
            })
        })
        .collect()
}

/// Result of matching a family to a broadband WNG target.
#[derive(Debug, Clone)]
pub struct MatchResult {
    /// The family that was tuned.
    pub family: Family,
    /// Matched parameter in native units.
    pub raw_param: f64,
    /// Matched parameter mapped onto `[0, 1]`.
    pub normalized_param: f64,
    /// Broadband WNG actually achieved, dB.
    pub achieved_wng_db: f64,
    /// Per-frequency directivity-factor curve of the matched design
    /// (linear scale).
    pub df_curve: MetricCurve,
}

/// Tunes `family` until its broadband WNG meets `target_db`.
///
/// Continuous families bisect on the parameter until the score is within
/// [`MATCH_TOLERANCE_DB`]; monotonicity of broadband WNG in the parameter is
/// verified on a coarse grid first, with a fallback to a
/// [`MATCH_FALLBACK_SAMPLES`]-point nearest-value scan if it ever fails.
/// Discrete families return the sweep point whose broadband WNG is nearest
/// the target (ties to the smaller sub-array), reporting the achieved value
/// rather than failing. Targets outside a continuous family's reachable
/// interval return [`ExperimentError::Unachievable`] naming that interval.
pub fn match_wng(
    family: Family,
    config: &ExperimentConfig,
    target_db: f64,
) -> Result<MatchResult, ExperimentError> {
    if family.is_continuous() {
        match_continuous(family, config, target_db)
    } else {
        match_discrete(family, config, target_db)
    }
}

fn eval_continuous(
    family: Family,
    t: f64,
    config: &ExperimentConfig,
) -> Result<(f64, f64, MetricCurve), ExperimentError> {
    let raw = match family {
        Family::Rsd => t,
        Family::Tun => PI * t,
        _ => unreachable!("continuous evaluation on a discrete family"),
    };
    let (_, df_curve, score) = evaluate(
        family.spec(raw),
        &config.geometry,
        &config.grid,
        &config.build_options(),
    )?;
    Ok((raw, score.wng_db, df_curve))
}

fn match_continuous(
    family: Family,
    config: &ExperimentConfig,
    target_db: f64,
) -> Result<MatchResult, ExperimentError> {
    let result = |t: f64, raw: f64, achieved: f64, curve: MetricCurve| MatchResult {
        family,
        raw_param: raw,
        normalized_param: t,
        achieved_wng_db: achieved,
        df_curve: curve,
    };

    let (raw0, w0, c0) = eval_continuous(family, 0.0, config)?;
    let (raw1, w1, c1) = eval_continuous(family, 1.0, config)?;
    // Endpoint short-circuit: a target sitting on (or within tolerance of)
    // an end of the range must return that end, not a bisection iterate
    // that happens to score within tolerance a little inside it.
    if (w1 - target_db).abs() <= MATCH_TOLERANCE_DB {
        return Ok(result(1.0, raw1, w1, c1));
    }
    if (w0 - target_db).abs() <= MATCH_TOLERANCE_DB {
        return Ok(result(0.0, raw0, w0, c0));
    }
    let (lo_db, hi_db) = (w0.min(w1), w0.max(w1));
    if target_db < lo_db || target_db > hi_db {
        return Err(ExperimentError::Unachievable {
            family,
            target_db,
            lo_db,
            hi_db,
        });
    }

    // Verify the monotonicity the bisection relies on; any violation drops
    // the search to a dense nearest-value scan instead.
    let mut prev = w0;
    let mut monotone = true;
    for i in 1..=10 {
        let t = i as f64 / 10.0;
        let (_, w, _) = eval_continuous(family, t, config)?;
        if w < prev - 1e-9 {
            monotone = false;
            break;
        }
        prev = w;
    }
    if !monotone {
        let mut best: Option<(f64, f64, f64, MetricCurve)> = None;
        for i in 0..MATCH_FALLBACK_SAMPLES {
            let t = i as f64 / (MATCH_FALLBACK_SAMPLES - 1) as f64;
            let (raw, w, curve) = eval_continuous(family, t, config)?;
            let better = match &best {
                None => true,
                Some((_, _, bw, _)) => (w - target_db).abs() < (bw - target_db).abs(),
            };
            if better {
                best = Some((t, raw, w, curve));
            }
        }
        let (t, raw, w, curve) = best.expect("scan produced at least one point");
        return Ok(result(t, raw, w, curve));
    }

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (raw, w, curve) = eval_continuous(family, mid, config)?;
        if (w - target_db).abs() <= MATCH_TOLERANCE_DB {
            return Ok(result(mid, raw, w, curve));
        }
        if w < target_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(ExperimentError::NoConvergence { family })
}

fn match_discrete(
    family: Family,
    config: &ExperimentConfig,
    target_db: f64,
) -> Result<MatchResult, ExperimentError> {
    let rows = sweep(family, config)?;
    // Rows ascend in M₁, and `min_by` keeps the first of equals, so ties
    // resolve to the smaller sub-array.
    let best = rows
        .iter()
        .min_by(|a, b| {
            (a.wng_db - target_db)
                .abs()
                .total_cmp(&(b.wng_db - target_db).abs())
        })
        .expect("discrete sweep is never empty");
    let (_, df_curve, _) = evaluate(
        family.spec(best.raw_param),
        &config.geometry,
        &config.grid,
        &config.build_options(),
    )?;
    Ok(MatchResult {
        family,
        raw_param: best.raw_param,
        normalized_param: best.normalized_param,
        achieved_wng_db: best.wng_db,
        df_curve,
    })
}

/// Which metric a `param,val` sweep file carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMetric {
    /// Broadband white-noise gain.
    Wng,
    /// Broadband directivity factor.
    Df,
}

/// Content selector for [`emit_csv`].
#[derive(Debug)]
pub enum CsvContent<'a> {
    /// `param,val`: normalized parameter vs one broadband metric in dB.
    SweepParam {
        rows: &'a [SweepRow],
        metric: SweepMetric,
    },
    /// `wng,df`: the broadband trade-off cloud, both in dB.
    TradeOff { rows: &'a [SweepRow] },
    /// `freq,val`: a per-frequency curve, frequency in Hz and value in dB.
    Spectrum { curve: &'a MetricCurve },
}

/// Writes one CSV file: a fixed header per schema, rows sorted ascending by
/// the first column, every number printed with six significant digits, LF
/// line endings. Output depends only on the data, so identical inputs yield
/// byte-identical files.
pub fn emit_csv(content: &CsvContent<'_>, path: &Path) -> Result<(), ExperimentError> {
    let (header, mut pairs): (&str, Vec<(f64, f64)>) = match content {
        CsvContent::SweepParam { rows, metric } => (
            "param,val",
            rows.iter()
                .map(|r| {
                    let v = match metric {
                        SweepMetric::Wng => r.wng_db,
                        SweepMetric::Df => r.df_db,
                    };
                    (r.normalized_param, v)
                })
                .collect(),
        ),
        CsvContent::TradeOff { rows } => (
            "wng,df",
            rows.iter().map(|r| (r.wng_db, r.df_db)).collect(),
        ),
        CsvContent::Spectrum { curve } => (
            "freq,val",
            curve
                .grid()
                .frequencies()
                .into_iter()
                .zip(curve.values().iter().map(|&v| db(v)))
                .collect(),
        ),
    };
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut text = String::with_capacity(16 * (pairs.len() + 1));
    text.push_str(header);
    text.push('\n');
    for (k, v) in pairs {
        text.push_str(&format_sig6(k));
        text.push(',');
        text.push_str(&format_sig6(v));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Which parts of the experiment a [`run`] call executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunScope {
    /// Sweeps only: three CSVs per family.
    SweepOnly,
    /// Matching only: one spectrum CSV per family.
    MatchOnly,
    /// Both experiments: four CSVs per family.
    Full,
}

/// What a [`run`] produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Every file written, in write order (CSVs, then the manifest).
    pub files: Vec<PathBuf>,
    /// Human-readable summary table for standard output.
    pub summary: String,
}

/// Executes the configured experiments and writes all artifacts into
/// `config.out_dir`: per-family CSVs, plus `run_manifest.txt` recording the
/// resolved configuration. Returns the file list and a summary table.
pub fn run(config: &ExperimentConfig, scope: RunScope) -> Result<RunReport, ExperimentError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|source| ExperimentError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    let mut summary = String::new();

    if matches!(scope, RunScope::SweepOnly | RunScope::Full) {
        summary.push_str("sweep results (broadband dB):\n");
        summary.push_str("  family  rows  wng_db range          df_db range\n");
        for &family in &config.families {
            let rows = sweep(family, config)?;
            for (metric, prefix) in [(SweepMetric::Wng, "wng"), (SweepMetric::Df, "df")] {
                let path = config.out_dir.join(format!("{prefix}_{family}.csv"));
                emit_csv(&CsvContent::SweepParam { rows: &rows, metric }, &path)?;
                files.push(path);
            }
            let path = config.out_dir.join(format!("wxd_{family}.csv"));
            emit_csv(&CsvContent::TradeOff { rows: &rows }, &path)?;
            files.push(path);

            let (wng_lo, wng_hi) = extremes(rows.iter().map(|r| r.wng_db));
            let (df_lo, df_hi) = extremes(rows.iter().map(|r| r.df_db));
            summary.push_str(&format!(
                "  {:<6}  {:>4}  {:>9}..{:<9}  {:>8}..{}\n",
                family.tag(),
                rows.len(),
                format_sig6(wng_lo),
                format_sig6(wng_hi),
                format_sig6(df_lo),
                format_sig6(df_hi),
            ));
        }
    }

    if matches!(scope, RunScope::MatchOnly | RunScope::Full) {
        summary.push_str(&format!(
            "matched to target broadband WNG {} dB:\n",
            format_sig6(config.target_wng_db)
        ));
        summary.push_str("  family  param         achieved_wng_db  deviation_db\n");
        for &family in &config.families {
            let matched = match_wng(family, config, config.target_wng_db)?;
            let path = config.out_dir.join(format!("freq_df_{family}.csv"));
            emit_csv(
                &CsvContent::Spectrum {
                    curve: &matched.df_curve,
                },
                &path,
            )?;
            files.push(path);
            summary.push_str(&format!(
                "  {:<6}  {:<12}  {:>15}  {:>12}\n",
                family.tag(),
                format_sig6(matched.raw_param),
                format_sig6(matched.achieved_wng_db),
                format_sig6(matched.achieved_wng_db - config.target_wng_db),
            ));
        }
    }

    let manifest_path = config.out_dir.join("run_manifest.txt");
    std::fs::write(&manifest_path, config.manifest()).map_err(|source| ExperimentError::Io {
        path: manifest_path.clone(),
        source,
    })?;
    files.push(manifest_path);

    Ok(RunReport { files, summary })
}

fn extremes(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
