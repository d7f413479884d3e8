//! Configuration schemas for the batch front end.
//!
//! Both configs are TOML with a mandatory `format_version = 1` and unknown
//! keys rejected. Physics inputs are natural units (`hbar = g = 1`, so
//! `tau1 = pi`) unless the optional `[physical_units]` section is present,
//! in which case the coupling is computed from the cavity geometry, checked
//! against the rotating-wave limit, and normalized away once at load time.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analysis::SweepGrid;
use crate::jch::{coupling_from_geometry, CavityGeometry, PhysicalParams};
use crate::schedule::{search_timings, GateTimings, JitterModel, JumpMode, ScheduleOptions};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn check_format_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Config(format!(
            "unsupported format_version {version} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeField {
    Ideal,
    Physical,
}

impl From<ModeField> for JumpMode {
    fn from(mode: ModeField) -> JumpMode {
        match mode {
            ModeField::Ideal => JumpMode::Ideal,
            ModeField::Physical => JumpMode::Physical,
        }
    }
}

/// Optional physical-unit inputs; converted to natural units at load.
///
/// `omega` is the photon angular frequency, the geometry fields feed the
/// mode-function coupling formula, and `nu` is the hop strength in the same
/// energy units as the computed coupling.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalUnitsConfig {
    pub omega: f64,
    pub mode_volume: f64,
    pub dipole: f64,
    pub atom_position: f64,
    pub wavelength: f64,
    pub n_half_waves: u32,
    pub nu: f64,
    /// Defaults to 1 (treat the other fields as already rescaled).
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    1.0
}

impl PhysicalUnitsConfig {
    /// Compute the coupling from geometry, enforce the rotating-wave limit,
    /// and return `(g, nu, tau1_seconds)` in the caller's units.
    pub fn resolve(&self) -> Result<(f64, f64, f64)> {
        let geometry = CavityGeometry::new(
            self.mode_volume,
            self.dipole,
            self.atom_position,
            self.wavelength,
            self.n_half_waves,
        )?;
        let params = PhysicalParams::new(self.omega, 1.0, self.nu, self.hbar)?;
        let g = coupling_from_geometry(&params, &geometry)?;
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::Config(
                "geometry puts the atom at a node: coupling vanishes".to_string(),
            ));
        }
        let params = PhysicalParams::new(self.omega, g, self.nu, self.hbar)?;
        if !params.rwa_ok() {
            return Err(Error::Config(format!(
                "coupling too strong for the rotating-wave regime: g/(hbar omega) = {:.3e} > 1e-3",
                g / (self.hbar * self.omega)
            )));
        }
        let tau1_seconds = std::f64::consts::PI * self.hbar / g;
        Ok((g, self.nu, tau1_seconds))
    }
}

/// Configuration of a `simulate` run.
// TODO: expose per-cavity couplings here once asymmetric-cavity studies
// need them through the front end; the library builders already take them.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format_version: u32,
    #[serde(default = "default_mode")]
    pub mode: ModeField,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    /// Exhaustive-search bound used when `n1`/`n2` are not given.
    #[serde(default = "default_search_bound")]
    pub search_bound: u32,
    #[serde(default = "default_n_max")]
    pub n_max: u8,
    #[serde(default)]
    pub jitter_sigma: f64,
    #[serde(default = "default_seed")]
    pub jitter_seed: u64,
    #[serde(default)]
    pub jitter_jumps: bool,
    #[serde(default = "default_true")]
    pub g_during_jump: bool,
    #[serde(default)]
    pub compensate_wait: bool,
    #[serde(default)]
    pub exact_long_wait: bool,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub physical_units: Option<PhysicalUnitsConfig>,
}

fn default_mode() -> ModeField {
    ModeField::Ideal
}
fn default_g() -> f64 {
    1.0
}
fn default_nu() -> f64 {
    100.0
}
fn default_search_bound() -> u32 {
    10
}
fn default_n_max() -> u8 {
    2
}
fn default_seed() -> u64 {
    1
}
fn default_true() -> bool {
    true
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Fully validated run parameters, in natural units.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub timings: GateTimings,
    pub n_max: u8,
    pub options: ScheduleOptions,
    pub jitter: Option<JitterModel>,
    pub output_dir: PathBuf,
    /// `tau1` in seconds when physical units were supplied.
    pub tau1_seconds: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad run config: {e}")))?;
        check_format_version(config.format_version)?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Validate, pick timing integers if absent, convert physical units.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        if self.n_max < 2 {
            return Err(Error::Config(format!(
                "n_max must be at least 2 to hold a double excitation (got {})",
                self.n_max
            )));
        }
        if self.n_max > 9 {
            return Err(Error::Config(format!(
                "n_max above 9 is not supported (got {})",
                self.n_max
            )));
        }
        if !self.jitter_sigma.is_finite() || self.jitter_sigma < 0.0 {
            return Err(Error::Config(format!(
                "jitter_sigma must be non-negative (got {})",
                self.jitter_sigma
            )));
        }
        if self.search_bound < 1 {
            return Err(Error::Config("search_bound must be at least 1".to_string()));
        }

        let (g, nu, tau1_seconds) = match &self.physical_units {
            Some(section) => {
                let (g_phys, nu_phys, tau1_s) = section.resolve()?;
                // normalize to g = 1; only the ratio nu/g enters the dynamics
                (1.0, nu_phys / g_phys, Some(tau1_s))
            }
            None => (self.g, self.nu, None),
        };

        let (n1, n2) = match (self.n1, self.n2) {
            (Some(n1), Some(n2)) => (n1, n2),
            (None, None) => {
                let ranked = search_timings(self.search_bound);
                let best = ranked
                    .first()
                    .ok_or_else(|| Error::Config("timing search returned nothing".to_string()))?;
                (best.n1, best.n2)
            }
            _ => {
                return Err(Error::Config(
                    "give both n1 and n2, or neither (auto-search)".to_string(),
                ))
            }
        };
        let timings = GateTimings::new(n1, n2, g, nu)?;

        let jitter = if self.jitter_sigma > 0.0 {
            let model = JitterModel::new(self.jitter_sigma, self.jitter_seed)?;
            Some(if self.jitter_jumps {
                model.with_jumps()
            } else {
                model
            })
        } else {
            None
        };

        Ok(ResolvedRun {
            timings,
            n_max: self.n_max,
            options: ScheduleOptions {
                mode: self.mode.into(),
                g_during_jump: self.g_during_jump,
                compensate_wait: self.compensate_wait,
                exact_long_wait: self.exact_long_wait,
            },
            jitter,
            output_dir: self.output_dir.clone(),
            tau1_seconds,
        })
    }
}

/// Configuration of a `sweep` run. Omitted axes default to singletons; an
/// explicitly empty axis produces an empty grid (and an empty table).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub format_version: u32,
    #[serde(default = "default_mode")]
    pub mode: ModeField,
    #[serde(default = "default_pairs")]
    pub timing_pairs: Vec<[u32; 2]>,
    #[serde(default = "default_nu_axis")]
    pub nu_over_g: Vec<f64>,
    #[serde(default = "default_sigma_axis")]
    pub jitter_sigma: Vec<f64>,
    #[serde(default = "default_gflag_axis")]
    pub g_during_jump: Vec<bool>,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default = "default_n_max")]
    pub n_max: u8,
    /// Worker threads for grid evaluation; defaults to single-threaded,
    /// 0 means one worker per core.
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_pairs() -> Vec<[u32; 2]> {
    vec![[4, 6]]
}
fn default_nu_axis() -> Vec<f64> {
    vec![100.0]
}
fn default_sigma_axis() -> Vec<f64> {
    vec![0.0]
}
fn default_gflag_axis() -> Vec<bool> {
    vec![true]
}
fn default_workers() -> usize {
    1
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SweepConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad sweep config: {e}")))?;
        check_format_version(config.format_version)?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn grid(&self) -> Result<SweepGrid> {
        if self.n_max < 2 || self.n_max > 9 {
            return Err(Error::Config(format!(
                "n_max must be in 2..=9 (got {})",
                self.n_max
            )));
        }
        if self.jitter_sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::Config(
                "jitter_sigma values must be non-negative".to_string(),
            ));
        }
        Ok(SweepGrid {
            mode: self.mode.into(),
            timing_pairs: self.timing_pairs.iter().map(|p| (p[0], p[1])).collect(),
            nu_over_g: self.nu_over_g.clone(),
            jitter_sigma: self.jitter_sigma.clone(),
            g_during_jump: self.g_during_jump.clone(),
            base_seed: self.base_seed,
            n_max: self.n_max,
        })
    }
}
