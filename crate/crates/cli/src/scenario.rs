//! JSON scenario schema (version 1). Unknown keys are rejected everywhere.

use econ_ensemble::microstate::{EnumerationLimits, DEFAULT_E_TOL};
use econ_ensemble::variational::{FunctionalReading, StationarityOptions};
use econ_ensemble::{CountingMode, DensityOfStates, EnsembleParams, LevelSystem, VolumeCoupling};
use serde::Deserialize;

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub dos: Option<DosSpec>,
    #[serde(default)]
    pub params: Option<ParamsSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub enumerate: Option<EnumerateSpec>,
    #[serde(default)]
    pub equilibrate: Option<EquilibrateSpec>,
    #[serde(default)]
    pub optimize: Option<OptimizeSpec>,
}

fn proportional() -> VolumeCoupling {
    VolumeCoupling::Proportional
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DosSpec {
    Parabolic {
        c: f64,
        eps_star: f64,
    },
    Tabulated {
        samples: Vec<[f64; 2]>,
        #[serde(default = "proportional")]
        coupling: VolumeCoupling,
    },
    MaxPressure {
        c3: f64,
        c4: f64,
        alpha: f64,
        beta: f64,
        #[serde(default)]
        cutoff: Option<f64>,
        #[serde(default = "proportional")]
        coupling: VolumeCoupling,
    },
}

impl DosSpec {
    pub fn build(&self) -> Result<DensityOfStates, Failure> {
        let dos = match self {
            DosSpec::Parabolic { c, eps_star } => DensityOfStates::parabolic(*c, *eps_star),
            DosSpec::Tabulated { samples, coupling } => {
                DensityOfStates::tabulated(samples.iter().map(|s| (s[0], s[1])).collect(), *coupling)
            }
            DosSpec::MaxPressure {
                c3,
                c4,
                alpha,
                beta,
                cutoff,
                coupling,
            } => econ_ensemble::MaxPressureDos::new(*c3, *c4, *alpha, *beta)
                .and_then(|p| DensityOfStates::max_pressure(p, *cutoff, *coupling)),
        };
        dos.map_err(Failure::from)
    }
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub alpha: f64,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default = "unit")]
    pub volume: f64,
}

impl ParamsSpec {
    pub fn build(&self) -> Result<EnsembleParams, Failure> {
        let params = match (self.beta, self.temperature) {
            (Some(beta), None) => EnsembleParams::new(self.alpha, beta, self.volume),
            (None, Some(t)) => EnsembleParams::from_temperature(self.alpha, t, self.volume),
            _ => return Err(Failure::input("params: give exactly one of beta, temperature")),
        };
        params.map_err(Failure::from)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub alpha: f64,
    #[serde(default = "unit")]
    pub volume: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub eps: f64,
    pub weight: u32,
}

fn build_system(levels: &[LevelSpec]) -> Result<LevelSystem, Failure> {
    let eps: Vec<f64> = levels.iter().map(|l| l.eps).collect();
    let weights: Vec<u32> = levels.iter().map(|l| l.weight).collect();
    LevelSystem::from_pairs(&eps, &weights).map_err(Failure::from)
}

fn default_e_tol() -> f64 {
    DEFAULT_E_TOL
}

fn default_max_individuals() -> u32 {
    EnumerationLimits::default().max_individuals
}

fn default_max_levels() -> usize {
    EnumerationLimits::default().max_levels
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateSpec {
    pub levels: Vec<LevelSpec>,
    pub n: u32,
    pub e: f64,
    #[serde(default)]
    pub mode: CountingMode,
    #[serde(default = "default_e_tol")]
    pub e_tol: f64,
    #[serde(default = "unit")]
    pub delta_e: f64,
    #[serde(default = "one_u32")]
    pub delta_n: u32,
    #[serde(default = "default_max_individuals")]
    pub max_individuals: u32,
    #[serde(default = "default_max_levels")]
    pub max_levels: usize,
}

impl EnumerateSpec {
    pub fn system(&self) -> Result<LevelSystem, Failure> {
        build_system(&self.levels)
    }

    pub fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_individuals: self.max_individuals,
            max_levels: self.max_levels,
        }
    }
}

fn default_tolerance() -> f64 {
    econ_ensemble::equilibria::DEFAULT_TOLERANCE
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibrateSpec {
    pub first: Vec<LevelSpec>,
    pub second: Vec<LevelSpec>,
    pub e_total: u32,
    pub n_total: u32,
    #[serde(default)]
    pub mode: CountingMode,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Economic pressures of the two systems, for the invasion verdict.
    #[serde(default)]
    pub pressures: Option<[f64; 2]>,
}

impl EquilibrateSpec {
    pub fn systems(&self) -> Result<(LevelSystem, LevelSystem), Failure> {
        Ok((build_system(&self.first)?, build_system(&self.second)?))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>, Failure> {
        if self.points < 2 || !(self.end > self.start) || !self.start.is_finite() || !self.end.is_finite() {
            return Err(Failure::input(format!(
                "grid needs >= 2 points on a finite non-empty range, got {} on [{}, {}]",
                self.points, self.start, self.end
            )));
        }
        let step = (self.end - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| if i == self.points - 1 { self.end } else { self.start + step * i as f64 })
            .collect())
    }
}

fn residual_grid() -> GridSpec {
    GridSpec {
        start: 0.0,
        end: 3.0,
        points: 64,
    }
}

fn plot_grid() -> GridSpec {
    GridSpec {
        start: 0.0,
        end: 2.0,
        points: 401,
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaritySpec {
    #[serde(default = "stationarity_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default = "default_trials")]
    pub num_perturbations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub reading: FunctionalReading,
}

fn stationarity_grid() -> GridSpec {
    GridSpec {
        start: 0.0,
        end: 1.0,
        points: 513,
    }
}

fn default_scale() -> f64 {
    StationarityOptions::default().scale
}

fn default_trials() -> usize {
    StationarityOptions::default().num_perturbations
}

fn default_seed() -> u64 {
    StationarityOptions::default().seed
}

impl Default for StationaritySpec {
    fn default() -> Self {
        Self {
            grid: stationarity_grid(),
            scale: default_scale(),
            num_perturbations: default_trials(),
            seed: default_seed(),
            reading: FunctionalReading::default(),
        }
    }
}

impl StationaritySpec {
    pub fn options(&self) -> StationarityOptions {
        StationarityOptions {
            num_perturbations: self.num_perturbations,
            scale: self.scale,
            seed: self.seed,
            reading: self.reading,
        }
    }
}

fn zero() -> f64 {
    0.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    #[serde(default = "unit")]
    pub alpha: f64,
    #[serde(default = "unit")]
    pub beta: f64,
    #[serde(default = "unit")]
    pub c1: f64,
    #[serde(default = "zero")]
    pub c2: f64,
    #[serde(default = "unit")]
    pub c3: f64,
    #[serde(default = "zero")]
    pub c4: f64,
    /// Minimum required economic volume; no default.
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default = "residual_grid")]
    pub residual_grid: GridSpec,
    #[serde(default)]
    pub stationarity: StationaritySpec,
    #[serde(default = "plot_grid")]
    pub plot: GridSpec,
}

pub fn parse(text: &str) -> Result<Scenario, Failure> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| Failure::input(format!("scenario: {e}")))?;
    if scenario.schema_version != SCHEMA_VERSION {
        return Err(Failure::input(format!(
            "unsupported schema_version {}, expected {SCHEMA_VERSION}",
            scenario.schema_version
        )));
    }
    Ok(scenario)
}
