//! Densities of states and the ensemble parameter conventions.
//!
//! Every density of states `g(eps)` in this crate lives on `eps >= 0` and
//! declares how it depends on the economic volume `V` through a
//! [`VolumeCoupling`]. Three kinds are provided: the parabolic profile
//! `g(eps) = C V eps (eps* - eps)` on `[0, eps*]`, the maximum-pressure
//! profile from [`crate::variational`], and piecewise-linear tabulated data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variational::MaxPressureDos;

/// Reservoir parameters `(alpha, beta)` and the economic volume `V`.
///
/// `alpha = 1/mu` is the reciprocal economic potential and `beta = 1/T` the
/// reciprocal economic temperature. `alpha` may take any finite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams {
    alpha: f64,
    beta: f64,
    volume: f64,
}

impl EnsembleParams {
    pub fn new(alpha: f64, beta: f64, volume: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be finite, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive and finite, got {beta}")));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::domain(format!("volume must be positive and finite, got {volume}")));
        }
        Ok(Self { alpha, beta, volume })
    }

    /// Builds parameters from an economic temperature `T` instead of `beta`.
    pub fn from_temperature(alpha: f64, temperature: f64, volume: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!(
                "temperature must be positive and finite, got {temperature}"
            )));
        }
        Self::new(alpha, 1.0 / temperature, volume)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Economic temperature `T = 1/beta`.
    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    /// Economic potential `mu = 1/alpha`; infinite when `alpha == 0`.
    pub fn potential(&self) -> f64 {
        1.0 / self.alpha
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.beta, self.volume)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, beta, self.volume)
    }

    pub fn with_volume(self, volume: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, volume)
    }
}

/// How `g` depends on the economic volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeCoupling {
    /// `g(eps; V) = V * g(eps; 1)`.
    Proportional,
    /// `g` does not depend on `V`.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DosKind {
    Parabolic { c: f64, eps_star: f64 },
    /// Maximum-pressure profile, optionally truncated at the wealth cutoff `eps0`.
    MaxPressure { profile: MaxPressureDos, cutoff: Option<f64> },
    Tabulated { samples: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOfStates {
    kind: DosKind,
    coupling: VolumeCoupling,
}

impl DensityOfStates {
    /// `g(eps) = -C V eps (eps - eps*)` on `[0, eps*]`, proportional to `V`.
    pub fn parabolic(c: f64, eps_star: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("parabolic C must be positive, got {c}")));
        }
        if !(eps_star > 0.0 && eps_star.is_finite()) {
            return Err(Error::domain(format!("parabolic eps* must be positive, got {eps_star}")));
        }
        Ok(Self {
            kind: DosKind::Parabolic { c, eps_star },
            coupling: VolumeCoupling::Proportional,
        })
    }

    pub fn max_pressure(
        profile: MaxPressureDos,
        cutoff: Option<f64>,
        coupling: VolumeCoupling,
    ) -> Result<Self> {
        if let Some(eps0) = cutoff {
            if !(eps0 >= 0.0 && eps0.is_finite()) {
                return Err(Error::domain(format!("cutoff must be finite and >= 0, got {eps0}")));
            }
        }
        Ok(Self {
            kind: DosKind::MaxPressure { profile, cutoff },
            coupling,
        })
    }

    /// Piecewise-linear table of `(eps, g)` samples.
    ///
    /// Only structural problems are rejected here; sign, boundary and grid
    /// ordering are reported by [`DensityOfStates::validate`].
    pub fn tabulated(samples: Vec<(f64, f64)>, coupling: VolumeCoupling) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("tabulated density of states needs at least one sample"));
        }
        if samples.iter().any(|(e, g)| !e.is_finite() || !g.is_finite()) {
            return Err(Error::domain("tabulated samples must be finite"));
        }
        Ok(Self {
            kind: DosKind::Tabulated { samples },
            coupling,
        })
    }

    pub fn kind(&self) -> &DosKind {
        &self.kind
    }

    pub fn coupling(&self) -> VolumeCoupling {
        self.coupling
    }

    /// Upper end of the support, `None` when unbounded.
    pub fn support_end(&self) -> Option<f64> {
        match &self.kind {
            DosKind::Parabolic { eps_star, .. } => Some(*eps_star),
            DosKind::MaxPressure { profile, cutoff } => {
                if cutoff.is_none() && profile.c3 == 0.0 && profile.c4 == 0.0 {
                    Some(0.0)
                } else {
                    *cutoff
                }
            }
            DosKind::Tabulated { samples } => samples.last().map(|s| s.0),
        }
    }

    /// Evaluates `g(eps)` at volume `V`.
    pub fn evaluate(&self, eps: f64, volume: f64) -> Result<f64> {
        if !(eps >= 0.0) {
            return Err(Error::domain(format!("eps must be >= 0, got {eps}")));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::domain(format!("volume must be positive, got {volume}")));
        }
        let scale = match self.coupling {
            VolumeCoupling::Proportional => volume,
            VolumeCoupling::Fixed => 1.0,
        };
        Ok(scale * self.evaluate_unit(eps)?)
    }

    /// `g(eps)` at unit volume.
    pub(crate) fn evaluate_unit(&self, eps: f64) -> Result<f64> {
        match &self.kind {
            DosKind::Parabolic { c, eps_star } => {
                if eps > *eps_star {
                    Ok(0.0)
                } else {
                    Ok(c * eps * (eps_star - eps))
                }
            }
            DosKind::MaxPressure { profile, cutoff } => match cutoff {
                Some(eps0) if eps > *eps0 => Ok(0.0),
                _ => profile.evaluate(eps),
            },
            DosKind::Tabulated { samples } => Ok(interpolate(samples, eps)),
        }
    }

    /// Checks the boundary, sign and grid invariants. Never fails; an empty
    /// report means the density is usable by the ensemble functions.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        match &self.kind {
            DosKind::Parabolic { .. } => {}
            DosKind::MaxPressure { profile, cutoff } => {
                // g is monotone in eps, so the endpoints bound its sign.
                let mut check = |eps: f64| match profile.evaluate(eps) {
                    Ok(g) if g < 0.0 => issues.push(DosIssue::NegativeDensity { eps, g }),
                    Ok(_) => {}
                    Err(_) => issues.push(DosIssue::Unevaluable { eps }),
                };
                check(0.0);
                match cutoff {
                    Some(eps0) => check(*eps0),
                    None if profile.c3 < 0.0 => issues.push(DosIssue::NegativeDensity {
                        eps: f64::INFINITY,
                        g: f64::NEG_INFINITY,
                    }),
                    None => {}
                }
            }
            DosKind::Tabulated { samples } => {
                if samples[0].0 != 0.0 {
                    issues.push(DosIssue::FirstSampleNotAtZero { eps: samples[0].0 });
                } else if samples[0].1 != 0.0 {
                    issues.push(DosIssue::NonZeroAtOrigin { g: samples[0].1 });
                }
                for (index, pair) in samples.windows(2).enumerate() {
                    if pair[1].0 <= pair[0].0 {
                        issues.push(DosIssue::NonIncreasingGrid { index: index + 1 });
                    }
                }
                for &(eps, g) in samples {
                    if g < 0.0 {
                        issues.push(DosIssue::NegativeDensity { eps, g });
                    }
                }
            }
        }
        ValidationReport { issues }
    }
}

/// Linear interpolation; zero outside the tabulated range.
fn interpolate(samples: &[(f64, f64)], eps: f64) -> f64 {
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if eps < first.0 || eps > last.0 {
        return 0.0;
    }
    let upper = samples.partition_point(|s| s.0 <= eps);
    if upper == samples.len() {
        return last.1;
    }
    let (e0, g0) = samples[upper - 1];
    let (e1, g1) = samples[upper];
    if eps == e0 {
        return g0;
    }
    g0 + (g1 - g0) * (eps - e0) / (e1 - e0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum DosIssue {
    NegativeDensity { eps: f64, g: f64 },
    NonZeroAtOrigin { g: f64 },
    FirstSampleNotAtZero { eps: f64 },
    /// Sample `index` does not have a larger `eps` than its predecessor.
    NonIncreasingGrid { index: usize },
    Unevaluable { eps: f64 },
}

impl fmt::Display for DosIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DosIssue::NegativeDensity { eps, g } => write!(f, "negative density g({eps}) = {g}"),
            DosIssue::NonZeroAtOrigin { g } => write!(f, "g(0) = {g}, expected 0"),
            DosIssue::FirstSampleNotAtZero { eps } => {
                write!(f, "first sample at eps = {eps}, expected 0")
            }
            DosIssue::NonIncreasingGrid { index } => {
                write!(f, "eps grid not strictly increasing at sample {index}")
            }
            DosIssue::Unevaluable { eps } => write!(f, "g cannot be evaluated at eps = {eps}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<DosIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidDos(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}
