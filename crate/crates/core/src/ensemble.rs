//! Grand partition function and macroscopic observables.
//!
//! In the quasicontinuum limit
//!
//! ```text
//! ln Z = ∫ g(eps) exp(-alpha - beta eps) d eps
//! U    = -∂ ln Z / ∂ beta
//! N    = -∂ ln Z / ∂ alpha   (= ln Z, every term carries exp(-alpha))
//! p    = ln Z / (beta V)      for g ∝ V, 0 for g independent of V
//! ```
//!
//! The parabolic density of states has closed forms (see [`closed_form`]);
//! every other kind goes through adaptive quadrature.

use rayon::prelude::*;
use serde::Serialize;

use crate::dos::{DensityOfStates, DosKind, EnsembleParams, VolumeCoupling};
use crate::error::{Error, Result};
use crate::numdiff;
use crate::quadrature::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub ln_z: f64,
    pub wealth_u: f64,
    pub population_n: f64,
    pub pressure_p: f64,
    pub params: EnsembleParams,
}

impl Observables {
    /// `-(1/beta) ∂ ln Z / ∂V`, taken literally with its leading minus sign.
    ///
    /// [`Observables::pressure_p`] carries the positive convention; this is its
    /// negation.
    pub fn literal_signed_pressure(&self) -> f64 {
        -self.pressure_p
    }
}

/// Closed forms for `g(eps) = C V eps (eps* - eps)` on `[0, eps*]`.
///
/// With `x = beta eps*`:
///
/// ```text
/// ln Z = C V e^-alpha [x - 2 + (x + 2) e^-x] / beta^3
/// U    = C V e^-alpha [(x^2 + 4x + 6) e^-x + 2x - 6] / beta^4
/// ```
///
/// Both brackets vanish like `x^3` and `x^4` at small `x`, so below `x = 1`
/// they are summed from their Taylor series instead.
pub mod closed_form {
    const SERIES_BELOW: f64 = 1.0;

    /// `[x - 2 + (x + 2) e^-x] / x^3`.
    pub(crate) fn h3(x: f64) -> f64 {
        if x < SERIES_BELOW {
            // sum_k (-1)^k (k+1)/(k+3)! x^k
            let mut term = 1.0 / 6.0;
            let mut sum = term;
            for k in 1..60 {
                let kf = k as f64;
                term *= -x * (kf + 1.0) / (kf * (kf + 3.0));
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            sum
        } else {
            (x - 2.0 + (x + 2.0) * (-x).exp()) / (x * x * x)
        }
    }

    /// `[(x^2 + 4x + 6) e^-x + 2x - 6] / x^4`.
    pub(crate) fn h4(x: f64) -> f64 {
        if x < SERIES_BELOW {
            // sum_k (-1)^k (k+1)(k+2)/(k+4)! x^k
            let mut term = 1.0 / 12.0;
            let mut sum = term;
            for k in 1..60 {
                let kf = k as f64;
                term *= -x * (kf + 2.0) / ((kf + 4.0) * kf);
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            sum
        } else {
            ((x * x + 4.0 * x + 6.0) * (-x).exp() + 2.0 * x - 6.0) / (x * x * x * x)
        }
    }

    pub fn ln_z(c: f64, eps_star: f64, alpha: f64, beta: f64, volume: f64) -> f64 {
        c * volume * (-alpha).exp() * eps_star.powi(3) * h3(beta * eps_star)
    }

    pub fn wealth(c: f64, eps_star: f64, alpha: f64, beta: f64, volume: f64) -> f64 {
        c * volume * (-alpha).exp() * eps_star.powi(4) * h4(beta * eps_star)
    }

    pub fn population(c: f64, eps_star: f64, alpha: f64, beta: f64, volume: f64) -> f64 {
        ln_z(c, eps_star, alpha, beta, volume)
    }

    /// `p = C e^-alpha [..] / beta^4`; independent of `V`.
    pub fn pressure(c: f64, eps_star: f64, alpha: f64, beta: f64) -> f64 {
        ln_z(c, eps_star, alpha, beta, 1.0) / beta
    }
}

fn volume_scale(dos: &DensityOfStates, params: &EnsembleParams) -> f64 {
    match dos.coupling() {
        VolumeCoupling::Proportional => params.volume(),
        VolumeCoupling::Fixed => 1.0,
    }
}

/// `∫ eps^moment g(eps) e^(-beta eps) d eps` at unit volume, without the `e^-alpha` factor.
fn boltzmann_moment(dos: &DensityOfStates, beta: f64, moment: i32) -> Result<f64> {
    dos.validate().into_result()?;
    let integrand = |eps: f64| -> Result<f64> {
        let g = dos.evaluate_unit(eps)?;
        if g == 0.0 {
            return Ok(0.0);
        }
        Ok(eps.powi(moment) * g * (-beta * eps).exp())
    };
    let tol = Tolerance::default();
    let estimate = match dos.kind() {
        DosKind::Parabolic { eps_star, .. } => quadrature::integrate(integrand, 0.0, *eps_star, tol)?,
        DosKind::Tabulated { samples } => {
            let grid: Vec<f64> = samples.iter().map(|s| s.0).collect();
            quadrature::integrate_piecewise(integrand, &grid, tol)?
        }
        DosKind::MaxPressure { profile, cutoff } => match cutoff {
            Some(eps0) => quadrature::integrate(integrand, 0.0, *eps0, tol)?,
            None if profile.c3 == 0.0 => quadrature::integrate_to_infinity(integrand, 0.0, tol)?,
            None => {
                return Err(Error::Divergent(
                    "max-pressure density grows double-exponentially; a wealth cutoff is required"
                        .into(),
                ))
            }
        },
    };
    Ok(estimate.value)
}

/// `ln Z` by adaptive quadrature, whatever the kind of `dos`.
pub fn ln_grand_partition_quadrature(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    let moment = boltzmann_moment(dos, params.beta(), 0)?;
    Ok(volume_scale(dos, params) * (-params.alpha()).exp() * moment)
}

/// `U` as the direct integral `∫ eps g(eps) e^(-alpha - beta eps) d eps`.
pub fn wealth_quadrature(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    let moment = boltzmann_moment(dos, params.beta(), 1)?;
    Ok(volume_scale(dos, params) * (-params.alpha()).exp() * moment)
}

pub fn ln_grand_partition(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    match dos.kind() {
        DosKind::Parabolic { c, eps_star } => Ok(closed_form::ln_z(
            *c,
            *eps_star,
            params.alpha(),
            params.beta(),
            params.volume(),
        )),
        _ => ln_grand_partition_quadrature(dos, params),
    }
}

pub fn wealth(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    match dos.kind() {
        DosKind::Parabolic { c, eps_star } => Ok(closed_form::wealth(
            *c,
            *eps_star,
            params.alpha(),
            params.beta(),
            params.volume(),
        )),
        _ => wealth_quadrature(dos, params),
    }
}

/// `-∂ ln Z / ∂ beta` by Richardson-extrapolated central differences.
pub fn wealth_by_difference(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    let beta = params.beta();
    let h = numdiff::default_step(beta).min(0.5 * beta);
    let d = numdiff::central_derivative(
        |b| ln_grand_partition(dos, &params.with_beta(b)?),
        beta,
        h,
    )?;
    Ok(-d)
}

/// `N = ln Z`.
pub fn population(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    ln_grand_partition(dos, params)
}

/// `-∂ ln Z / ∂ alpha` by Richardson-extrapolated central differences.
pub fn population_by_difference(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    let alpha = params.alpha();
    let d = numdiff::central_derivative(
        |a| ln_grand_partition(dos, &params.with_alpha(a)?),
        alpha,
        numdiff::default_step(alpha),
    )?;
    Ok(-d)
}

pub fn pressure(dos: &DensityOfStates, params: &EnsembleParams) -> Result<f64> {
    match dos.coupling() {
        VolumeCoupling::Fixed => Ok(0.0),
        VolumeCoupling::Proportional => {
            Ok(ln_grand_partition(dos, params)? / (params.beta() * params.volume()))
        }
    }
}

pub fn observables(dos: &DensityOfStates, params: &EnsembleParams) -> Result<Observables> {
    let ln_z = ln_grand_partition(dos, params)?;
    let pressure_p = match dos.coupling() {
        VolumeCoupling::Fixed => 0.0,
        VolumeCoupling::Proportional => ln_z / (params.beta() * params.volume()),
    };
    Ok(Observables {
        ln_z,
        wealth_u: wealth(dos, params)?,
        population_n: ln_z,
        pressure_p,
        params: *params,
    })
}

/// `P(E_s, N_s) = exp(-alpha N_s - beta E_s) / Z` for reservoir parameters `params`.
pub fn state_probability(
    wealth_e: f64,
    individuals: u64,
    params: &EnsembleParams,
    ln_z: f64,
) -> Result<f64> {
    if !(wealth_e >= 0.0 && wealth_e.is_finite()) {
        return Err(Error::domain(format!("state wealth must be finite and >= 0, got {wealth_e}")));
    }
    if !ln_z.is_finite() {
        return Err(Error::domain(format!("ln Z must be finite, got {ln_z}")));
    }
    let p = (-params.alpha() * individuals as f64 - params.beta() * wealth_e - ln_z).exp();
    if p > 1.0 + 1e-12 {
        return Err(Error::domain(format!(
            "probability {p} exceeds 1; ln Z does not belong to these parameters"
        )));
    }
    Ok(p.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub temperature: f64,
    pub ln_z: f64,
    pub wealth_u: f64,
    pub population_n: f64,
    pub pressure_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column(&self, pick: impl Fn(&SweepRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(pick).collect()
    }
}

/// Evenly spaced temperatures from `t_min` to `t_max` inclusive.
pub fn temperature_grid(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::domain("sweep needs at least one step"));
    }
    if !(t_min > 0.0 && t_min.is_finite() && t_max.is_finite()) {
        return Err(Error::domain(format!("temperatures must be positive, got [{t_min}, {t_max}]")));
    }
    if steps == 1 {
        return Ok(vec![t_min]);
    }
    if !(t_min < t_max) {
        return Err(Error::domain(format!("need t_min < t_max, got [{t_min}, {t_max}]")));
    }
    let span = t_max - t_min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { t_max } else { t_min + span * i as f64 / last })
        .collect())
}

pub fn sweep_temperature(
    dos: &DensityOfStates,
    alpha: f64,
    volume: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<SweepTable> {
    let grid = temperature_grid(t_min, t_max, steps)?;
    let rows = grid
        .par_iter()
        .map(|&temperature| {
            let tag = |source: Error| Error::AtTemperature {
                temperature,
                source: Box::new(source),
            };
            let params = EnsembleParams::from_temperature(alpha, temperature, volume).map_err(tag)?;
            let obs = observables(dos, &params).map_err(tag)?;
            Ok(SweepRow {
                temperature,
                ln_z: obs.ln_z,
                wealth_u: obs.wealth_u,
                population_n: obs.population_n,
                pressure_p: obs.pressure_p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}
