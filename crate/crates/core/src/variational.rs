//! Maximum-pressure profiles and their checks.
//!
//! Writing the pressure as a functional of the volume profile `V(eps)` and
//! the density of states `g(eps)`,
//!
//! ```text
//! p[V, g] = ∫ V'(eps) (e^(-alpha - beta eps) g'(eps) - beta g(eps)) / beta d eps,
//! ```
//!
//! its Euler–Lagrange system
//!
//! ```text
//! e^(-alpha-beta x) [beta V'(x) (1 - e^(alpha+beta x)) - V''(x)] / beta = 0
//! e^(-alpha-beta x) [beta g'(x) (e^(alpha+beta x) + 1) - g''(x)] / beta = 0
//! ```
//!
//! is solved by
//!
//! ```text
//! V(eps) = c1 exp(-alpha - e^(alpha + beta eps)) / beta + c2
//! g(eps) = c3 exp(e^(alpha + beta eps) - alpha) / beta + c4
//! ```
//!
//! `g` grows double-exponentially, so residuals are evaluated on
//! [`Scaled`] numbers and plain evaluation refuses log-exponents above
//! [`LOG_EXP_LIMIT`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::scaled::Scaled;

/// Largest natural-log exponent handed to `exp`.
pub const LOG_EXP_LIMIT: f64 = 700.0;

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {x}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("beta must be positive and finite, got {beta}")))
    }
}

/// `ln u = alpha + beta eps`, with the range check.
fn inner_exponent(alpha: f64, beta: f64, eps: f64) -> Result<f64> {
    let ln_u = alpha + beta * eps;
    if ln_u > LOG_EXP_LIMIT {
        return Err(Error::Overflow {
            eps,
            exponent: ln_u,
            limit: LOG_EXP_LIMIT,
        });
    }
    Ok(ln_u)
}

/// Value, first and second derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Scaled,
    pub d1: Scaled,
    pub d2: Scaled,
}

/// A twice-differentiable profile of `eps`.
pub trait SmoothProfile {
    fn jet(&self, eps: f64) -> Result<Jet>;
}

/// `V(eps) = c1 exp(-alpha - e^(alpha + beta eps)) / beta + c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeProfile {
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl VolumeProfile {
    pub fn new(c1: f64, c2: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_finite("c1", c1)?;
        check_finite("c2", c2)?;
        check_finite("alpha", alpha)?;
        check_beta(beta)?;
        Ok(Self { c1, c2, alpha, beta })
    }

    /// Always finite: the exponential part only underflows.
    pub fn evaluate(&self, eps: f64) -> f64 {
        if self.c1 == 0.0 {
            return self.c2;
        }
        let u = (self.alpha + self.beta * eps).exp();
        self.c1 * (-self.alpha - u).exp() / self.beta + self.c2
    }
}

impl SmoothProfile for VolumeProfile {
    fn jet(&self, eps: f64) -> Result<Jet> {
        if self.c1 == 0.0 {
            return Ok(Jet {
                value: self.c2.into(),
                d1: Scaled::ZERO,
                d2: Scaled::ZERO,
            });
        }
        let ln_u = inner_exponent(self.alpha, self.beta, eps)?;
        let u = ln_u.exp();
        let w = -self.alpha - u;
        Ok(Jet {
            value: Scaled::new(self.c1 / self.beta, w) + self.c2.into(),
            // V' = -c1 u e^w, V'' = c1 beta u (u - 1) e^w
            d1: Scaled::new(-self.c1, w + ln_u),
            d2: Scaled::new(self.c1 * self.beta * (u - 1.0), w + ln_u),
        })
    }
}

/// `g(eps) = c3 exp(e^(alpha + beta eps) - alpha) / beta + c4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPressureDos {
    pub c3: f64,
    pub c4: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl MaxPressureDos {
    pub fn new(c3: f64, c4: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_finite("c3", c3)?;
        check_finite("c4", c4)?;
        check_finite("alpha", alpha)?;
        check_beta(beta)?;
        Ok(Self { c3, c4, alpha, beta })
    }

    pub fn evaluate(&self, eps: f64) -> Result<f64> {
        if self.c3 == 0.0 {
            return Ok(self.c4);
        }
        let u = inner_exponent(self.alpha, self.beta, eps)?.exp();
        let exponent = u - self.alpha;
        if exponent > LOG_EXP_LIMIT {
            return Err(Error::Overflow {
                eps,
                exponent,
                limit: LOG_EXP_LIMIT,
            });
        }
        Ok(self.c3 * exponent.exp() / self.beta + self.c4)
    }
}

impl SmoothProfile for MaxPressureDos {
    fn jet(&self, eps: f64) -> Result<Jet> {
        if self.c3 == 0.0 {
            return Ok(Jet {
                value: self.c4.into(),
                d1: Scaled::ZERO,
                d2: Scaled::ZERO,
            });
        }
        let ln_u = inner_exponent(self.alpha, self.beta, eps)?;
        let u = ln_u.exp();
        let w = u - self.alpha;
        Ok(Jet {
            value: Scaled::new(self.c3 / self.beta, w) + self.c4.into(),
            // g' = c3 u e^w, g'' = c3 beta u (1 + u) e^w
            d1: Scaled::new(self.c3, w + ln_u),
            d2: Scaled::new(self.c3 * self.beta * (1.0 + u), w + ln_u),
        })
    }
}

/// `slope * eps + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearProfile {
    pub slope: f64,
    pub intercept: f64,
}

impl SmoothProfile for LinearProfile {
    fn jet(&self, eps: f64) -> Result<Jet> {
        Ok(Jet {
            value: (self.slope * eps + self.intercept).into(),
            d1: self.slope.into(),
            d2: Scaled::ZERO,
        })
    }
}

/// `base + linear`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbed<P> {
    pub base: P,
    pub linear: LinearProfile,
}

impl<P: SmoothProfile> SmoothProfile for Perturbed<P> {
    fn jet(&self, eps: f64) -> Result<Jet> {
        let a = self.base.jet(eps)?;
        let b = self.linear.jet(eps)?;
        Ok(Jet {
            value: a.value + b.value,
            d1: a.d1 + b.d1,
            d2: a.d2 + b.d2,
        })
    }
}

pub fn optimal_volume_profile(c1: f64, c2: f64, alpha: f64, beta: f64) -> Result<VolumeProfile> {
    VolumeProfile::new(c1, c2, alpha, beta)
}

pub fn optimal_dos_profile(c3: f64, c4: f64, alpha: f64, beta: f64) -> Result<MaxPressureDos> {
    MaxPressureDos::new(c3, c4, alpha, beta)
}

/// Largest Euler–Lagrange residuals over a grid.
///
/// `max_abs_*` is the residual itself (it may saturate to infinity where the
/// profile does). `max_rel_*` divides the bracket by the larger of its two
/// terms, which is the figure of merit that stays meaningful while `g`
/// spans hundreds of orders of magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs_residual_v: f64,
    pub max_abs_residual_g: f64,
    pub max_rel_residual_v: f64,
    pub max_rel_residual_g: f64,
}

/// Residuals of the Euler–Lagrange system for the closed-form pair, using
/// the `(alpha, beta)` of `vp`.
pub fn euler_lagrange_residual(
    vp: &VolumeProfile,
    gp: &MaxPressureDos,
    grid: &[f64],
) -> Result<ResidualReport> {
    euler_lagrange_residual_with(vp, gp, vp.alpha, vp.beta, grid)
}

pub fn euler_lagrange_residual_with(
    vp: &dyn SmoothProfile,
    gp: &dyn SmoothProfile,
    alpha: f64,
    beta: f64,
    grid: &[f64],
) -> Result<ResidualReport> {
    check_finite("alpha", alpha)?;
    check_beta(beta)?;
    let mut report = ResidualReport {
        max_abs_residual_v: 0.0,
        max_abs_residual_g: 0.0,
        max_rel_residual_v: 0.0,
        max_rel_residual_g: 0.0,
    };
    for &x in grid {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("grid points must be >= 0, got {x}")));
        }
        let ln_u = inner_exponent(alpha, beta, x)?;
        let u = ln_u.exp();
        let prefactor_ln = -ln_u - beta.ln();

        let v = vp.jet(x)?;
        let (abs_v, rel_v) = bracket(v.d1 * (beta * (1.0 - u)), v.d2, prefactor_ln);
        let g = gp.jet(x)?;
        let (abs_g, rel_g) = bracket(g.d1 * (beta * (u + 1.0)), g.d2, prefactor_ln);

        report.max_abs_residual_v = report.max_abs_residual_v.max(abs_v);
        report.max_abs_residual_g = report.max_abs_residual_g.max(abs_g);
        report.max_rel_residual_v = report.max_rel_residual_v.max(rel_v);
        report.max_rel_residual_g = report.max_rel_residual_g.max(rel_g);
    }
    Ok(report)
}

/// `e^prefactor_ln (first - second)`: absolute value and value relative to
/// `max(|first|, |second|)`.
fn bracket(first: Scaled, second: Scaled, prefactor_ln: f64) -> (f64, f64) {
    let diff = first - second;
    let abs = if diff.is_zero() {
        0.0
    } else {
        (diff.ln_abs() + prefactor_ln).exp()
    };
    let scale = if first.ln_abs() >= second.ln_abs() { first } else { second };
    (abs, diff.ratio_abs(&scale))
}

/// Result of cutting the wealth axis where the volume profile reaches `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffResult {
    pub eps0: f64,
    pub level_mass: f64,
}

const CUTOFF_TOL: f64 = 1e-12;

/// The unique `eps0` with `V(eps0) = b`, by bisection to an absolute width of `1e-12`.
pub fn wealth_cutoff(vp: &VolumeProfile, b: f64) -> Result<f64> {
    if !(vp.c1 > 0.0) {
        return Err(Error::NoRoot(format!(
            "c1 = {} does not give a strictly decreasing volume profile",
            vp.c1
        )));
    }
    let v0 = vp.evaluate(0.0);
    if !(b > vp.c2 && b <= v0) {
        return Err(Error::NoRoot(format!(
            "b = {b} lies outside (c2, V(0)] = ({}, {v0}]",
            vp.c2
        )));
    }
    if b == v0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while vp.evaluate(hi) >= b {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoRoot(format!("V never drops below b = {b}")));
        }
    }
    while hi - lo > CUTOFF_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if vp.evaluate(mid) >= b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `∫_0^eps0 g(eps) d eps`, the level count below the cutoff.
pub fn cutoff_level_mass(gp: &MaxPressureDos, eps0: f64) -> Result<f64> {
    if !(eps0 >= 0.0 && eps0.is_finite()) {
        return Err(Error::domain(format!("eps0 must be finite and >= 0, got {eps0}")));
    }
    if eps0 == 0.0 {
        return Ok(0.0);
    }
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-10,
        ..Tolerance::default()
    };
    Ok(quadrature::integrate(|eps| gp.evaluate(eps), 0.0, eps0, tol)?.value)
}

pub fn cutoff(vp: &VolumeProfile, gp: &MaxPressureDos, b: f64) -> Result<CutoffResult> {
    let eps0 = wealth_cutoff(vp, b)?;
    Ok(CutoffResult {
        eps0,
        level_mass: cutoff_level_mass(gp, eps0)?,
    })
}

/// Where the Boltzmann factor sits in the pressure integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalReading {
    /// `V' (e^(-alpha-beta eps) g' - beta g) / beta`, the integrand whose
    /// Euler–Lagrange system the closed forms solve.
    #[default]
    Printed,
    /// `V' (g' - beta g) e^(-alpha-beta eps) / beta`, the literal derivative
    /// of `g e^(-alpha-beta eps)`.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityOptions {
    pub num_perturbations: usize,
    /// Perturbation amplitude relative to `max |V|` and `max |g|` on the grid.
    pub scale: f64,
    pub seed: u64,
    pub reading: FunctionalReading,
}

impl Default for StationarityOptions {
    fn default() -> Self {
        Self {
            num_perturbations: 8,
            scale: 1e-2,
            seed: 0x5eed,
            reading: FunctionalReading::Printed,
        }
    }
}

/// Outcome of perturbing `(V, g)` jointly by `s (eta_V, eta_g)` with
/// `eta = 0` at both grid ends.
///
/// At a stationary point `p(x + s eta) - p(x)` is `O(s^2)`, so
/// `shrink_ratio = change(s) / change(s/2)` approaches 4; away from one it
/// approaches 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationarityReport {
    pub reading: FunctionalReading,
    pub scale: f64,
    /// `max_eta |p(x + s eta) - p(x)|`.
    pub max_change: f64,
    /// Same at `s / 2`.
    pub max_change_half: f64,
    pub shrink_ratio: Option<f64>,
    /// `max_eta |p(x + s eta) - p(x - s eta)| / (2 s)`.
    pub max_first_variation: f64,
    /// First variation over the L1 norm of its integrand; scale free in `[0, 1]`.
    pub max_relative_first_variation: f64,
}

impl StationarityReport {
    /// Second-order shrinkage of the functional change.
    pub fn is_stationary(&self) -> bool {
        self.shrink_ratio.is_some_and(|r| r >= 3.5)
    }
}

const MIN_GRID: usize = 16;

/// Three-point derivative on a possibly non-uniform grid.
fn grid_derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = x[i] - x[i - 1];
        let h2 = x[i + 1] - x[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1]
            + (h2 - h1) / (h1 * h2) * f[i]
            + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1]
        - h1 / (h2 * (h1 + h2)) * f[2];
    let (ha, hb) = (x[n - 1] - x[n - 2], x[n - 2] - x[n - 3]);
    d[n - 1] = (2.0 * ha + hb) / (ha * (ha + hb)) * f[n - 1] - (ha + hb) / (ha * hb) * f[n - 2]
        + ha / (hb * (ha + hb)) * f[n - 3];
    d
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// Discretized pressure functional on a fixed grid.
struct PressureFunctional {
    grid: Vec<f64>,
    weights: Vec<f64>,
    boltzmann: Vec<f64>,
    beta: f64,
    reading: FunctionalReading,
}

impl PressureFunctional {
    fn new(grid: &[f64], alpha: f64, beta: f64, reading: FunctionalReading) -> Self {
        Self {
            grid: grid.to_vec(),
            weights: trapezoid_weights(grid),
            boltzmann: grid.iter().map(|&x| (-alpha - beta * x).exp()).collect(),
            beta,
            reading,
        }
    }

    /// Integrand of the pressure at each node, given `V'`, `g` and `g'`.
    fn integrand(&self, dv: &[f64], g: &[f64], dg: &[f64]) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| {
                let e = self.boltzmann[i];
                let bracket = match self.reading {
                    FunctionalReading::Printed => e * dg[i] - self.beta * g[i],
                    FunctionalReading::Corrected => (dg[i] - self.beta * g[i]) * e,
                };
                dv[i] * bracket / self.beta
            })
            .collect()
    }

    fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(f, w)| f * w).sum()
    }

    fn value(&self, v: &[f64], g: &[f64]) -> f64 {
        let dv = grid_derivative(&self.grid, v);
        let dg = grid_derivative(&self.grid, g);
        self.integrate(&self.integrand(&dv, g, &dg))
    }
}

/// Random smooth bump vanishing at both grid ends, normalized to `max |eta| = 1`.
fn random_bump(rng: &mut ChaCha8Rng, grid: &[f64]) -> Vec<f64> {
    let (x0, x1) = (grid[0], grid[grid.len() - 1]);
    let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut eta: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let t = (x - x0) / (x1 - x0);
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * std::f64::consts::PI * t).sin())
                .sum()
        })
        .collect();
    let peak = eta.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if peak > 0.0 {
        eta.iter_mut().for_each(|e| *e /= peak);
    }
    let last = eta.len() - 1;
    eta[0] = 0.0;
    eta[last] = 0.0;
    eta
}

fn axpy(base: &[f64], k: f64, dir: &[f64]) -> Vec<f64> {
    base.iter().zip(dir).map(|(b, d)| b + k * d).collect()
}

/// Tests whether the sampled `g` together with `vp` extremizes the discretized
/// pressure functional.
pub fn stationarity_check(
    grid: &[f64],
    g: &[f64],
    vp: &VolumeProfile,
    alpha: f64,
    beta: f64,
    opts: &StationarityOptions,
) -> Result<StationarityReport> {
    if grid.len() < MIN_GRID {
        return Err(Error::Configuration(format!(
            "stationarity grid needs at least {MIN_GRID} points, got {}",
            grid.len()
        )));
    }
    if g.len() != grid.len() {
        return Err(Error::Configuration(format!(
            "{} density samples for {} grid points",
            g.len(),
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().chain(g).any(|x| !x.is_finite()) {
        return Err(Error::Configuration(
            "grid must be finite and strictly increasing, samples finite".into(),
        ));
    }
    if !(opts.scale >= 0.0 && opts.scale.is_finite()) {
        return Err(Error::Configuration(format!("scale must be >= 0, got {}", opts.scale)));
    }
    check_finite("alpha", alpha)?;
    check_beta(beta)?;

    let functional = PressureFunctional::new(grid, alpha, beta, opts.reading);
    let v: Vec<f64> = grid.iter().map(|&x| vp.evaluate(x)).collect();
    let dv = grid_derivative(grid, &v);
    let dg = grid_derivative(grid, g);
    let base = functional.value(&v, g);
    let v_scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let g_scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let s = opts.scale;

    let mut report = StationarityReport {
        reading: opts.reading,
        scale: s,
        max_change: 0.0,
        max_change_half: 0.0,
        shrink_ratio: None,
        max_first_variation: 0.0,
        max_relative_first_variation: 0.0,
    };
    if s == 0.0 {
        return Ok(report);
    }
    for trial in 0..opts.num_perturbations {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(trial as u64);
        let eta_v: Vec<f64> = random_bump(&mut rng, grid).iter().map(|e| e * v_scale).collect();
        let eta_g: Vec<f64> = random_bump(&mut rng, grid).iter().map(|e| e * g_scale).collect();

        let shifted = |k: f64| functional.value(&axpy(&v, k, &eta_v), &axpy(g, k, &eta_g));
        let plus = shifted(s);
        let minus = shifted(-s);
        let plus_half = shifted(0.5 * s);

        report.max_change = report.max_change.max((plus - base).abs());
        report.max_change_half = report.max_change_half.max((plus_half - base).abs());
        report.max_first_variation = report.max_first_variation.max(((plus - minus) / (2.0 * s)).abs());

        // the functional is bilinear in (V', (g, g')), so its first variation
        // is the sum of two partial integrands
        let d_eta_v = grid_derivative(grid, &eta_v);
        let d_eta_g = grid_derivative(grid, &eta_g);
        let from_v = functional.integrand(&d_eta_v, g, &dg);
        let from_g = functional.integrand(&dv, &eta_g, &d_eta_g);
        let combined: Vec<f64> = from_v.iter().zip(&from_g).map(|(a, b)| a + b).collect();
        let variation = functional.integrate(&combined);
        let l1: f64 = combined
            .iter()
            .zip(&functional.weights)
            .map(|(f, w)| (f * w).abs())
            .sum();
        if l1 > 0.0 {
            report.max_relative_first_variation =
                report.max_relative_first_variation.max(variation.abs() / l1);
        }
    }
    if report.max_change_half > 0.0 {
        report.shrink_ratio = Some(report.max_change / report.max_change_half);
    }
    Ok(report)
}

/// Samples `gp` on an evenly spaced grid over `[start, end]`.
pub fn sample_profile(gp: &MaxPressureDos, start: f64, end: f64, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if points < 2 || !(end > start) {
        return Err(Error::Configuration(format!(
            "need at least two points on a non-empty range, got {points} on [{start}, {end}]"
        )));
    }
    let step = (end - start) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| if i == points - 1 { end } else { start + step * i as f64 })
        .collect();
    let values = grid.iter().map(|&x| gp.evaluate(x)).collect::<Result<Vec<_>>>()?;
    Ok((grid, values))
}

/// Both readings of the pressure integrand, and which of them the closed forms extremize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReadingComparison {
    pub printed: StationarityReport,
    pub corrected: StationarityReport,
}

impl ReadingComparison {
    pub fn stationary_readings(&self) -> Vec<FunctionalReading> {
        [self.printed, self.corrected]
            .iter()
            .filter(|r| r.is_stationary())
            .map(|r| r.reading)
            .collect()
    }
}

pub fn compare_readings(
    grid: &[f64],
    g: &[f64],
    vp: &VolumeProfile,
    alpha: f64,
    beta: f64,
    opts: &StationarityOptions,
) -> Result<ReadingComparison> {
    let with = |reading| StationarityOptions { reading, ..*opts };
    Ok(ReadingComparison {
        printed: stationarity_check(grid, g, vp, alpha, beta, &with(FunctionalReading::Printed))?,
        corrected: stationarity_check(grid, g, vp, alpha, beta, &with(FunctionalReading::Corrected))?,
    })
}
