//! Python bindings: `import econ_ensemble_py`.
//!
//! Parameter and validation errors raise `ValueError`; numerical failures
//! (divergence, overflow, non-convergence) raise `ArithmeticError`.

use econ_ensemble::equilibria::{self, Flow, InvasionVerdict};
use econ_ensemble::microstate::{self, DEFAULT_E_TOL};
use econ_ensemble::variational::{self, StationarityOptions};
use econ_ensemble::{ensemble, CountingMode, Error, VolumeCoupling};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    fn numerical(e: &Error) -> bool {
        match e {
            Error::Divergent(_)
            | Error::Overflow { .. }
            | Error::Quadrature { .. }
            | Error::DegenerateDifference(_)
            | Error::Truncation { .. } => true,
            Error::AtTemperature { source, .. } | Error::AtIndex { source, .. } => numerical(source),
            _ => false,
        }
    }
    if numerical(&e) {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn coupling(name: &str) -> PyResult<VolumeCoupling> {
    match name {
        "proportional" => Ok(VolumeCoupling::Proportional),
        "fixed" => Ok(VolumeCoupling::Fixed),
        other => Err(PyValueError::new_err(format!("coupling must be 'proportional' or 'fixed', got {other:?}"))),
    }
}

fn mode(name: &str) -> PyResult<CountingMode> {
    match name {
        "corrected_boltzmann" => Ok(CountingMode::CorrectedBoltzmann),
        "distinguishable" => Ok(CountingMode::Distinguishable),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'corrected_boltzmann' or 'distinguishable', got {other:?}"
        ))),
    }
}

#[pyclass(frozen, name = "EnsembleParams", module = "econ_ensemble_py")]
struct PyEnsembleParams(econ_ensemble::EnsembleParams);

#[pymethods]
impl PyEnsembleParams {
    #[new]
    #[pyo3(signature = (alpha, beta, volume = 1.0))]
    fn new(alpha: f64, beta: f64, volume: f64) -> PyResult<Self> {
        econ_ensemble::EnsembleParams::new(alpha, beta, volume).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (alpha, temperature, volume = 1.0))]
    fn from_temperature(alpha: f64, temperature: f64, volume: f64) -> PyResult<Self> {
        econ_ensemble::EnsembleParams::from_temperature(alpha, temperature, volume)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.0.volume()
    }

    #[getter]
    fn temperature(&self) -> f64 {
        self.0.temperature()
    }

    #[getter]
    fn potential(&self) -> f64 {
        self.0.potential()
    }

    fn __repr__(&self) -> String {
        format!(
            "EnsembleParams(alpha={}, beta={}, volume={})",
            self.0.alpha(),
            self.0.beta(),
            self.0.volume()
        )
    }
}

#[pyclass(frozen, name = "DensityOfStates", module = "econ_ensemble_py")]
struct PyDensityOfStates(econ_ensemble::DensityOfStates);

#[pymethods]
impl PyDensityOfStates {
    /// `g(eps) = c V eps (eps_star - eps)` on `[0, eps_star]`.
    #[staticmethod]
    fn parabolic(c: f64, eps_star: f64) -> PyResult<Self> {
        econ_ensemble::DensityOfStates::parabolic(c, eps_star).map(Self).map_err(to_py)
    }

    /// Piecewise-linear table of `(eps, g)` pairs.
    #[staticmethod]
    #[pyo3(signature = (samples, coupling = "proportional"))]
    fn tabulated(samples: Vec<(f64, f64)>, coupling: &str) -> PyResult<Self> {
        econ_ensemble::DensityOfStates::tabulated(samples, self::coupling(coupling)?)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (c3, c4, alpha, beta, cutoff = None, coupling = "proportional"))]
    fn max_pressure(c3: f64, c4: f64, alpha: f64, beta: f64, cutoff: Option<f64>, coupling: &str) -> PyResult<Self> {
        let profile = econ_ensemble::MaxPressureDos::new(c3, c4, alpha, beta).map_err(to_py)?;
        econ_ensemble::DensityOfStates::max_pressure(profile, cutoff, self::coupling(coupling)?)
            .map(Self)
            .map_err(to_py)
    }

    #[pyo3(signature = (eps, volume = 1.0))]
    fn evaluate(&self, eps: f64, volume: f64) -> PyResult<f64> {
        self.0.evaluate(eps, volume).map_err(to_py)
    }

    /// Validation issues as strings; empty when the density is usable.
    fn validate(&self) -> Vec<String> {
        self.0.validate().issues.iter().map(|i| format!("{i:?}")).collect()
    }
}

#[pyclass(frozen, get_all, name = "Observables", module = "econ_ensemble_py")]
struct PyObservables {
    ln_z: f64,
    wealth_u: f64,
    population_n: f64,
    pressure_p: f64,
    temperature: f64,
    potential: f64,
}

#[pymethods]
impl PyObservables {
    /// `-p`, the pressure with the literal sign of `-(1/beta) ∂lnZ/∂V`.
    fn literal_signed_pressure(&self) -> f64 {
        -self.pressure_p
    }

    fn __repr__(&self) -> String {
        format!(
            "Observables(ln_z={}, U={}, N={}, p={})",
            self.ln_z, self.wealth_u, self.population_n, self.pressure_p
        )
    }
}

#[pyfunction]
fn observables(dos: &PyDensityOfStates, params: &PyEnsembleParams) -> PyResult<PyObservables> {
    let o = ensemble::observables(&dos.0, &params.0).map_err(to_py)?;
    Ok(PyObservables {
        ln_z: o.ln_z,
        wealth_u: o.wealth_u,
        population_n: o.population_n,
        pressure_p: o.pressure_p,
        temperature: params.0.temperature(),
        potential: params.0.potential(),
    })
}

#[pyfunction]
fn ln_grand_partition(dos: &PyDensityOfStates, params: &PyEnsembleParams) -> PyResult<f64> {
    ensemble::ln_grand_partition(&dos.0, &params.0).map_err(to_py)
}

/// Rows of `(T, ln_z, U, N, p)`.
#[pyfunction]
#[pyo3(signature = (dos, alpha, t_min, t_max, steps, volume = 1.0))]
fn sweep_temperature(
    py: Python<'_>,
    dos: &PyDensityOfStates,
    alpha: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
    volume: f64,
) -> PyResult<Vec<(f64, f64, f64, f64, f64)>> {
    let table = py
        .detach(|| ensemble::sweep_temperature(&dos.0, alpha, volume, t_min, t_max, steps))
        .map_err(to_py)?;
    Ok(table
        .rows
        .iter()
        .map(|r| (r.temperature, r.ln_z, r.wealth_u, r.population_n, r.pressure_p))
        .collect())
}

#[pyclass(frozen, name = "LevelSystem", module = "econ_ensemble_py")]
struct PyLevelSystem(econ_ensemble::LevelSystem);

#[pymethods]
impl PyLevelSystem {
    #[new]
    fn new(eps: Vec<f64>, weights: Vec<u32>) -> PyResult<Self> {
        econ_ensemble::LevelSystem::from_pairs(&eps, &weights).map(Self).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Occupation vectors with `N` individuals and total wealth `E`, in descending lexicographic order.
#[pyfunction]
#[pyo3(signature = (system, n, e, e_tol = DEFAULT_E_TOL))]
fn enumerate_distributions(system: &PyLevelSystem, n: u32, e: f64, e_tol: f64) -> PyResult<Vec<Vec<u32>>> {
    let list = microstate::enumerate_distributions(&system.0, n, e, e_tol).map_err(to_py)?;
    Ok(list.into_iter().map(|o| o.a).collect())
}

#[pyfunction]
#[pyo3(signature = (system, n, e, mode = "corrected_boltzmann", e_tol = DEFAULT_E_TOL))]
fn total_microstates(system: &PyLevelSystem, n: u32, e: f64, mode: &str, e_tol: f64) -> PyResult<f64> {
    microstate::total_microstates(&system.0, n, e, e_tol, self::mode(mode)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (system, n, e, e_tol = DEFAULT_E_TOL))]
fn most_probable_distribution(system: &PyLevelSystem, n: u32, e: f64, e_tol: f64) -> PyResult<Vec<u32>> {
    microstate::most_probable_distribution(&system.0, n, e, e_tol)
        .map(|o| o.a)
        .map_err(to_py)
}

/// `(direct, factorized, tail_bound)`.
#[pyfunction]
#[pyo3(signature = (system, params, n_cap, e_cap = None, tolerance = 1e-9))]
fn grand_sum_check(
    system: &PyLevelSystem,
    params: &PyEnsembleParams,
    n_cap: u32,
    e_cap: Option<f64>,
    tolerance: f64,
) -> PyResult<(f64, f64, f64)> {
    let c = microstate::grand_sum_check(&system.0, &params.0, n_cap, e_cap, tolerance).map_err(to_py)?;
    Ok((c.direct, c.factorized, c.tail_bound))
}

/// `(e1, n1, ln_omega_total, t_common, mu_common)` of the most probable split.
#[pyfunction]
#[pyo3(signature = (first, second, e_total, n_total, mode = "corrected_boltzmann"))]
fn joint_equilibrium(
    py: Python<'_>,
    first: &PyLevelSystem,
    second: &PyLevelSystem,
    e_total: u32,
    n_total: u32,
    mode: &str,
) -> PyResult<(u32, u32, f64, Option<f64>, Option<f64>)> {
    let m = self::mode(mode)?;
    let eq = py
        .detach(|| equilibria::joint_equilibrium(&first.0, &second.0, e_total, n_total, m))
        .map_err(to_py)?;
    Ok((eq.e1, eq.n1, eq.omega_log_total, eq.t_common, eq.mu_common))
}

fn flow_name(f: Flow) -> &'static str {
    match f {
        Flow::OneToTwo => "one_to_two",
        Flow::TwoToOne => "two_to_one",
        Flow::None => "none",
    }
}

/// `(wealth_flow, individual_flow)` as `"one_to_two" | "two_to_one" | "none"`.
#[pyfunction]
#[pyo3(signature = (t1, mu1, t2, mu2, tol = equilibria::DEFAULT_TOLERANCE))]
fn flow_direction(t1: f64, mu1: f64, t2: f64, mu2: f64, tol: f64) -> PyResult<(&'static str, &'static str)> {
    let f = equilibria::flow_direction(t1, mu1, t2, mu2, tol).map_err(to_py)?;
    Ok((flow_name(f.wealth_flow), flow_name(f.individual_flow)))
}

#[pyfunction]
#[pyo3(signature = (p1, p2, tol = equilibria::DEFAULT_TOLERANCE))]
fn invasion_outcome(p1: f64, p2: f64, tol: f64) -> &'static str {
    match equilibria::invasion_outcome(p1, p2, tol) {
        InvasionVerdict::FirstInvadesSecond => "first_invades_second",
        InvasionVerdict::SecondInvadesFirst => "second_invades_first",
        InvasionVerdict::DynamicEquilibrium => "dynamic_equilibrium",
    }
}

/// `(max_rel_residual_v, max_rel_residual_g)` of the closed-form profiles on `grid`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, grid, c1 = 1.0, c2 = 0.0, c3 = 1.0, c4 = 0.0))]
fn euler_lagrange_residual(
    alpha: f64,
    beta: f64,
    grid: Vec<f64>,
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
) -> PyResult<(f64, f64)> {
    let vp = variational::optimal_volume_profile(c1, c2, alpha, beta).map_err(to_py)?;
    let gp = variational::optimal_dos_profile(c3, c4, alpha, beta).map_err(to_py)?;
    let r = variational::euler_lagrange_residual(&vp, &gp, &grid).map_err(to_py)?;
    Ok((r.max_rel_residual_v, r.max_rel_residual_g))
}

/// `(eps0, level_mass)` where the volume profile reaches `b`.
#[pyfunction]
#[pyo3(signature = (b, alpha = 1.0, beta = 1.0, c1 = 1.0, c2 = 0.0, c3 = 1.0, c4 = 0.0))]
fn cutoff(b: f64, alpha: f64, beta: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> PyResult<(f64, f64)> {
    let vp = variational::optimal_volume_profile(c1, c2, alpha, beta).map_err(to_py)?;
    let gp = variational::optimal_dos_profile(c3, c4, alpha, beta).map_err(to_py)?;
    let r = variational::cutoff(&vp, &gp, b).map_err(to_py)?;
    Ok((r.eps0, r.level_mass))
}

/// Shrink ratio of the pressure change under halved perturbations of the
/// sampled closed-form `g` (or of `g` when given); `None` if nothing changed.
#[pyfunction]
#[pyo3(signature = (grid, g = None, alpha = 1.0, beta = 1.0, c1 = 1.0, c2 = 0.0, seed = 0x5eed))]
fn stationarity_shrink_ratio(
    grid: Vec<f64>,
    g: Option<Vec<f64>>,
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
    seed: u64,
) -> PyResult<Option<f64>> {
    let vp = variational::optimal_volume_profile(c1, c2, alpha, beta).map_err(to_py)?;
    let g = match g {
        Some(g) => g,
        None => {
            let gp = variational::optimal_dos_profile(1.0, 0.0, alpha, beta).map_err(to_py)?;
            grid.iter().map(|&x| gp.evaluate(x)).collect::<Result<_, _>>().map_err(to_py)?
        }
    };
    let opts = StationarityOptions {
        seed,
        ..StationarityOptions::default()
    };
    let r = variational::stationarity_check(&grid, &g, &vp, alpha, beta, &opts).map_err(to_py)?;
    Ok(r.shrink_ratio)
}

#[pymodule]
fn econ_ensemble_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnsembleParams>()?;
    m.add_class::<PyDensityOfStates>()?;
    m.add_class::<PyObservables>()?;
    m.add_class::<PyLevelSystem>()?;
    m.add_function(wrap_pyfunction!(observables, m)?)?;
    m.add_function(wrap_pyfunction!(ln_grand_partition, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_distributions, m)?)?;
    m.add_function(wrap_pyfunction!(total_microstates, m)?)?;
    m.add_function(wrap_pyfunction!(most_probable_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(grand_sum_check, m)?)?;
    m.add_function(wrap_pyfunction!(joint_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(flow_direction, m)?)?;
    m.add_function(wrap_pyfunction!(invasion_outcome, m)?)?;
    m.add_function(wrap_pyfunction!(euler_lagrange_residual, m)?)?;
    m.add_function(wrap_pyfunction!(cutoff, m)?)?;
    m.add_function(wrap_pyfunction!(stationarity_shrink_ratio, m)?)?;
    Ok(())
}
