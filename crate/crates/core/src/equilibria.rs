//! Two-system analysis: joint equilibrium from microstate counts, flow and
//! invasion predicates, quasi-static parameter schedules.

use rayon::prelude::*;
use serde::Serialize;

use crate::dos::{DensityOfStates, EnsembleParams};
use crate::ensemble::{self, Observables};
use crate::error::{Error, Result};
use crate::microstate::{self, CountingMode, LevelSystem, DEFAULT_E_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flow {
    OneToTwo,
    TwoToOne,
    None,
}

impl Flow {
    pub fn reversed(self) -> Flow {
        match self {
            Flow::OneToTwo => Flow::TwoToOne,
            Flow::TwoToOne => Flow::OneToTwo,
            Flow::None => Flow::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlowPrediction {
    pub wealth_flow: Flow,
    pub individual_flow: Flow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InvasionVerdict {
    FirstInvadesSecond,
    SecondInvadesFirst,
    DynamicEquilibrium,
}

/// Default relative tolerance for "equal" temperatures, potentials and pressures.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn nearly_equal(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// From-higher-to-lower direction of `x1` vs `x2`.
fn downhill(x1: f64, x2: f64, tol: f64) -> Flow {
    if nearly_equal(x1, x2, tol) {
        Flow::None
    } else if x1 > x2 {
        Flow::OneToTwo
    } else {
        Flow::TwoToOne
    }
}

/// Wealth flows from the hotter system to the colder one, individuals from
/// higher economic potential to lower.
pub fn flow_direction(t1: f64, mu1: f64, t2: f64, mu2: f64, tol: f64) -> Result<FlowPrediction> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::domain(format!("temperatures must be positive, got {t1} and {t2}")));
    }
    if mu1.is_nan() || mu2.is_nan() {
        return Err(Error::domain("economic potentials must not be NaN"));
    }
    Ok(FlowPrediction {
        wealth_flow: downhill(t1, t2, tol),
        individual_flow: downhill(mu1, mu2, tol),
    })
}

/// The system with the larger economic pressure invades the other.
pub fn invasion_outcome(p1: f64, p2: f64, tol: f64) -> InvasionVerdict {
    match downhill(p1, p2, tol) {
        Flow::None => InvasionVerdict::DynamicEquilibrium,
        Flow::OneToTwo => InvasionVerdict::FirstInvadesSecond,
        Flow::TwoToOne => InvasionVerdict::SecondInvadesFirst,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitEntry {
    pub e1: u32,
    pub n1: u32,
    /// `-inf` when either side is infeasible.
    pub omega_log_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsystemState {
    pub e: u32,
    pub n: u32,
    pub temperature: Option<f64>,
    pub potential: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointEquilibrium {
    pub e1: u32,
    pub n1: u32,
    pub first: SubsystemState,
    pub second: SubsystemState,
    /// Mean of the two subsystem temperatures when both are defined.
    pub t_common: Option<f64>,
    pub mu_common: Option<f64>,
    pub omega_log_total: f64,
}

/// `ln Omega(n, e)` on the integer lattice `0..=e_max`, `0..=n_max`, corrected counting.
struct LatticeEntropy {
    e_max: u32,
    n_max: u32,
    table: Vec<f64>,
}

impl LatticeEntropy {
    fn build(sys: &LevelSystem, e_max: u32, n_max: u32) -> Result<Self> {
        let cells: Vec<(u32, u32)> = (0..=e_max)
            .flat_map(|e| (0..=n_max).map(move |n| (e, n)))
            .collect();
        let table = cells
            .par_iter()
            .map(|&(e, n)| {
                microstate::ln_total_microstates(
                    sys,
                    n,
                    e as f64,
                    DEFAULT_E_TOL,
                    CountingMode::CorrectedBoltzmann,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { e_max, n_max, table })
    }

    fn get(&self, e: i64, n: i64) -> f64 {
        if e < 0 || n < 0 || e > self.e_max as i64 || n > self.n_max as i64 {
            return f64::NEG_INFINITY;
        }
        self.table[e as usize * (self.n_max as usize + 1) + n as usize]
    }

    /// Central quotient where both neighbours are feasible, one-sided otherwise.
    fn quotient(&self, at: (i64, i64), step: (i64, i64)) -> Option<f64> {
        let here = self.get(at.0, at.1);
        let up = self.get(at.0 + step.0, at.1 + step.1);
        let down = self.get(at.0 - step.0, at.1 - step.1);
        let candidates = [(up, down, 2.0), (up, here, 1.0), (here, down, 1.0)];
        candidates.iter().find_map(|&(hi, lo, delta)| {
            microstate::difference_quotient(delta, lo, hi).ok()
        })
    }
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let ln_fact = |m: u32| (2..=m).map(|j| (j as f64).ln()).sum::<f64>();
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

/// Every lattice split `(e1, n1)` with its combined `ln Omega`.
///
/// Energies live on the integer lattice, so levels should carry integer `eps`.
/// Under [`CountingMode::Distinguishable`] the total includes
/// `ln C(n_total, n1)`, the choice of which labelled individuals sit in the
/// first system; both modes then share the same maximizer.
pub fn split_table(
    sys1: &LevelSystem,
    sys2: &LevelSystem,
    e_total: u32,
    n_total: u32,
    mode: CountingMode,
) -> Result<Vec<SplitEntry>> {
    let first = LatticeEntropy::build(sys1, e_total, n_total)?;
    let second = LatticeEntropy::build(sys2, e_total, n_total)?;
    Ok(splits(&first, &second, e_total, n_total, mode))
}

fn splits(
    first: &LatticeEntropy,
    second: &LatticeEntropy,
    e_total: u32,
    n_total: u32,
    mode: CountingMode,
) -> Vec<SplitEntry> {
    let mut out = Vec::with_capacity((e_total as usize + 1) * (n_total as usize + 1));
    for e1 in 0..=e_total {
        for n1 in 0..=n_total {
            let mut total = first.get(e1 as i64, n1 as i64)
                + second.get((e_total - e1) as i64, (n_total - n1) as i64);
            if mode == CountingMode::Distinguishable && total.is_finite() {
                total += ln_binomial(n_total, n1);
            }
            out.push(SplitEntry {
                e1,
                n1,
                omega_log_total: total,
            });
        }
    }
    out
}

/// Maximizes `ln Omega_1 + ln Omega_2` over all splits of `(e_total, n_total)`.
///
/// Ties go to the smallest `(e1, n1)`. Subsystem temperatures and potentials
/// are lattice difference quotients of the corrected counts.
pub fn joint_equilibrium(
    sys1: &LevelSystem,
    sys2: &LevelSystem,
    e_total: u32,
    n_total: u32,
    mode: CountingMode,
) -> Result<JointEquilibrium> {
    // one extra lattice row/column so quotients at the boundary can look outward
    let first = LatticeEntropy::build(sys1, e_total + 1, n_total + 1)?;
    let second = LatticeEntropy::build(sys2, e_total + 1, n_total + 1)?;
    let table = splits(&first, &second, e_total, n_total, mode);

    let mut best: Option<SplitEntry> = None;
    for entry in table.iter().filter(|s| s.omega_log_total.is_finite()) {
        let better = match best {
            None => true,
            Some(b) => {
                entry.omega_log_total
                    > b.omega_log_total + 1e-12 * b.omega_log_total.abs().max(1.0)
            }
        };
        if better {
            best = Some(*entry);
        }
    }
    let best = best.ok_or_else(|| {
        Error::NotFound(format!("no feasible split of E = {e_total}, N = {n_total}"))
    })?;

    let state = |lattice: &LatticeEntropy, e: u32, n: u32| SubsystemState {
        e,
        n,
        temperature: lattice.quotient((e as i64, n as i64), (1, 0)),
        potential: lattice.quotient((e as i64, n as i64), (0, 1)),
    };
    let s1 = state(&first, best.e1, best.n1);
    let s2 = state(&second, e_total - best.e1, n_total - best.n1);
    let mean = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| 0.5 * (a + b));
    Ok(JointEquilibrium {
        e1: best.e1,
        n1: best.n1,
        t_common: mean(s1.temperature, s2.temperature),
        mu_common: mean(s1.potential, s2.potential),
        first: s1,
        second: s2,
        omega_log_total: best.omega_log_total,
    })
}

/// Observables along a slowly varying parameter schedule, one equilibrium per point.
pub fn quasi_static_trajectory(
    dos: &DensityOfStates,
    schedule: &[EnsembleParams],
) -> Result<Vec<Observables>> {
    if schedule.is_empty() {
        return Err(Error::domain("schedule must not be empty"));
    }
    schedule
        .par_iter()
        .enumerate()
        .map(|(index, params)| {
            ensemble::observables(dos, params).map_err(|source| Error::AtIndex {
                index,
                source: Box::new(source),
            })
        })
        .collect()
}
