//! Exact microstate counting for small systems of discrete wealth levels.
//!
//! A [`LevelSystem`] holds wealth levels `eps_l` with integer degeneracies
//! `w_l`. A distribution `{a_l}` places `a_l` individuals on level `l`, with
//! `N = sum a_l` and `E = sum a_l eps_l`. Its microstate count is
//! `prod w_l^a_l / a_l!` (corrected Boltzmann) or `N!` times that when
//! individuals are distinguishable.
//!
//! Counts are exact integers internally whenever they fit in `u128`; larger
//! instances fall back to log-domain accumulation.

use serde::Serialize;

use crate::dos::EnsembleParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub eps: f64,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSystem {
    levels: Vec<Level>,
}

impl LevelSystem {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("level system needs at least one level"));
        }
        for (i, level) in levels.iter().enumerate() {
            if !(level.eps >= 0.0 && level.eps.is_finite()) {
                return Err(Error::domain(format!("level {i}: eps must be finite and >= 0")));
            }
            if level.weight == 0 {
                return Err(Error::domain(format!("level {i}: weight must be >= 1")));
            }
        }
        if levels.windows(2).any(|w| w[1].eps <= w[0].eps) {
            return Err(Error::domain("level energies must be strictly increasing"));
        }
        Ok(Self { levels })
    }

    /// Convenience constructor from parallel energy and weight slices.
    pub fn from_pairs(eps: &[f64], weights: &[u32]) -> Result<Self> {
        if eps.len() != weights.len() {
            return Err(Error::domain("eps and weights must have the same length"));
        }
        Self::new(
            eps.iter()
                .zip(weights)
                .map(|(&eps, &weight)| Level { eps, weight })
                .collect(),
        )
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Same energies with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: u32) -> Result<Self> {
        Self::new(
            self.levels
                .iter()
                .map(|l| Level {
                    eps: l.eps,
                    weight: l.weight * factor,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupationVector {
    pub a: Vec<u32>,
    pub n_total: u32,
    pub e_total: f64,
}

impl OccupationVector {
    pub fn new(a: Vec<u32>, sys: &LevelSystem) -> Result<Self> {
        if a.len() != sys.len() {
            return Err(Error::domain(format!(
                "occupation has {} entries, system has {} levels",
                a.len(),
                sys.len()
            )));
        }
        let n_total = a.iter().sum();
        let e_total = energy_of(&a, sys);
        Ok(Self { a, n_total, e_total })
    }
}

fn energy_of(a: &[u32], sys: &LevelSystem) -> f64 {
    a.iter()
        .zip(sys.levels())
        .map(|(&n, l)| n as f64 * l.eps)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingMode {
    /// `prod w^a / a!`; the counting behind `Z_l = exp(w_l e^(-alpha - beta eps_l))`.
    #[default]
    CorrectedBoltzmann,
    /// `N! prod w^a / a!`; labelled individuals.
    Distinguishable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_individuals: u32,
    pub max_levels: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_individuals: 20,
            max_levels: 12,
        }
    }
}

/// Default energy-matching tolerance for real-valued levels.
pub const DEFAULT_E_TOL: f64 = 1e-9;

fn check_limits(sys: &LevelSystem, n: u32, limits: EnumerationLimits) -> Result<()> {
    if n > limits.max_individuals {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds the enumeration cap {}",
            limits.max_individuals
        )));
    }
    if sys.len() > limits.max_levels {
        return Err(Error::ResourceLimit(format!(
            "{} levels exceed the enumeration cap {}",
            sys.len(),
            limits.max_levels
        )));
    }
    Ok(())
}

/// Visits every `a` with `sum a = n` and `|E(a) - e| <= e_tol` in descending
/// lexicographic order (`a_0` largest first). `e = None` disables the energy filter.
fn for_each_distribution<F>(sys: &LevelSystem, n: u32, e: Option<(f64, f64)>, mut visit: F)
where
    F: FnMut(&[u32], f64),
{
    fn recurse<F: FnMut(&[u32], f64)>(
        eps: &[f64],
        level: usize,
        remaining: u32,
        energy: f64,
        target: Option<(f64, f64)>,
        a: &mut Vec<u32>,
        visit: &mut F,
    ) {
        let last = eps.len() - 1;
        if let Some((e, tol)) = target {
            // levels are sorted, so the remaining individuals can add between
            // remaining * eps[level] and remaining * eps[last]
            let lo = energy + remaining as f64 * eps[level];
            let hi = energy + remaining as f64 * eps[last];
            if lo > e + tol || hi < e - tol {
                return;
            }
        }
        if level == last {
            let total = energy + remaining as f64 * eps[last];
            if target.is_none_or(|(e, tol)| (total - e).abs() <= tol) {
                a.push(remaining);
                visit(a, total);
                a.pop();
            }
            return;
        }
        for k in (0..=remaining).rev() {
            a.push(k);
            recurse(
                eps,
                level + 1,
                remaining - k,
                energy + k as f64 * eps[level],
                target,
                a,
                visit,
            );
            a.pop();
        }
    }
    let eps: Vec<f64> = sys.levels().iter().map(|l| l.eps).collect();
    let mut a = Vec::with_capacity(eps.len());
    recurse(&eps, 0, n, 0.0, e, &mut a, &mut visit);
}

pub fn enumerate_distributions(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
) -> Result<Vec<OccupationVector>> {
    enumerate_distributions_with(sys, n, e, e_tol, EnumerationLimits::default())
}

pub fn enumerate_distributions_with(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
    limits: EnumerationLimits,
) -> Result<Vec<OccupationVector>> {
    check_limits(sys, n, limits)?;
    check_energy(e, e_tol)?;
    let mut out = Vec::new();
    for_each_distribution(sys, n, Some((e, e_tol)), |a, e_total| {
        out.push(OccupationVector {
            a: a.to_vec(),
            n_total: n,
            e_total,
        })
    });
    Ok(out)
}

fn check_energy(e: f64, e_tol: f64) -> Result<()> {
    if !(e.is_finite() && e_tol >= 0.0 && e_tol.is_finite()) {
        return Err(Error::domain(format!("invalid energy target {e} with tolerance {e_tol}")));
    }
    Ok(())
}

/// `N! / prod a! * prod w^a`, or `None` on `u128` overflow.
fn exact_labelled_count(a: &[u32], sys: &LevelSystem) -> Option<u128> {
    let mut count: u128 = 1;
    let mut placed: u128 = 0;
    for (&k, level) in a.iter().zip(sys.levels()) {
        // multiply by C(placed + k, k), one factor at a time so every step is integral
        for j in 1..=k as u128 {
            placed += 1;
            count = count.checked_mul(placed)? / j;
        }
        count = count.checked_mul((level.weight as u128).checked_pow(k)?)?;
    }
    Some(count)
}

fn factorial(n: u32) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln prod w^a / a!`.
fn ln_corrected(a: &[u32], sys: &LevelSystem) -> f64 {
    a.iter()
        .zip(sys.levels())
        .map(|(&k, l)| k as f64 * (l.weight as f64).ln() - ln_factorial(k))
        .sum()
}

const EXACT_UP_TO: u32 = 20;

fn exact_count_in_mode(labelled: u128, n: u32, mode: CountingMode) -> f64 {
    match mode {
        CountingMode::Distinguishable => labelled as f64,
        CountingMode::CorrectedBoltzmann => {
            let denom = factorial(n).expect("n <= 20 fits in u128");
            let g = gcd(labelled, denom);
            (labelled / g) as f64 / (denom / g) as f64
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Microstate count `Omega{a}` of one distribution.
pub fn microstate_count(occ: &OccupationVector, sys: &LevelSystem, mode: CountingMode) -> f64 {
    if occ.n_total <= EXACT_UP_TO {
        if let Some(labelled) = exact_labelled_count(&occ.a, sys) {
            return exact_count_in_mode(labelled, occ.n_total, mode);
        }
    }
    ln_microstate_count(occ, sys, mode).exp()
}

pub fn ln_microstate_count(occ: &OccupationVector, sys: &LevelSystem, mode: CountingMode) -> f64 {
    let base = ln_corrected(&occ.a, sys);
    match mode {
        CountingMode::CorrectedBoltzmann => base,
        CountingMode::Distinguishable => base + ln_factorial(occ.n_total),
    }
}

/// Accumulates `Omega(N, E)` exactly while possible, in the log domain after.
struct CountAccumulator {
    n: u32,
    exact: Option<u128>,
    ln_terms: Vec<f64>,
    any: bool,
}

impl CountAccumulator {
    fn new(n: u32) -> Self {
        Self {
            n,
            exact: (n <= EXACT_UP_TO).then_some(0),
            ln_terms: Vec::new(),
            any: false,
        }
    }

    fn add(&mut self, a: &[u32], sys: &LevelSystem) {
        self.any = true;
        self.ln_terms.push(ln_corrected(a, sys));
        if let Some(total) = self.exact {
            self.exact = exact_labelled_count(a, sys).and_then(|c| total.checked_add(c));
        }
    }

    fn ln_total(&self, mode: CountingMode) -> f64 {
        if !self.any {
            return f64::NEG_INFINITY;
        }
        if let Some(total) = self.exact {
            return exact_count_in_mode(total, self.n, mode).ln();
        }
        let max = self.ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self.ln_terms.iter().map(|t| (t - max).exp()).sum();
        let base = max + sum.ln();
        match mode {
            CountingMode::CorrectedBoltzmann => base,
            CountingMode::Distinguishable => base + ln_factorial(self.n),
        }
    }

    fn total(&self, mode: CountingMode) -> f64 {
        if !self.any {
            return 0.0;
        }
        match self.exact {
            Some(total) => exact_count_in_mode(total, self.n, mode),
            None => self.ln_total(mode).exp(),
        }
    }
}

fn accumulate(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
    limits: EnumerationLimits,
) -> Result<CountAccumulator> {
    check_limits(sys, n, limits)?;
    check_energy(e, e_tol)?;
    let mut acc = CountAccumulator::new(n);
    for_each_distribution(sys, n, Some((e, e_tol)), |a, _| acc.add(a, sys));
    Ok(acc)
}

/// `Omega(N, E)`: the summed microstate count of every matching distribution (0 if infeasible).
pub fn total_microstates(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
    mode: CountingMode,
) -> Result<f64> {
    Ok(accumulate(sys, n, e, e_tol, EnumerationLimits::default())?.total(mode))
}

/// `ln Omega(N, E)`; `-inf` when `(N, E)` is infeasible.
pub fn ln_total_microstates(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
    mode: CountingMode,
) -> Result<f64> {
    ln_total_microstates_with(sys, n, e, e_tol, mode, EnumerationLimits::default())
}

pub fn ln_total_microstates_with(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
    mode: CountingMode,
    limits: EnumerationLimits,
) -> Result<f64> {
    Ok(accumulate(sys, n, e, e_tol, limits)?.ln_total(mode))
}

/// The distribution with the largest `Omega{a}`.
///
/// Both counting modes rank distributions identically (they differ by the
/// constant `N!`), so the ranking uses the corrected count. Ties keep the
/// first distribution in enumeration order, i.e. the lexicographically
/// largest occupation vector.
pub fn most_probable_distribution(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    e_tol: f64,
) -> Result<OccupationVector> {
    check_limits(sys, n, EnumerationLimits::default())?;
    check_energy(e, e_tol)?;
    let mut best: Option<(Vec<u32>, f64, Option<u128>, f64)> = None;
    for_each_distribution(sys, n, Some((e, e_tol)), |a, e_total| {
        let exact = exact_labelled_count(a, sys);
        let ln = ln_corrected(a, sys);
        let better = match &best {
            None => true,
            Some((_, _, Some(best_exact), _)) if exact.is_some() => exact.unwrap() > *best_exact,
            Some((_, _, _, best_ln)) => ln > *best_ln,
        };
        if better {
            best = Some((a.to_vec(), e_total, exact, ln));
        }
    });
    best.map(|(a, e_total, _, _)| OccupationVector {
        a,
        n_total: n,
        e_total,
    })
    .ok_or_else(|| Error::NotFound(format!("no distribution with N = {n}, E = {e}")))
}

/// `delta / (ln_hi - ln_lo)`, the lattice version of `1/x = ∂ ln Omega / ∂x`.
pub fn difference_quotient(delta: f64, ln_lo: f64, ln_hi: f64) -> Result<f64> {
    if !ln_lo.is_finite() || !ln_hi.is_finite() {
        return Err(Error::DegenerateDifference(
            "a neighbouring macrostate is infeasible (Omega = 0)".into(),
        ));
    }
    let diff = ln_hi - ln_lo;
    if diff == 0.0 {
        return Err(Error::DegenerateDifference(
            "ln Omega is flat across the step; the quotient is infinite".into(),
        ));
    }
    Ok(delta / diff)
}

/// `T = delta_e / (ln Omega(n, e + delta_e) - ln Omega(n, e))`.
pub fn temperature_from_entropy(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    delta_e: f64,
    e_tol: f64,
    mode: CountingMode,
) -> Result<f64> {
    if !(delta_e > 0.0) {
        return Err(Error::domain(format!("delta_e must be positive, got {delta_e}")));
    }
    let lo = ln_total_microstates(sys, n, e, e_tol, mode)?;
    let hi = ln_total_microstates(sys, n, e + delta_e, e_tol, mode)?;
    difference_quotient(delta_e, lo, hi)
}

/// `mu = delta_n / (ln Omega(n + delta_n, e) - ln Omega(n, e))`.
pub fn potential_from_entropy(
    sys: &LevelSystem,
    n: u32,
    e: f64,
    delta_n: u32,
    e_tol: f64,
    mode: CountingMode,
) -> Result<f64> {
    if delta_n == 0 {
        return Err(Error::domain("delta_n must be positive"));
    }
    let lo = ln_total_microstates(sys, n, e, e_tol, mode)?;
    let hi = ln_total_microstates(sys, n + delta_n, e, e_tol, mode)?;
    difference_quotient(delta_n as f64, lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrandSumCheck {
    /// Truncated `sum_{N_s, E_s} Omega(N_s, E_s) exp(-alpha N_s - beta E_s)`.
    pub direct: f64,
    /// `exp(sum_l w_l exp(-alpha - beta eps_l))`.
    pub factorized: f64,
    /// Rigorous upper bound on `factorized - direct`.
    pub tail_bound: f64,
}

impl GrandSumCheck {
    pub fn agrees(&self) -> bool {
        (self.direct - self.factorized).abs() <= self.tail_bound + 1e-12 * self.factorized
    }
}

const GRAND_SUM_MAX_TERMS: f64 = 5e6;

/// Compares the truncated direct grand sum (corrected Boltzmann counting) with
/// the level-factorized closed form.
///
/// The direct sum keeps `N_s <= n_cap` and, when given, `E_s <= e_cap`.
/// Fails with [`Error::Truncation`] when the tail bound exceeds
/// `tolerance * factorized`.
pub fn grand_sum_check(
    sys: &LevelSystem,
    params: &EnsembleParams,
    n_cap: u32,
    e_cap: Option<f64>,
    tolerance: f64,
) -> Result<GrandSumCheck> {
    let (alpha, beta) = (params.alpha(), params.beta());
    let levels = sys.len() as f64;
    // number of compositions of all N <= n_cap over the levels: C(n_cap + L, L)
    let terms: f64 = (1..=sys.len())
        .map(|k| (n_cap as f64 + k as f64) / k as f64)
        .product();
    if terms > GRAND_SUM_MAX_TERMS {
        return Err(Error::ResourceLimit(format!(
            "grand sum over {levels} levels up to N = {n_cap} needs {terms:.3e} terms"
        )));
    }

    // Omega{a} e^(-alpha N - beta E) summed per distribution; equal to the
    // (N_s, E_s) double sum since Omega(N, E) is the sum over its distributions.
    let mut direct = 0.0;
    for n in 0..=n_cap {
        for_each_distribution(sys, n, None, |a, e_total| {
            if e_cap.is_none_or(|cap| e_total <= cap) {
                direct += (ln_corrected(a, sys) - alpha * n as f64 - beta * e_total).exp();
            }
        });
    }

    let level_sum = |shift: f64| -> f64 {
        sys.levels()
            .iter()
            .map(|l| l.weight as f64 * (-alpha - (beta - shift) * l.eps).exp())
            .sum()
    };
    let s = level_sum(0.0);
    let factorized = s.exp();

    // N tail: sum_{N > K} s^N / N!, bounded by a geometric series.
    let k = n_cap as f64;
    let n_tail = if s < k + 2.0 {
        let ln_first = (k + 1.0) * s.ln() - ln_factorial(n_cap + 1);
        ln_first.exp() / (1.0 - s / (k + 2.0))
    } else {
        f64::INFINITY
    };
    // E tail: Chernoff, sum_{E > cap} <= e^(-t cap) (exp(sum_l w e^(-alpha - (beta - t) eps_l)) - 1) for any t >= 0.
    let e_tail = match e_cap {
        None => 0.0,
        // the empty state has E = 0 <= cap, hence expm1
        Some(cap) => (-40..=40)
            .map(|k| {
                let t = beta * 2f64.powf(k as f64 / 4.0);
                (-t * cap).exp() * level_sum(t).exp_m1()
            })
            .fold(f64::INFINITY, f64::min),
    };
    let tail_bound = n_tail + e_tail;
    if tail_bound > tolerance * factorized {
        return Err(Error::Truncation {
            tail_bound,
            tolerance: tolerance * factorized,
        });
    }
    Ok(GrandSumCheck {
        direct,
        factorized,
        tail_bound,
    })
}
