//! Independent oracles: analytic per-segment integrals, composite Simpson,
//! brute-force labelled assignment, fine trapezoid sums.

use econ_ensemble::ensemble;
use econ_ensemble::microstate::{self, DEFAULT_E_TOL};
use econ_ensemble::variational::{self, MaxPressureDos, VolumeProfile};
use econ_ensemble::{CountingMode, DensityOfStates, EnsembleParams, LevelSystem, VolumeCoupling};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `∫_{e0}^{e1} (g0 + s (x - e0)) x^k e^(-beta x) dx` for k = 0, 1, in closed form.
fn linear_segment_moments(e0: f64, g0: f64, e1: f64, g1: f64, beta: f64) -> (f64, f64) {
    let s = (g1 - g0) / (e1 - e0);
    let c = g0 - s * e0;
    // antiderivatives of x^j e^(-beta x)
    let i0 = |x: f64| -(-beta * x).exp() / beta;
    let i1 = |x: f64| -(-beta * x).exp() * (x / beta + 1.0 / (beta * beta));
    let i2 = |x: f64| -(-beta * x).exp() * (x * x / beta + 2.0 * x / (beta * beta) + 2.0 / beta.powi(3));
    let m0 = c * (i0(e1) - i0(e0)) + s * (i1(e1) - i1(e0));
    let m1 = c * (i1(e1) - i1(e0)) + s * (i2(e1) - i2(e0));
    (m0, m1)
}

#[test]
fn tabulated_matches_piecewise_analytic_integral() {
    let samples = vec![(0.0, 0.0), (0.4, 1.3), (1.0, 0.7), (2.5, 2.0), (3.0, 0.0)];
    let dos = DensityOfStates::tabulated(samples.clone(), VolumeCoupling::Proportional).unwrap();
    for &(alpha, beta, volume) in &[(0.0, 0.3, 1.0), (1.0, 1.0, 2.0), (-1.0, 4.0, 0.5)] {
        let params = EnsembleParams::new(alpha, beta, volume).unwrap();
        let (mut m0, mut m1) = (0.0, 0.0);
        for w in samples.windows(2) {
            let (a, b) = linear_segment_moments(w[0].0, w[0].1, w[1].0, w[1].1, beta);
            m0 += a;
            m1 += b;
        }
        let scale = volume * (-alpha).exp();
        let ln_z = ensemble::ln_grand_partition(&dos, &params).unwrap();
        let u = ensemble::wealth(&dos, &params).unwrap();
        assert!(rel(ln_z, scale * m0) < 1e-10, "lnZ {ln_z} vs {}", scale * m0);
        assert!(rel(u, scale * m1) < 1e-10, "U {u} vs {}", scale * m1);
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn max_pressure_with_cutoff_matches_simpson() {
    let profile = MaxPressureDos::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let dos = DensityOfStates::max_pressure(profile, Some(1.2), VolumeCoupling::Fixed).unwrap();
    let params = EnsembleParams::new(0.5, 2.0, 3.0).unwrap();
    let g = |x: f64| (1.0f64 + x).exp().exp() * (-1.0f64).exp() + 0.5;
    let w = |x: f64| (-0.5 - 2.0 * x).exp();
    let ln_z = simpson(|x| g(x) * w(x), 0.0, 1.2, 20_000);
    let u = simpson(|x| x * g(x) * w(x), 0.0, 1.2, 20_000);
    assert!(rel(ensemble::ln_grand_partition(&dos, &params).unwrap(), ln_z) < 1e-10);
    assert!(rel(ensemble::wealth(&dos, &params).unwrap(), u) < 1e-10);
    // fixed coupling: no volume dependence, no pressure
    assert_eq!(ensemble::pressure(&dos, &params).unwrap(), 0.0);
}

#[test]
fn parabolic_closed_form_matches_simpson() {
    for &(alpha, beta, eps_star) in &[(0.0, 0.1, 0.5), (1.0, 1.0, 1.0), (2.0, 10.0, 5.0), (-1.0, 1e-4, 1.0)] {
        let g = |x: f64| 2.0 * x * (eps_star - x);
        let w = |x: f64| (-alpha - beta * x).exp();
        let params = EnsembleParams::new(alpha, beta, 2.0).unwrap();
        let dos = DensityOfStates::parabolic(1.0, eps_star).unwrap();
        let ln_z = simpson(|x| g(x) * w(x), 0.0, eps_star, 20_000);
        let u = simpson(|x| x * g(x) * w(x), 0.0, eps_star, 20_000);
        assert!(rel(ensemble::ln_grand_partition(&dos, &params).unwrap(), ln_z) < 1e-11);
        assert!(rel(ensemble::wealth(&dos, &params).unwrap(), u) < 1e-11);
    }
}

/// Counts maps from N labelled individuals to the sum over levels of weight
/// slots whose total energy is e: `sum over assignments prod w`.
fn labelled_count(eps: &[f64], weights: &[u32], n: u32, e: f64) -> u128 {
    fn go(eps: &[f64], weights: &[u32], left: u32, energy: f64, target: f64) -> u128 {
        if left == 0 {
            return u128::from((energy - target).abs() < 1e-9);
        }
        (0..eps.len())
            .map(|l| weights[l] as u128 * go(eps, weights, left - 1, energy + eps[l], target))
            .sum()
    }
    go(eps, weights, n, 0.0, e)
}

#[test]
fn distinguishable_totals_match_labelled_assignment() {
    let eps = [0.0, 1.0, 2.0, 3.0];
    let weights = [2, 1, 3, 1];
    let sys = LevelSystem::from_pairs(&eps, &weights).unwrap();
    for n in 0..=5 {
        for e in 0..=15 {
            let expected = labelled_count(&eps, &weights, n, e as f64);
            let got = microstate::total_microstates(&sys, n, e as f64, DEFAULT_E_TOL, CountingMode::Distinguishable)
                .unwrap();
            assert_eq!(got, expected as f64, "n={n} e={e}");
        }
    }
}

#[test]
fn level_mass_matches_fine_trapezoid() {
    let vp = VolumeProfile::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let gp = MaxPressureDos::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let b = vp.evaluate(0.7);
    let res = variational::cutoff(&vp, &gp, b).unwrap();
    assert!((res.eps0 - 0.7).abs() < 1e-10);
    let n = 1_000_000;
    let h = res.eps0 / n as f64;
    let g = |x: f64| ((1.0f64 + x).exp() - 1.0).exp();
    let mut trap = 0.5 * (g(0.0) + g(res.eps0));
    for i in 1..n {
        trap += g(h * i as f64);
    }
    trap *= h;
    // trapezoid error ~ h^2 (b - a) max|g''| / 12 ~ 1e-12 relative here
    assert!(rel(res.level_mass, trap) < 1e-9, "{} vs {trap}", res.level_mass);
}

#[test]
fn volume_profile_value_at_origin() {
    let vp = VolumeProfile::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let expected = (-1.0 - 1f64.exp()).exp();
    assert!((vp.evaluate(0.0) - expected).abs() < 1e-16);
    assert!((vp.evaluate(0.0) - 0.0242756).abs() < 1e-7);
}
