//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::Path;
use std::time::Instant;

use econ_ensemble::ensemble::{self, closed_form};
use econ_ensemble::equilibria;
use econ_ensemble::microstate::{self, DEFAULT_E_TOL};
use econ_ensemble::variational::{
    self, LinearProfile, MaxPressureDos, StationarityOptions, VolumeProfile,
};
use econ_ensemble::{CountingMode, DensityOfStates, EnsembleParams, LevelSystem, VolumeCoupling};
use econ_ensemble_verify::{all_small_systems, labelled_histogram, ln_binomial, richardson, slopes};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn check(id: &'static str, pass: bool, detail: String) -> Check {
    Check { id, pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

const ALPHAS: [f64; 4] = [-1.0, 0.0, 1.0, 2.0];
const BETAS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
const EPS_STARS: [f64; 3] = [0.5, 1.0, 5.0];

fn parabolic_grid() -> Vec<(f64, f64, f64)> {
    let mut g = Vec::new();
    for &a in &ALPHAS {
        for &b in &BETAS {
            for &e in &EPS_STARS {
                g.push((a, b, e));
            }
        }
    }
    g
}

fn criterion_1() -> Vec<Check> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let grid = parabolic_grid();
    for &(alpha, beta, eps_star) in &grid {
        let dos = DensityOfStates::parabolic(1.0, eps_star).unwrap();
        let params = EnsembleParams::new(alpha, beta, 1.0).unwrap();
        let quad = ensemble::ln_grand_partition_quadrature(&dos, &params).unwrap();
        let closed = closed_form::ln_z(1.0, eps_star, alpha, beta, 1.0);
        worst = worst.max(rel(closed, quad));
    }
    let secs = start.elapsed().as_secs_f64();
    vec![check(
        "1",
        grid.len() == 60 && worst <= 1e-8 && secs < 1.0,
        format!("closed-form vs quadrature lnZ over {} points: max rel {worst:.2e} (<= 1e-8), {secs:.3} s (< 1 s)", grid.len()),
    )]
}


fn criterion_2() -> Vec<Check> {
    let (mut worst_u, mut worst_n, mut worst_direct): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (alpha, beta, eps_star) in parabolic_grid() {
        let ln_z = |a: f64, b: f64| closed_form::ln_z(1.0, eps_star, a, b, 1.0);
        let u_fd = -richardson(|b| ln_z(alpha, b), beta, 1e-3 * beta);
        let n_fd = -richardson(|a| ln_z(a, beta), alpha, 1e-3);
        let u = closed_form::wealth(1.0, eps_star, alpha, beta, 1.0);
        let n = closed_form::population(1.0, eps_star, alpha, beta, 1.0);
        worst_u = worst_u.max(rel(u, u_fd));
        worst_n = worst_n.max(rel(n, n_fd));
        let dos = DensityOfStates::parabolic(1.0, eps_star).unwrap();
        let params = EnsembleParams::new(alpha, beta, 1.0).unwrap();
        worst_direct = worst_direct.max(rel(u, ensemble::wealth_quadrature(&dos, &params).unwrap()));
    }
    vec![
        check(
            "2a",
            worst_u <= 1e-5 && worst_n <= 1e-5,
            format!("U, N vs finite differences of lnZ: max rel {worst_u:.2e}, {worst_n:.2e} (<= 1e-5)"),
        ),
        check(
            "2b",
            worst_direct <= 1e-8,
            format!("U vs direct integral of eps g e^(-alpha-beta eps): max rel {worst_direct:.2e} (<= 1e-8)"),
        ),
    ]
}

fn criterion_3() -> Vec<Check> {
    let tab = vec![(0.0, 0.0), (0.5, 2.0), (1.5, 1.0), (2.0, 0.0)];
    let mp = MaxPressureDos::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let mut doses = vec![
        DensityOfStates::parabolic(1.0, 1.0).unwrap(),
        DensityOfStates::parabolic(2.5, 5.0).unwrap(),
        DensityOfStates::tabulated(tab.clone(), VolumeCoupling::Proportional).unwrap(),
        DensityOfStates::tabulated(tab, VolumeCoupling::Fixed).unwrap(),
        DensityOfStates::max_pressure(mp, Some(0.8), VolumeCoupling::Proportional).unwrap(),
        DensityOfStates::max_pressure(mp, Some(0.8), VolumeCoupling::Fixed).unwrap(),
    ];
    doses.push(
        DensityOfStates::max_pressure(MaxPressureDos::new(0.0, 2.0, 1.0, 1.0).unwrap(), None, VolumeCoupling::Proportional)
            .unwrap(),
    );
    let (mut worst_n, mut worst_p): (f64, f64) = (0.0, 0.0);
    let mut tested = 0;
    for dos in &doses {
        for &alpha in &[-1.0, 0.5, 2.0] {
            for &beta in &[0.1, 1.0, 10.0] {
                for &volume in &[0.5, 3.0] {
                    let params = EnsembleParams::new(alpha, beta, volume).unwrap();
                    let obs = ensemble::observables(dos, &params).unwrap();
                    worst_n = worst_n.max(rel(obs.population_n, obs.ln_z));
                    if dos.coupling() == VolumeCoupling::Proportional {
                        worst_p = worst_p.max(rel(obs.pressure_p * volume, obs.population_n * params.temperature()));
                    }
                    tested += 1;
                }
            }
        }
    }
    vec![
        check("3a", worst_n <= 1e-12, format!("N = lnZ over {tested} (dos, params) cases: max rel {worst_n:.2e} (<= 1e-12)")),
        check("3b", worst_p <= 1e-10, format!("p V = N T for proportional coupling: max rel {worst_p:.2e} (<= 1e-10)")),
    ]
}


fn criterion_4() -> Vec<Check> {
    let dos = DensityOfStates::parabolic(1.0, 1.0).unwrap();
    let table = ensemble::sweep_temperature(&dos, 1.0, 1.0, 0.01, 10.0, 500).unwrap();
    let t = table.column(|r| r.temperature);
    let u = table.column(|r| r.wealth_u);
    let n = table.column(|r| r.population_n);
    let p = table.column(|r| r.pressure_p);
    let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);

    let p_slope = slopes(&t, &p);
    let upper = &p_slope[p_slope.len() / 2..];

    let n_slope = slopes(&t, &n);
    let decile = &n_slope[n_slope.len() - n_slope.len() / 10..];
    let hi = decile.iter().copied().fold(f64::MIN, f64::max);
    let lo = decile.iter().copied().fold(f64::MAX, f64::min);
    let spread = (hi - lo) / hi;
    vec![
        check("4a", increasing(&u) && increasing(&n), "U and N strictly increasing over 500 steps of T in (0.01, 10)".into()),
        check(
            "4b",
            increasing(&p) && increasing(upper),
            format!(
                "p strictly increasing, slope strictly increasing over upper half ({:.6} -> {:.6})",
                upper[0],
                upper[upper.len() - 1]
            ),
        ),
        check(
            "4c",
            spread <= 0.02,
            format!(
                "N slope over last decile within 2% of constant: spread {:.1}% ({lo:.3e}..{hi:.3e}); N saturates toward e^-1/6 = {:.6}, last N = {:.6}",
                100.0 * spread,
                (-1f64).exp() / 6.0,
                n[n.len() - 1]
            ),
        ),
    ]
}



fn criterion_5() -> Vec<Check> {
    let systems = all_small_systems();
    let mut mismatches = 0usize;
    let mut cases = 0usize;
    for (eps, weights) in &systems {
        let e: Vec<f64> = eps.iter().map(|&x| x as f64).collect();
        let sys = LevelSystem::from_pairs(&e, weights).unwrap();
        for n in 0..=6 {
            let hist = labelled_histogram(eps, weights, n);
            for (energy, &expected) in hist.iter().enumerate() {
                let got = microstate::total_microstates(&sys, n, energy as f64, DEFAULT_E_TOL, CountingMode::Distinguishable)
                    .unwrap();
                cases += 1;
                if got != expected as f64 {
                    mismatches += 1;
                }
            }
        }
    }

    let mut disagreements = 0usize;
    let mut sums = 0usize;
    let mut worst_gap_over_bound: f64 = 0.0;
    for (eps, weights) in systems.iter().filter(|(_, w)| w.iter().all(|&x| x == w[0])) {
        let e: Vec<f64> = eps.iter().map(|&x| x as f64).collect();
        let sys = LevelSystem::from_pairs(&e, weights).unwrap();
        for &alpha in &[0.5, 1.0, 2.0] {
            for &beta in &[0.5, 1.0, 2.0] {
                let params = EnsembleParams::new(alpha, beta, 1.0).unwrap();
                let mut n_cap = 8;
                let result = loop {
                    match microstate::grand_sum_check(&sys, &params, n_cap, None, 1e-9) {
                        Err(econ_ensemble::Error::Truncation { .. }) if n_cap < 64 => n_cap *= 2,
                        other => break other.unwrap(),
                    }
                };
                let factorized: f64 = e
                    .iter()
                    .zip(weights)
                    .map(|(&x, &w)| w as f64 * (-alpha - beta * x).exp())
                    .sum::<f64>()
                    .exp();
                let gap = (result.direct - factorized).abs();
                sums += 1;
                if !result.agrees() || gap > result.tail_bound + 1e-12 * factorized {
                    disagreements += 1;
                }
                if result.tail_bound > 0.0 {
                    worst_gap_over_bound = worst_gap_over_bound.max(gap / (result.tail_bound + 1e-12 * factorized));
                }
            }
        }
    }
    vec![
        check(
            "5a",
            mismatches == 0,
            format!("Distinguishable totals vs labelled-assignment counts: {mismatches} mismatches in {cases} cases over {} systems", systems.len()),
        ),
        check(
            "5b",
            disagreements == 0,
            format!("grand sum direct vs factorized within tail bound: {disagreements} failures in {sums} checks, max gap/bound {worst_gap_over_bound:.2e}"),
        ),
    ]
}


/// `ln Omega_1 + ln Omega_2` for one split, straight from the microstate totals.
fn split_value(s1: &LevelSystem, s2: &LevelSystem, e: (u32, u32), n: (u32, u32), mode: CountingMode) -> f64 {
    let a = microstate::ln_total_microstates(s1, n.0, e.0 as f64, DEFAULT_E_TOL, CountingMode::CorrectedBoltzmann).unwrap();
    let b = microstate::ln_total_microstates(s2, n.1, e.1 as f64, DEFAULT_E_TOL, CountingMode::CorrectedBoltzmann).unwrap();
    let extra = if mode == CountingMode::Distinguishable { ln_binomial(n.0 + n.1, n.0) } else { 0.0 };
    a + b + extra
}

fn random_system(rng: &mut ChaCha8Rng) -> LevelSystem {
    let levels = rng.gen_range(2..=3);
    let mut eps: Vec<f64> = Vec::new();
    while eps.len() < levels {
        let x = rng.gen_range(0..=3) as f64;
        if !eps.contains(&x) {
            eps.push(x);
        }
    }
    eps.sort_by(f64::total_cmp);
    let w: Vec<u32> = (0..levels).map(|_| rng.gen_range(1..=3)).collect();
    LevelSystem::from_pairs(&eps, &w).unwrap()
}

fn criterion_6() -> Vec<Check> {
    let sym = LevelSystem::from_pairs(&[0.0, 1.0, 2.0], &[1, 1, 1]).unwrap();
    let splits: Vec<(u32, u32)> = [CountingMode::CorrectedBoltzmann, CountingMode::Distinguishable]
        .iter()
        .map(|&m| {
            let eq = equilibria::joint_equilibrium(&sym, &sym, 4, 4, m).unwrap();
            (eq.e1, eq.n1)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut violations = 0;
    let mut instances = 0;
    while instances < 20 {
        let (s1, s2) = (random_system(&mut rng), random_system(&mut rng));
        let (e_total, n_total) = (rng.gen_range(1..=8), rng.gen_range(1..=4));
        let Ok(eq) = equilibria::joint_equilibrium(&s1, &s2, e_total, n_total, CountingMode::CorrectedBoltzmann) else {
            continue;
        };
        instances += 1;
        let value = |e1: u32, n1: u32| {
            split_value(&s1, &s2, (e1, e_total - e1), (n1, n_total - n1), CountingMode::CorrectedBoltzmann)
        };
        let best = value(eq.e1, eq.n1);
        let mut neighbours = Vec::new();
        if eq.e1 > 0 {
            neighbours.push((eq.e1 - 1, eq.n1));
        }
        if eq.e1 < e_total {
            neighbours.push((eq.e1 + 1, eq.n1));
        }
        if eq.n1 > 0 {
            neighbours.push((eq.e1, eq.n1 - 1));
        }
        if eq.n1 < n_total {
            neighbours.push((eq.e1, eq.n1 + 1));
        }
        if neighbours.iter().any(|&(e1, n1)| value(e1, n1) > best + 1e-12 * best.abs().max(1.0)) {
            violations += 1;
        }
    }
    vec![
        check("6a", splits.iter().all(|&s| s == (2, 2)), format!("symmetric instance splits (corrected, distinguishable): {splits:?}, expected (2, 2)")),
        check("6b", violations == 0, format!("unit-neighbour maximality on {instances} random instances: {violations} violations")),
    ]
}

fn criterion_7() -> Vec<Check> {
    let grid: Vec<f64> = (0..64).map(|i| 3.0 * i as f64 / 63.0).collect();
    let mut worst: f64 = 0.0;
    for &alpha in &[0.5, 1.0, 2.0] {
        for &beta in &[0.5, 1.0, 2.0] {
            let vp = VolumeProfile::new(1.0, 0.0, alpha, beta).unwrap();
            let gp = MaxPressureDos::new(1.0, 0.0, alpha, beta).unwrap();
            let r = variational::euler_lagrange_residual(&vp, &gp, &grid).unwrap();
            worst = worst.max(r.max_rel_residual_v).max(r.max_rel_residual_g);
        }
    }

    // finite-difference oracle in plain f64 where alpha = beta = 0.5 keeps g representable
    let (a, b) = (0.5f64, 0.5f64);
    let v = |x: f64| (-a - (a + b * x).exp()).exp() / b;
    let g = |x: f64| ((a + b * x).exp() - a).exp() / b;
    let mut worst_fd: f64 = 0.0;
    for &x in grid.iter().filter(|&&x| x > 0.01) {
        let h = 1e-4;
        let u = (a + b * x).exp();
        let d1 = |f: &dyn Fn(f64) -> f64| (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = |f: &dyn Fn(f64) -> f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let (v1, v2) = (d1(&v), d2(&v));
        let (g1, g2) = (d1(&g), d2(&g));
        worst_fd = worst_fd
            .max((b * v1 * (1.0 - u) - v2).abs() / v2.abs().max((b * v1 * (1.0 - u)).abs()))
            .max((b * g1 * (u + 1.0) - g2).abs() / g2.abs());
    }

    let vp = VolumeProfile::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let gp = MaxPressureDos::new(1.0, 0.0, 1.0, 1.0).unwrap();
    let (sgrid, gs) = variational::sample_profile(&gp, 0.0, 1.0, 513).unwrap();
    let opts = StationarityOptions::default();
    let good = variational::stationarity_check(&sgrid, &gs, &vp, 1.0, 1.0, &opts).unwrap();
    let slope = (gs[gs.len() - 1] - gs[0]) / (sgrid[sgrid.len() - 1] - sgrid[0]);
    let linear: Vec<f64> = sgrid.iter().map(|&x| gs[0] + slope * x).collect();
    let bad = variational::stationarity_check(&sgrid, &linear, &vp, 1.0, 1.0, &opts).unwrap();
    let separation = bad.max_relative_first_variation / good.max_relative_first_variation;

    let wrong = LinearProfile { slope, intercept: gs[0] };
    let bad_residual = variational::euler_lagrange_residual_with(&vp, &wrong, 1.0, 1.0, &grid).unwrap();
    let good_ratio = good.shrink_ratio.unwrap_or(0.0);
    let bad_ratio = bad.shrink_ratio.unwrap_or(0.0);
    vec![
        check("7a", worst <= 1e-9, format!("Euler-Lagrange relative residuals over 64 points x 9 (alpha, beta): max {worst:.2e} (<= 1e-9)")),
        check("7b", worst_fd <= 1e-5, format!("finite-difference residual oracle at alpha = beta = 0.5: max rel {worst_fd:.2e} (<= 1e-5)")),
        check("7c", good_ratio >= 3.5, format!("stationarity shrink ratio for closed-form g: {good_ratio:.3} (>= 3.5)")),
        check(
            "7d",
            bad_residual.max_rel_residual_g >= 1e3 * 1e-9 && separation >= 1e3 && bad_ratio < 3.5,
            format!(
                "linear g: residual {:.2e} (>= 1e-6), first-variation separation {separation:.2e}x (>= 1e3), shrink ratio {bad_ratio:.3} (< 3.5)",
                bad_residual.max_rel_residual_g
            ),
        ),
    ]
}

fn criterion_8() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let c1 = rng.gen_range(0.1..5.0);
        let alpha = rng.gen_range(-1.0..1.0);
        let beta = rng.gen_range(0.2..2.0);
        let eps0 = rng.gen_range(1e-6..2.0);
        let vp = VolumeProfile::new(c1, 0.0, alpha, beta).unwrap();
        let found = variational::wealth_cutoff(&vp, vp.evaluate(eps0)).unwrap();
        worst = worst.max((found - eps0).abs());
    }
    vec![check("8", worst <= 1e-10, format!("cutoff round-trip over 20 random (c1, alpha, beta, eps0): max abs error {worst:.2e} (<= 1e-10)"))]
}

fn cli_tests_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/tests")
}

/// Runs the command-line entry point in-process and returns its exit code.
fn run_cli(cmd: &str, fixture: &str, out: &Path) -> Option<i32> {
    let scenario = cli_tests_dir().join("fixtures").join(format!("{fixture}.json"));
    let args = [
        "econ-ensemble".into(),
        cmd.into(),
        "--scenario".into(),
        scenario.into_os_string(),
        "--out".into(),
        out.as_os_str().to_owned(),
    ];
    Some(econ_ensemble_cli::main_with_args::<_, std::ffi::OsString>(args) as i32)
}

fn criterion_9() -> Vec<Check> {
    let root = cli_tests_dir().join("golden");
    let cases = [
        ("observables", "observables", "result.json"),
        ("sweep", "sweep", "sweep.csv"),
        ("enumerate", "enumerate", "result.json"),
        ("equilibrate", "equilibrate", "result.json"),
        ("optimize-dos", "optimize", "result.json"),
        ("validate", "validate_ok", "result.json"),
    ];
    let mut problems = Vec::new();
    for (cmd, fixture, file) in cases {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let codes = (run_cli(cmd, fixture, a.path()), run_cli(cmd, fixture, b.path()));
        if codes != (Some(0), Some(0)) {
            problems.push(format!("{cmd}: exit {codes:?}"));
            continue;
        }
        let first = fs::read(a.path().join(file)).unwrap_or_default();
        let second = fs::read(b.path().join(file)).unwrap_or_default();
        let golden = fs::read(root.join(fixture).join(file)).unwrap_or_default();
        if first != second || first != golden {
            problems.push(format!("{cmd}: output not byte-identical to golden"));
        }
    }
    for (cmd, fixture, expected) in [
        ("observables", "malformed", 1),
        ("enumerate", "enumerate_over_cap", 1),
        ("optimize-dos", "optimize_bad_b", 1),
        ("validate", "validate_bad_dos", 1),
        ("observables", "observables_divergent", 2),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let code = run_cli(cmd, fixture, dir.path());
        if code != Some(expected) {
            problems.push(format!("{cmd} {fixture}: exit {code:?}, expected {expected}"));
        }
    }
    vec![check(
        "9",
        problems.is_empty(),
        if problems.is_empty() {
            "six subcommands byte-identical across runs and to golden files; exit codes 0/1/2 as documented".into()
        } else {
            problems.join("; ")
        },
    )]
}

fn main() {
    let start = Instant::now();
    let criteria: [fn() -> Vec<Check>; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = Vec::new();
    for criterion in criteria {
        for c in criterion() {
            println!("[{}] criterion {:<3} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.detail);
            if !c.pass {
                failed.push(c.id);
            }
        }
    }
    println!("acceptance: {:.1} s total", start.elapsed().as_secs_f64());
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {}", failed.join(", "));
        std::process::exit(1);
    }
}
