//! Subcommand bodies. Each reads its section of the scenario, computes, and
//! writes its files only once every computation has succeeded.

use std::path::PathBuf;

use econ_ensemble::equilibria::{self, FlowPrediction, InvasionVerdict, JointEquilibrium, SplitEntry};
use econ_ensemble::microstate::{self, OccupationVector};
use econ_ensemble::variational::{
    self, CutoffResult, MaxPressureDos, ReadingComparison, ResidualReport, StationarityReport, VolumeProfile,
};
use econ_ensemble::{ensemble, CountingMode, DosIssue, Error, Level};
use serde::Serialize;

use crate::scenario::{GridSpec, Scenario};
use crate::{output, svg, Failure};

pub struct Options {
    pub out: PathBuf,
    pub svg: bool,
    pub verbose: bool,
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    s.as_ref()
        .ok_or_else(|| Failure::input(format!("scenario has no \"{name}\" section")))
}

#[derive(Serialize)]
struct ObservablesOut {
    command: &'static str,
    alpha: f64,
    beta: f64,
    volume: f64,
    #[serde(rename = "T")]
    temperature: f64,
    mu: f64,
    ln_z: f64,
    #[serde(rename = "U")]
    wealth: f64,
    #[serde(rename = "N")]
    population: f64,
    p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    signed_pressure: Option<f64>,
}

pub fn observables(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let dos = section(&sc.dos, "dos")?.build()?;
    let params = section(&sc.params, "params")?.build()?;
    let obs = ensemble::observables(&dos, &params)?;
    let out = ObservablesOut {
        command: "observables",
        alpha: params.alpha(),
        beta: params.beta(),
        volume: params.volume(),
        temperature: params.temperature(),
        mu: params.potential(),
        ln_z: obs.ln_z,
        wealth: obs.wealth_u,
        population: obs.population_n,
        p: obs.pressure_p,
        signed_pressure: opts.verbose.then(|| obs.literal_signed_pressure()),
    };
    output::write(&opts.out, "result.json", &output::to_json(&out)?)
}

pub fn sweep(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let dos = section(&sc.dos, "dos")?.build()?;
    let s = section(&sc.sweep, "sweep")?;
    let table = ensemble::sweep_temperature(&dos, s.alpha, s.volume, s.t_min, s.t_max, s.steps)?;
    let mut files = vec![("sweep.csv".to_string(), output::sweep_csv(&table))];
    if opts.svg {
        let t = table.column(|r| r.temperature);
        let series: [(&str, Vec<f64>); 4] = [
            ("ln_z", table.column(|r| r.ln_z)),
            ("U", table.column(|r| r.wealth_u)),
            ("N", table.column(|r| r.population_n)),
            ("p", table.column(|r| r.pressure_p)),
        ];
        for (name, ys) in series {
            let chart = svg::line_chart(&format!("{name} vs T"), "T", name, &t, &ys)
                .ok_or_else(|| Failure::numerical(format!("{name} has non-finite values")))?;
            files.push((format!("fig_{name}.svg"), chart));
        }
    }
    for (name, contents) in &files {
        output::write(&opts.out, name, contents)?;
    }
    if opts.verbose {
        eprintln!("sweep: {} rows written", table.rows.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct DistributionOut {
    a: Vec<u32>,
    e_total: f64,
    omega: f64,
}

#[derive(Serialize)]
struct EnumerateOut {
    command: &'static str,
    levels: Vec<Level>,
    n: u32,
    e: f64,
    mode: CountingMode,
    infeasible: bool,
    distributions: Vec<DistributionOut>,
    total_omega: f64,
    most_probable: Option<Vec<u32>>,
    temperature: Option<f64>,
    potential: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

/// `Ok(None)` with a note when the difference quotient is degenerate.
fn quotient(r: econ_ensemble::Result<f64>, what: &str, notes: &mut Vec<String>) -> Result<Option<f64>, Failure> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::DegenerateDifference(_)) => {
            notes.push(format!("{what}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn enumerate(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let cfg = section(&sc.enumerate, "enumerate")?;
    let sys = cfg.system()?;
    let list: Vec<OccupationVector> =
        microstate::enumerate_distributions_with(&sys, cfg.n, cfg.e, cfg.e_tol, cfg.limits())?;

    let mut most_probable: Option<(&OccupationVector, f64)> = None;
    for occ in &list {
        let ln = microstate::ln_microstate_count(occ, &sys, CountingMode::CorrectedBoltzmann);
        if most_probable.is_none_or(|(_, best)| ln > best) {
            most_probable = Some((occ, ln));
        }
    }
    let distributions: Vec<DistributionOut> = list
        .iter()
        .map(|occ| DistributionOut {
            a: occ.a.clone(),
            e_total: occ.e_total,
            omega: microstate::microstate_count(occ, &sys, cfg.mode),
        })
        .collect();

    let mut notes = Vec::new();
    let (temperature, potential) = if list.is_empty() {
        (None, None)
    } else {
        let t = microstate::temperature_from_entropy(&sys, cfg.n, cfg.e, cfg.delta_e, cfg.e_tol, cfg.mode);
        let mu = microstate::potential_from_entropy(&sys, cfg.n, cfg.e, cfg.delta_n, cfg.e_tol, cfg.mode);
        (quotient(t, "temperature", &mut notes)?, quotient(mu, "potential", &mut notes)?)
    };
    let out = EnumerateOut {
        command: "enumerate",
        levels: sys.levels().to_vec(),
        n: cfg.n,
        e: cfg.e,
        mode: cfg.mode,
        infeasible: list.is_empty(),
        total_omega: distributions.iter().map(|d| d.omega).sum(),
        distributions,
        most_probable: most_probable.map(|(occ, _)| occ.a.clone()),
        temperature,
        potential,
        notes,
    };
    output::write(&opts.out, "result.json", &output::to_json(&out)?)
}

#[derive(Serialize)]
struct EquilibrateOut {
    command: &'static str,
    mode: CountingMode,
    e_total: u32,
    n_total: u32,
    tolerance: f64,
    equilibrium: JointEquilibrium,
    temperature_gap: Option<f64>,
    potential_gap: Option<f64>,
    flow: Option<FlowPrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow_note: Option<String>,
    invasion: Option<InvasionVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split_table: Option<Vec<SplitEntry>>,
}

pub fn equilibrate(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let cfg = section(&sc.equilibrate, "equilibrate")?;
    let (sys1, sys2) = cfg.systems()?;
    let eq = equilibria::joint_equilibrium(&sys1, &sys2, cfg.e_total, cfg.n_total, cfg.mode)?;
    let (s1, s2) = (eq.first, eq.second);
    let gap = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| (a - b).abs());
    // lattice temperatures of bounded level sets can be negative, where the
    // flow predicate is undefined
    let (flow, flow_note) = match (s1.temperature, s1.potential, s2.temperature, s2.potential) {
        (Some(t1), Some(mu1), Some(t2), Some(mu2)) => {
            match equilibria::flow_direction(t1, mu1, t2, mu2, cfg.tolerance) {
                Ok(f) => (Some(f), None),
                Err(e @ Error::ParameterDomain(_)) => (None, Some(e.to_string())),
                Err(e) => return Err(e.into()),
            }
        }
        _ => (None, Some("a subsystem temperature or potential is undefined".into())),
    };
    let split_table = if opts.verbose {
        Some(equilibria::split_table(&sys1, &sys2, cfg.e_total, cfg.n_total, cfg.mode)?)
    } else {
        None
    };
    let out = EquilibrateOut {
        command: "equilibrate",
        mode: cfg.mode,
        e_total: cfg.e_total,
        n_total: cfg.n_total,
        tolerance: cfg.tolerance,
        temperature_gap: gap(s1.temperature, s2.temperature),
        potential_gap: gap(s1.potential, s2.potential),
        equilibrium: eq,
        flow,
        flow_note,
        invasion: cfg
            .pressures
            .map(|[p1, p2]| equilibria::invasion_outcome(p1, p2, cfg.tolerance)),
        split_table,
    };
    output::write(&opts.out, "result.json", &output::to_json(&out)?)
}

#[derive(Serialize)]
struct ProfileOut {
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize)]
struct CutoffOut {
    b: f64,
    eps0: f64,
    level_mass: f64,
}

#[derive(Serialize)]
struct GridOut {
    start: f64,
    end: f64,
    points: usize,
}

impl From<GridSpec> for GridOut {
    fn from(g: GridSpec) -> Self {
        GridOut {
            start: g.start,
            end: g.end,
            points: g.points,
        }
    }
}

#[derive(Serialize)]
struct OptimizeOut {
    command: &'static str,
    profile: ProfileOut,
    cutoff: Option<CutoffOut>,
    residual_grid: GridOut,
    residuals: ResidualReport,
    stationarity_grid: GridOut,
    seed: u64,
    stationarity: StationarityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    readings: Option<ReadingComparison>,
}

pub fn optimize_dos(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let cfg = section(&sc.optimize, "optimize")?;
    let vp = variational::optimal_volume_profile(cfg.c1, cfg.c2, cfg.alpha, cfg.beta)?;
    let gp = variational::optimal_dos_profile(cfg.c3, cfg.c4, cfg.alpha, cfg.beta)?;

    let cutoff = match cfg.b {
        Some(b) => {
            let CutoffResult { eps0, level_mass } = variational::cutoff(&vp, &gp, b)?;
            Some(CutoffOut { b, eps0, level_mass })
        }
        None => None,
    };
    let residuals = variational::euler_lagrange_residual(&vp, &gp, &cfg.residual_grid.points()?)?;

    let st = cfg.stationarity;
    let (grid, g) = variational::sample_profile(&gp, st.grid.start, st.grid.end, st.grid.points)?;
    let st_opts = st.options();
    let stationarity = variational::stationarity_check(&grid, &g, &vp, cfg.alpha, cfg.beta, &st_opts)?;
    let readings = if opts.verbose {
        Some(variational::compare_readings(&grid, &g, &vp, cfg.alpha, cfg.beta, &st_opts)?)
    } else {
        None
    };

    let mut files = Vec::new();
    if opts.svg {
        files.extend(profile_charts(&vp, &gp, &cfg.plot)?);
    }
    let out = OptimizeOut {
        command: "optimize-dos",
        profile: ProfileOut {
            c1: cfg.c1,
            c2: cfg.c2,
            c3: cfg.c3,
            c4: cfg.c4,
            alpha: cfg.alpha,
            beta: cfg.beta,
        },
        cutoff,
        residual_grid: cfg.residual_grid.into(),
        residuals,
        stationarity_grid: st.grid.into(),
        seed: st.seed,
        stationarity,
        readings,
    };
    files.push(("result.json".into(), output::to_json(&out)?));
    for (name, contents) in &files {
        output::write(&opts.out, name, contents)?;
    }
    Ok(())
}

fn profile_charts(vp: &VolumeProfile, gp: &MaxPressureDos, plot: &GridSpec) -> Result<Vec<(String, String)>, Failure> {
    let xs = plot.points()?;
    let v: Vec<f64> = xs.iter().map(|&x| vp.evaluate(x)).collect();
    let g = xs.iter().map(|&x| gp.evaluate(x)).collect::<econ_ensemble::Result<Vec<f64>>>()?;
    let chart = |title: &str, name: &str, ys: &[f64]| {
        svg::line_chart(title, "eps", name, &xs, ys)
            .ok_or_else(|| Failure::numerical(format!("{name} has non-finite values on the plot range")))
    };
    Ok(vec![
        ("fig_volume.svg".into(), chart("V(eps)", "V", &v)?),
        ("fig_dos.svg".into(), chart("g(eps)", "g", &g)?),
    ])
}

#[derive(Serialize)]
struct ValidateOut {
    command: &'static str,
    valid: bool,
    issues: Vec<DosIssue>,
    errors: Vec<String>,
}

pub fn validate(sc: &Scenario, opts: &Options) -> Result<(), Failure> {
    let mut issues = Vec::new();
    let mut errors = Vec::new();
    let mut check = |what: &str, r: Result<(), Failure>| {
        if let Err(f) = r {
            errors.push(format!("{what}: {f}"));
        }
    };
    if let Some(d) = &sc.dos {
        match d.build() {
            Ok(dos) => issues = dos.validate().issues,
            Err(f) => check("dos", Err(f)),
        }
    }
    if let Some(p) = &sc.params {
        check("params", p.build().map(drop));
    }
    if let Some(s) = &sc.sweep {
        check(
            "sweep",
            ensemble::temperature_grid(s.t_min, s.t_max, s.steps)
                .map(drop)
                .map_err(Failure::from),
        );
    }
    if let Some(e) = &sc.enumerate {
        check("enumerate", e.system().map(drop));
    }
    if let Some(e) = &sc.equilibrate {
        check("equilibrate", e.systems().map(drop));
    }
    if let Some(o) = &sc.optimize {
        let profiles = VolumeProfile::new(o.c1, o.c2, o.alpha, o.beta)
            .and_then(|_| MaxPressureDos::new(o.c3, o.c4, o.alpha, o.beta))
            .map(drop)
            .map_err(Failure::from);
        check("optimize", profiles);
        check("optimize.residual_grid", o.residual_grid.points().map(drop));
        check("optimize.stationarity.grid", o.stationarity.grid.points().map(drop));
        check("optimize.plot", o.plot.points().map(drop));
    }
    let valid = issues.is_empty() && errors.is_empty();
    let out = ValidateOut {
        command: "validate",
        valid,
        issues,
        errors,
    };
    output::write(&opts.out, "result.json", &output::to_json(&out)?)?;
    if valid {
        Ok(())
    } else {
        Err(Failure::input("scenario failed validation; see result.json"))
    }
}
