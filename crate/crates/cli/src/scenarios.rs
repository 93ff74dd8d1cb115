use std::collections::BTreeMap;
use std::f64::consts::PI;

use isowave::gm::{gm_energy_density, slope_fit, wt_energy_density, GMParams};
use isowave::hamlab::{measure_frequency, Lab};
use isowave::kinetic::{
    collision_rates, cutoff_extensions, evolve, locality_check, nested_extensions,
    stationarity_scan,
};
use isowave::triads::Triad;
use isowave::{dispersion, make_log_grid, Equipartition, Spectrum, WaveactionSpectrum, Wavevector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toml::Value;

use crate::config::{InitialState, RunConfig, Scenario, SpectrumKind};
use crate::output::OutputDir;
use crate::CliError;

pub type Summary = BTreeMap<String, Value>;

pub fn run_scenario(
    scenario: Scenario,
    cfg: &RunConfig,
    out: &mut OutputDir,
) -> Result<Summary, CliError> {
    match scenario {
        Scenario::Dispersion => run_dispersion(cfg, out),
        Scenario::TriadsDump => run_triads(cfg, out),
        Scenario::CollisionScan => run_collision(cfg, out),
        Scenario::ExponentScan => run_exponent_scan(cfg, out),
        Scenario::Locality => run_locality(cfg, out),
        Scenario::Evolve => run_evolve(cfg, out),
        Scenario::GmCompare => run_gm(cfg, out),
        Scenario::HamlabRun => run_hamlab(cfg, out),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Box<dyn Spectrum>, CliError> {
    let params = cfg.physics.params()?;
    Ok(match cfg.spectrum.kind {
        SpectrumKind::PowerLaw => Box::new(cfg.spectrum.law()?),
        SpectrumKind::Equipartition => {
            Box::new(Equipartition::new(params, cfg.spectrum.temperature)?)
        }
    })
}

fn run_dispersion(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let grid = cfg.grid.grid()?;
    let mut csv = out.csv("dispersion.csv", &["k", "m", "omega"])?;
    for p in grid.nodes() {
        csv.row(&[p.k, p.m, dispersion::frequency(p.k, p.m, &params)])?;
    }
    csv.finish()?;
    let mut s = Summary::new();
    s.insert("nodes".into(), Value::Integer(grid.len() as i64));
    Ok(s)
}

fn run_triads(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let coupling = cfg.quad.coupling(&params);
    let t = &cfg.triads;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lk0, lk1) = (t.k_min.ln(), t.k_max.ln());
    let mut csv = out.csv(
        "triads.csv",
        &[
            "k1",
            "m1",
            "k2",
            "m2",
            "k3",
            "m3",
            "I",
            "J",
            "K_imag",
            "v_squared",
        ],
    )?;
    let mut written = 0;
    while written < t.count {
        let mut vector = || {
            let k = rng.random_range(lk0..lk1).exp();
            let th = rng.random_range(0.0..2.0 * PI);
            [k * th.cos(), k * th.sin()]
        };
        let (k2, k3) = (vector(), vector());
        let mut vertical = || {
            let m = t.m_max * rng.random_range(0.01..1.0);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        };
        let (m2, m3) = (vertical(), vertical());
        let Ok(triad) = Triad::from_vectors(k2, m2, k3, m3) else {
            continue;
        };
        if triad.m()[0] == 0.0 || triad.k()[0] == 0.0 {
            continue;
        }
        let e = coupling.element(&triad);
        let (k, m) = (triad.k(), triad.m());
        csv.row(&[
            k[0],
            m[0],
            k[1],
            m[1],
            k[2],
            m[2],
            e.i,
            e.j,
            e.k,
            e.v_squared(),
        ])?;
        written += 1;
    }
    csv.finish()?;
    let mut s = Summary::new();
    s.insert("triads".into(), Value::Integer(written as i64));
    Ok(s)
}

fn run_collision(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let grid = cfg.grid.grid()?;
    let quad = cfg
        .quad
        .with_cutoffs(cfg.quad.cutoffs.unwrap_or(grid.cutoffs()));
    let spectrum = spectrum(cfg)?;
    let nodes: Vec<Wavevector> = grid
        .nodes()
        .map(|p| Wavevector { k: p.k, m: p.m })
        .collect();
    let results = collision_rates(spectrum.as_ref(), &nodes, &params, &quad)?;
    let mut csv = out.csv(
        "collision.csv",
        &[
            "k",
            "m",
            "rate",
            "direct",
            "first_mirror",
            "second_mirror",
            "normalizer",
            "relative",
        ],
    )?;
    let mut worst = 0.0_f64;
    for r in &results {
        let b = r.branch_contributions;
        csv.row(&[
            r.node.k,
            r.node.m,
            r.rate,
            b[0],
            b[1],
            b[2],
            r.normalizer,
            r.relative(),
        ])?;
        worst = worst.max(r.relative().abs());
    }
    csv.finish()?;
    let mut s = Summary::new();
    s.insert("nodes".into(), Value::Integer(results.len() as i64));
    s.insert("max_relative_rate".into(), Value::Float(worst));
    Ok(s)
}

fn run_exponent_scan(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let grid = cfg.grid.grid()?;
    let quad = cfg
        .quad
        .with_cutoffs(cfg.quad.cutoffs.unwrap_or(grid.cutoffs()));
    let probes = cfg.scan.probe_nodes(&grid);
    let scan = stationarity_scan(&cfg.scan.xs(), &cfg.scan.ys(), &probes, &params, &quad)?;
    let mut csv = out.csv("exponent_scan.csv", &["x", "y", "residual_norm"])?;
    for (ix, &x) in scan.xs.iter().enumerate() {
        for (iy, &y) in scan.ys.iter().enumerate() {
            csv.row(&[x, y, scan.residual(ix, iy)])?;
        }
    }
    csv.finish()?;
    let (x, y, r) = scan.argmin();
    let mut s = Summary::new();
    s.insert("argmin_x".into(), Value::Float(x));
    s.insert("argmin_y".into(), Value::Float(y));
    s.insert("residual_min".into(), Value::Float(r));
    Ok(s)
}

fn run_locality(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let grid = cfg.grid.grid()?;
    let base = cfg.quad.cutoffs.unwrap_or(grid.cutoffs());
    let l = &cfg.locality;
    let mut boxes = cutoff_extensions(&base, l.factor);
    boxes.extend(nested_extensions(&base, &l.nested).into_iter().skip(1));
    let law = cfg.spectrum.law()?;
    let node = Wavevector::new(l.k, l.m)?;
    let table = locality_check(&law, node, &params, &cfg.quad, &boxes, l.tolerance)?;
    let mut csv = out.csv(
        "locality.csv",
        &[
            "cutoff",
            "k_min",
            "k_max",
            "m_min",
            "m_max",
            "rate",
            "relative_change",
            "direct",
            "first_mirror",
            "second_mirror",
            "normalizer",
        ],
    )?;
    let changes: Vec<f64> = std::iter::once(0.0)
        .chain(table.relative_changes())
        .collect();
    for (row, change) in table.rows.iter().zip(&changes) {
        let c = row.cutoffs;
        let b = row.branch_contributions;
        csv.labelled(
            &row.label,
            &[
                c.k_min,
                c.k_max,
                c.m_min,
                c.m_max,
                row.rate,
                *change,
                b[0],
                b[1],
                b[2],
                row.normalizer,
            ],
        )?;
    }
    csv.finish()?;
    let mut s = Summary::new();
    s.insert("converged".into(), Value::Boolean(table.converged()));
    s.insert(
        "max_relative_change".into(),
        Value::Float(changes.iter().cloned().fold(0.0, f64::max)),
    );
    Ok(s)
}

fn run_evolve(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let grid = cfg.grid.grid()?;
    let spectrum = spectrum(cfg)?;
    let initial = WaveactionSpectrum::from_fn(grid.clone(), |k, m| spectrum.n(k, m))?;
    let traj = evolve(&initial, &params, &cfg.quad, &cfg.evolve)?;
    let mut csv = out.csv("evolve.csv", &["t", "energy", "substeps"])?;
    for i in 0..traj.times.len() {
        csv.row(&[traj.times[i], traj.energies[i], traj.substeps[i] as f64])?;
    }
    csv.finish()?;
    for (idx, (t, snap)) in traj.snapshots.iter().enumerate() {
        out.spectrum_snapshot(&format!("snapshot_{idx:04}.txt"), *t, snap)?;
    }
    let mut s = Summary::new();
    s.insert(
        "energy_drift_rate".into(),
        Value::Float(traj.energy_drift_rate()),
    );
    s.insert("clips".into(), Value::Integer(traj.clips.len() as i64));
    Ok(s)
}

fn run_gm(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let params = cfg.physics.params()?;
    let g = &cfg.gm;
    let gm = GMParams::new(g.energy, g.m_star, params)?;
    let grid = make_log_grid(g.k_min, g.k_max, g.nk, g.m_min, g.m_max, g.nm)?;
    let mut gm_values = Vec::with_capacity(grid.len());
    let mut wt_values = Vec::with_capacity(grid.len());
    let mut csv = out.csv(
        "gm_compare.csv",
        &["k", "m", "gm_density", "wt_density", "ratio"],
    )?;
    for p in grid.nodes() {
        let a = gm_energy_density(p.k, p.m, &gm)?;
        let b = wt_energy_density(p.k, p.m, 1.0)?;
        csv.row(&[p.k, p.m, a, b, a / b])?;
        gm_values.push(a);
        wt_values.push(b);
    }
    csv.finish()?;
    let kw = (g.k_window[0], g.k_window[1]);
    let mw = (g.m_window[0], g.m_window[1]);
    let gm_fit = slope_fit(&grid, &gm_values, kw, mw)?;
    let wt_fit = slope_fit(&grid, &wt_values, kw, mw)?;
    let mut slopes = out.csv("gm_slopes.csv", &["spectrum", "x_slope", "y_slope", "rms"])?;
    slopes.labelled("gm", &[gm_fit.x, gm_fit.y, gm_fit.rms])?;
    slopes.labelled("wt", &[wt_fit.x, wt_fit.y, wt_fit.rms])?;
    slopes.labelled(
        "gm_minus_wt",
        &[gm_fit.x - wt_fit.x, gm_fit.y - wt_fit.y, 0.0],
    )?;
    slopes.finish()?;
    let mut s = Summary::new();
    s.insert("gm_x_slope".into(), Value::Float(gm_fit.x));
    s.insert("gm_y_slope".into(), Value::Float(gm_fit.y));
    s.insert("wt_x_slope".into(), Value::Float(wt_fit.x));
    s.insert("wt_y_slope".into(), Value::Float(wt_fit.y));
    Ok(s)
}

fn run_hamlab(cfg: &RunConfig, out: &mut OutputDir) -> Result<Summary, CliError> {
    let h = &cfg.hamlab;
    let domain = h.domain()?;
    let lab = Lab::new(h.model(&cfg.physics)?, domain)?;
    let start = match h.initial {
        InitialState::Random => lab.random_state(cfg.seed, h.amplitude),
        InitialState::Standing => lab.standing_wave(h.mode, h.amplitude),
    };
    let traj = lab.integrate(&start, &h.settings())?;
    let h0 = traj.energies[0];
    let mut csv = out.csv("energy.csv", &["step", "t", "energy", "relative_drift"])?;
    for (i, (&t, &e)) in traj.times.iter().zip(&traj.energies).enumerate() {
        let drift = if h0 == 0.0 {
            e.abs()
        } else {
            (e - h0).abs() / h0.abs()
        };
        csv.row(&[i as f64, t, e, drift])?;
    }
    csv.finish()?;
    for (idx, (t, state)) in traj.snapshots.iter().enumerate() {
        out.field_snapshot(&format!("mass_{idx:04}.txt"), *t, &domain, &state.mass)?;
        out.field_snapshot(&format!("phi_{idx:04}.txt"), *t, &domain, &state.phi)?;
    }
    let mut s = Summary::new();
    s.insert("max_drift".into(), Value::Float(traj.max_drift()));
    s.insert(
        "final_energy".into(),
        Value::Float(*traj.energies.last().unwrap()),
    );
    if h.initial == InitialState::Standing {
        let (k, m) = domain.wavevector(h.mode);
        let measured = measure_frequency(&lab, h.mode, h.amplitude, h.dt, h.steps)?;
        s.insert("measured_frequency".into(), Value::Float(measured));
        if let Ok(w) = lab.model().linear_frequency(k, m) {
            s.insert("linear_frequency".into(), Value::Float(w));
        }
    }
    Ok(s)
}
