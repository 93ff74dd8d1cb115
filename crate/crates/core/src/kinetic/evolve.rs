use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::dispersion::frequency;
use crate::error::{invalid, Error, Result};
use crate::params::{PhysicalParams, Wavevector};
use crate::spectrum::WaveactionSpectrum;

use super::{collision_rates, QuadSettings};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveSettings {
    pub dt: f64,
    pub steps: usize,
    /// Upper bound on h max|rate/n| for every substep.
    pub cfl: f64,
    /// Keep a snapshot every this many steps (0: only first and last).
    pub snapshot_every: usize,
    /// Abort when E grows by more than this fraction of E(0).
    pub energy_growth_limit: f64,
}

impl Default for EvolveSettings {
    fn default() -> Self {
        Self {
            dt: 1.0,
            steps: 10,
            cfl: 0.1,
            snapshot_every: 0,
            energy_growth_limit: 0.5,
        }
    }
}

impl EvolveSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", "must be finite and > 0"));
        }
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(invalid("cfl", "must be finite and > 0"));
        }
        if !(self.energy_growth_limit > 0.0) {
            return Err(invalid("energy_growth_limit", "must be > 0"));
        }
        Ok(())
    }
}

/// A negative value produced by a step and reset to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipEvent {
    pub step: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub substeps: Vec<usize>,
    pub snapshots: Vec<(f64, WaveactionSpectrum)>,
    pub clips: Vec<ClipEvent>,
}

impl Trajectory {
    pub fn last(&self) -> &WaveactionSpectrum {
        &self.snapshots.last().expect("trajectory has snapshots").1
    }

    /// max |E(t) - E(0)| / (E(0) t_end).
    pub fn energy_drift_rate(&self) -> f64 {
        let e0 = self.energies[0];
        let t = *self.times.last().unwrap();
        let d = self
            .energies
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max);
        if t > 0.0 && e0 != 0.0 {
            d / (e0.abs() * t)
        } else {
            0.0
        }
    }
}

/// E = sum over nodes of k omega n dk dm (trapezoid cell widths).
pub fn spectrum_energy(s: &WaveactionSpectrum, params: &PhysicalParams) -> f64 {
    let g = s.grid();
    let (wk, wm) = (g.k_weights(), g.m_weights());
    g.nodes()
        .map(|p| p.k * frequency(p.k, p.m, params) * s.value(p.i, p.j) * wk[p.i] * wm[p.j])
        .sum()
}

fn rates(s: &WaveactionSpectrum, params: &PhysicalParams, quad: &QuadSettings) -> Result<Vec<f64>> {
    let nodes: Vec<Wavevector> = s
        .grid()
        .nodes()
        .map(|p| Wavevector { k: p.k, m: p.m })
        .collect();
    Ok(collision_rates(s, &nodes, params, quad)?
        .into_iter()
        .map(|r| r.rate)
        .collect())
}

fn clipped(values: Vec<f64>, step: usize, nm: usize, clips: &mut Vec<ClipEvent>) -> Vec<f64> {
    values
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            if v < 0.0 {
                clips.push(ClipEvent {
                    step,
                    i: idx / nm,
                    j: idx % nm,
                    value: v,
                });
                warn!(
                    "step {step}: clipped n = {v:e} at node ({}, {})",
                    idx / nm,
                    idx % nm
                );
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// Heun steps of dn/dt = collision rate at every grid node, each step split
/// into substeps so that h max|rate/n| stays below `cfl`.
pub fn evolve(
    initial: &WaveactionSpectrum,
    params: &PhysicalParams,
    quad: &QuadSettings,
    settings: &EvolveSettings,
) -> Result<Trajectory> {
    settings.validate()?;
    let nm = initial.grid().nm();
    let e0 = spectrum_energy(initial, params);
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut traj = Trajectory {
        times: vec![0.0],
        energies: vec![e0],
        substeps: vec![0],
        snapshots: vec![(0.0, initial.clone())],
        clips: Vec::new(),
    };
    for step in 1..=settings.steps {
        let mut remaining = settings.dt;
        let mut count = 0usize;
        while remaining > 1e-14 * settings.dt {
            let r1 = rates(&state, params, quad)?;
            let speed = r1
                .iter()
                .zip(state.values())
                .filter(|(_, n)| **n > 0.0)
                .map(|(r, n)| (r / n).abs())
                .fold(0.0, f64::max);
            let h = if speed > 0.0 {
                remaining.min(settings.cfl / speed)
            } else {
                remaining
            };
            let predictor: Vec<f64> = state
                .values()
                .iter()
                .zip(&r1)
                .map(|(n, r)| n + h * r)
                .collect();
            let mid = state.with_values(clipped(predictor, step, nm, &mut traj.clips))?;
            let r2 = rates(&mid, params, quad)?;
            let next: Vec<f64> = state
                .values()
                .iter()
                .zip(r1.iter().zip(&r2))
                .map(|(n, (a, b))| n + 0.5 * h * (a + b))
                .collect();
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("spectrum after step {step}")));
            }
            state = state.with_values(clipped(next, step, nm, &mut traj.clips))?;
            remaining -= h;
            t += h;
            count += 1;
        }
        let e = spectrum_energy(&state, params);
        debug!("step {step}: t = {t}, E = {e}, substeps = {count}");
        if e0 > 0.0 && e - e0 > settings.energy_growth_limit * e0 {
            return Err(Error::Unstable(format!(
                "energy grew from {e0} to {e} by step {step}"
            )));
        }
        traj.times.push(t);
        traj.energies.push(e);
        traj.substeps.push(count);
        let keep = step == settings.steps
            || (settings.snapshot_every > 0 && step % settings.snapshot_every == 0);
        if keep {
            traj.snapshots.push((t, state.clone()));
        }
    }
    Ok(traj)
}
