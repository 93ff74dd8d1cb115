use serde::{Deserialize, Serialize};

use super::{FieldState, Lab};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Rk4,
    ImplicitMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrateSettings {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    /// 0 disables snapshots.
    pub snapshot_every: usize,
    /// Fixed-point tolerance of the implicit solve, relative to the state size.
    pub implicit_tol: f64,
    pub implicit_max_iter: usize,
}

impl Default for IntegrateSettings {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            steps: 100,
            scheme: Scheme::Rk4,
            snapshot_every: 0,
            implicit_tol: 1e-15,
            implicit_max_iter: 60,
        }
    }
}

impl IntegrateSettings {
    pub fn new(dt: f64, steps: usize, scheme: Scheme) -> Self {
        Self {
            dt,
            steps,
            scheme,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid(
                "dt",
                format!("must be finite and > 0, got {}", self.dt),
            ));
        }
        if !(self.implicit_tol > 0.0) {
            return Err(invalid("implicit_tol", "must be > 0"));
        }
        if self.implicit_max_iter == 0 {
            return Err(invalid("implicit_max_iter", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub snapshots: Vec<(f64, FieldState)>,
    pub final_state: FieldState,
    /// Largest fixed-point iteration count used by the implicit scheme.
    pub max_iterations: usize,
}

impl Trajectory {
    /// max |H(t) − H(0)| / |H(0)|
    pub fn max_drift(&self) -> f64 {
        let h0 = self.energies[0];
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        self.energies
            .iter()
            .fold(0.0_f64, |a, h| a.max((h - h0).abs() / scale))
    }
}

fn rk4_step(lab: &Lab, s: &FieldState, dt: f64) -> Result<FieldState> {
    let k1 = lab.rhs(s)?;
    let k2 = lab.rhs(&s.axpy(0.5 * dt, &k1))?;
    let k3 = lab.rhs(&s.axpy(0.5 * dt, &k2))?;
    let k4 = lab.rhs(&s.axpy(dt, &k3))?;
    Ok(s.axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4))
}

fn midpoint_step(
    lab: &Lab,
    s: &FieldState,
    dt: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(FieldState, usize)> {
    let mut next = s.axpy(dt, &lab.rhs(s)?);
    let scale = s.max_abs().max(f64::MIN_POSITIVE);
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let mid = FieldState {
            domain: s.domain,
            mass: s
                .mass
                .iter()
                .zip(&next.mass)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
            phi: s
                .phi
                .iter()
                .zip(&next.phi)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        };
        let candidate = s.axpy(dt, &lab.rhs(&mid)?);
        let new_change = candidate.axpy(-1.0, &next).max_abs();
        next = candidate;
        if new_change <= tol * scale {
            return Ok((next, it));
        }
        // roundoff stagnation
        if new_change >= change && new_change <= 1e3 * tol * scale {
            return Ok((next, it));
        }
        change = new_change;
    }
    if change <= 1e-10 * scale {
        return Ok((next, max_iter));
    }
    Err(Error::Unstable(format!(
        "implicit midpoint did not converge: last update {change:e} relative to state size {scale:e}"
    )))
}

impl Lab {
    pub fn integrate(
        &self,
        state: &FieldState,
        settings: &IntegrateSettings,
    ) -> Result<Trajectory> {
        self.integrate_with(state, settings, |_, _| {})
    }

    /// Integrates, calling `observe(t, state)` at t = 0 and after each step.
    pub fn integrate_with(
        &self,
        state: &FieldState,
        settings: &IntegrateSettings,
        mut observe: impl FnMut(f64, &FieldState),
    ) -> Result<Trajectory> {
        settings.validate()?;
        let h0 = self.hamiltonian(state)?;
        let mut traj = Trajectory {
            times: vec![0.0],
            energies: vec![h0],
            snapshots: Vec::new(),
            final_state: state.clone(),
            max_iterations: 0,
        };
        if settings.snapshot_every > 0 {
            traj.snapshots.push((0.0, state.clone()));
        }
        observe(0.0, state);
        let mut s = state.clone();
        let blow_up = 1e6 * h0.abs().max(f64::MIN_POSITIVE);
        for step in 1..=settings.steps {
            s = match settings.scheme {
                Scheme::Rk4 => rk4_step(self, &s, settings.dt),
                Scheme::ImplicitMidpoint => midpoint_step(
                    self,
                    &s,
                    settings.dt,
                    settings.implicit_tol,
                    settings.implicit_max_iter,
                )
                .map(|(next, it)| {
                    traj.max_iterations = traj.max_iterations.max(it);
                    next
                }),
            }
            .map_err(|e| match e {
                Error::Domain(msg) => Error::Unstable(format!("step {step}: {msg}")),
                other => other,
            })?;
            let t = step as f64 * settings.dt;
            if !s.is_finite() {
                return Err(Error::Unstable(format!("non-finite field at step {step}")));
            }
            let h = self
                .hamiltonian(&s)
                .map_err(|e| Error::Unstable(format!("step {step}: {e}")))?;
            if !h.is_finite() || (h - h0).abs() > blow_up {
                return Err(Error::Unstable(format!(
                    "energy blew up at step {step}: H = {h:e}"
                )));
            }
            traj.times.push(t);
            traj.energies.push(h);
            if settings.snapshot_every > 0 && step % settings.snapshot_every == 0 {
                traj.snapshots.push((t, s.clone()));
            }
            observe(t, &s);
        }
        traj.final_state = s;
        Ok(traj)
    }
}

/// Frequency of lattice mode `j` from zero crossings of its mass
/// coefficient, starting from a standing wave of the given amplitude.
pub fn measure_frequency(
    lab: &Lab,
    j: [i64; 3],
    amplitude: f64,
    dt: f64,
    steps: usize,
) -> Result<f64> {
    let start = lab.standing_wave(j, amplitude);
    let mut samples = Vec::with_capacity(steps + 1);
    let settings = IntegrateSettings::new(dt, steps, Scheme::Rk4);
    lab.integrate_with(&start, &settings, |t, s| {
        samples.push((t, lab.spectral().mode(&s.mass, j).re));
    })?;
    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let ((t0, a), (t1, b)) = (w[0], w[1]);
        if a == 0.0 {
            crossings.push(t0);
        } else if a.signum() != b.signum() && b != 0.0 {
            crossings.push(t0 + (t1 - t0) * a / (a - b));
        }
    }
    if crossings.len() < 3 {
        return Err(Error::Domain(format!(
            "only {} zero crossings in {} steps; run longer",
            crossings.len(),
            steps
        )));
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Ok(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}
