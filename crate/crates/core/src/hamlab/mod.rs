//! Pseudo-spectral laboratory for the shallow-water and isopycnal
//! internal-wave Hamiltonian models on periodic boxes.
//!
//! Every model is written as H = ∫ ½ W |u|² + V(mass), with
//! u = ∇φ + ∇⊥Δ⁻¹σ for the rotating kinds, and evolved canonically:
//! mass_t = δH/δφ, φ_t = −δH/δmass. Shallow-water kinds are
//! nondimensional with unit mean depth, gravity and Coriolis parameter, so
//! their uniform potential vorticity is 1. Internal-wave kinds carry the
//! deviation Π from the reference Π₀ = −g/N² on an (x, y, ρ) grid and use
//! the Boussinesq potential −(g/2ρ₀²) |∫^ρ Π|².

mod integrate;
mod spectral;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dispersion;
use crate::error::{invalid, Error, Result};
use crate::numerics::CompensatedSum;
use crate::params::PhysicalParams;

pub use integrate::{measure_frequency, IntegrateSettings, Scheme, Trajectory};
pub use spectral::Spectral;

/// Periodic box; shallow-water domains have a single ρ layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    n: [usize; 3],
    len: [f64; 3],
}

impl Domain {
    pub fn new(n: [usize; 3], len: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if n[a] == 0 {
                return Err(invalid("grid", "every axis needs at least one point"));
            }
            if !(len[a].is_finite() && len[a] > 0.0) {
                return Err(invalid("length", format!("axis {a} length must be > 0")));
            }
        }
        Ok(Self { n, len })
    }

    pub fn horizontal(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::new([nx, ny, 1], [lx, ly, 1.0])
    }

    /// 2π-periodic cube with `n` points per axis.
    pub fn cube(n: usize) -> Result<Self> {
        Self::new([n; 3], [2.0 * PI; 3])
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    pub fn len(&self) -> [f64; 3] {
        self.len
    }

    pub fn points(&self) -> usize {
        self.n.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        (0..3).map(|a| self.len[a] / self.n[a] as f64).product()
    }

    pub fn volume(&self) -> f64 {
        self.len.iter().product()
    }

    /// Collocation points in storage order.
    pub fn coordinates(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        let h = [0, 1, 2].map(|a| self.len[a] / self.n[a] as f64);
        let [nx, ny, nz] = self.n;
        (0..nx).flat_map(move |ix| {
            (0..ny).flat_map(move |iy| {
                (0..nz).map(move |iz| [ix as f64 * h[0], iy as f64 * h[1], iz as f64 * h[2]])
            })
        })
    }

    /// Wavevector (|k|, m) of lattice mode j.
    pub fn wavevector(&self, j: [i64; 3]) -> (f64, f64) {
        let k = [0, 1, 2].map(|a| 2.0 * PI * j[a] as f64 / self.len[a]);
        (k[0].hypot(k[1]), k[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "linear_sw")]
    LinearSW,
    #[serde(rename = "nonlinear_sw")]
    NonlinearSW,
    #[serde(rename = "rotating_linear_sw")]
    RotatingLinearSW,
    #[serde(rename = "rotating_nonlinear_sw")]
    RotatingNonlinearSW,
    #[serde(rename = "internal_waves")]
    InternalWaves,
    #[serde(rename = "rotating_internal_waves")]
    RotatingInternalWaves,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::LinearSW,
        ModelKind::NonlinearSW,
        ModelKind::RotatingLinearSW,
        ModelKind::RotatingNonlinearSW,
        ModelKind::InternalWaves,
        ModelKind::RotatingInternalWaves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LinearSW => "linear_sw",
            ModelKind::NonlinearSW => "nonlinear_sw",
            ModelKind::RotatingLinearSW => "rotating_linear_sw",
            ModelKind::RotatingNonlinearSW => "rotating_nonlinear_sw",
            ModelKind::InternalWaves => "internal_waves",
            ModelKind::RotatingInternalWaves => "rotating_internal_waves",
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, ModelKind::LinearSW | ModelKind::RotatingLinearSW)
    }

    pub fn is_rotating(self) -> bool {
        matches!(
            self,
            ModelKind::RotatingLinearSW
                | ModelKind::RotatingNonlinearSW
                | ModelKind::RotatingInternalWaves
        )
    }

    pub fn is_internal(self) -> bool {
        matches!(
            self,
            ModelKind::InternalWaves | ModelKind::RotatingInternalWaves
        )
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("model", format!("unknown model kind `{s}`")))
    }
}

/// Potential-vorticity profile of the rotating internal-wave model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum PvProfile {
    /// q₀ = f/Π₀ on every isopycnal.
    #[default]
    Rest,
    /// Background Π̄(ρ) = β Π₀ cos(2πρ/L) and q₀(ρ) = f/(Π₀ + Π̄).
    Layered { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    kind: ModelKind,
    params: PhysicalParams,
    profile: PvProfile,
}

impl Model {
    pub fn new(kind: ModelKind, params: PhysicalParams, profile: PvProfile) -> Result<Self> {
        if let PvProfile::Layered { beta } = profile {
            if !(beta.abs() < 1.0) {
                return Err(invalid(
                    "beta",
                    format!("layered profile needs |beta| < 1, got {beta}"),
                ));
            }
            if kind == ModelKind::RotatingInternalWaves && params.f() == 0.0 {
                return Err(invalid("f", "layered potential vorticity needs f > 0"));
            }
        }
        Ok(Self {
            kind,
            params,
            profile,
        })
    }

    /// Shallow-water kinds, or internal-wave kinds with unit g, N, ρ₀ and f = 1/2.
    pub fn standard(kind: ModelKind) -> Self {
        let params = if kind.is_internal() {
            PhysicalParams::new(0.5, 1.0, 1.0, 1.0).expect("valid constants")
        } else {
            PhysicalParams::unit()
        };
        Self {
            kind,
            params,
            profile: PvProfile::Rest,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn profile(&self) -> PvProfile {
        self.profile
    }

    /// Closed-form linear frequency of the mode (|k|, m).
    pub fn linear_frequency(&self, k: f64, m: f64) -> Result<f64> {
        match self.kind {
            ModelKind::LinearSW | ModelKind::NonlinearSW => Ok(k),
            ModelKind::RotatingLinearSW | ModelKind::RotatingNonlinearSW => {
                Ok((1.0 + k * k).sqrt())
            }
            ModelKind::InternalWaves => Ok(dispersion::frequency(k, m, &self.params.with_f(0.0)?)),
            ModelKind::RotatingInternalWaves => {
                if let PvProfile::Layered { .. } = self.profile {
                    return Err(Error::Domain(
                        "no closed-form frequency over a layered background".into(),
                    ));
                }
                Ok(dispersion::frequency(k, m, &self.params))
            }
        }
    }
}

/// Conjugate pair on the collocation grid: (η, φ) or (Π, φ).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub domain: Domain,
    pub mass: Vec<f64>,
    pub phi: Vec<f64>,
}

impl FieldState {
    pub fn zeros(domain: Domain) -> Self {
        let n = domain.points();
        Self {
            domain,
            mass: vec![0.0; n],
            phi: vec![0.0; n],
        }
    }

    /// self + a·other
    pub fn axpy(&self, a: f64, other: &FieldState) -> FieldState {
        let comb = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p + a * q).collect();
        FieldState {
            domain: self.domain,
            mass: comb(&self.mass, &other.mass),
            phi: comb(&self.phi, &other.phi),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.mass.iter().chain(&self.phi).all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.mass
            .iter()
            .chain(&self.phi)
            .fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    fn check(&self, domain: &Domain) -> Result<()> {
        if self.domain != *domain
            || self.mass.len() != domain.points()
            || self.phi.len() != domain.points()
        {
            return Err(Error::Mismatch(
                "field state does not match the lab domain".into(),
            ));
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64], dv: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .collect::<CompensatedSum>()
        .value()
        * dv
}

/// A model bound to a domain with its transforms.
pub struct Lab {
    model: Model,
    domain: Domain,
    spectral: Spectral,
    background: Vec<f64>,
    q0: Vec<f64>,
}

impl Lab {
    pub fn new(model: Model, domain: Domain) -> Result<Self> {
        if model.kind.is_internal() && domain.n()[2] < 2 {
            return Err(invalid(
                "grid",
                "internal-wave models need at least 2 points in rho",
            ));
        }
        let spectral = Spectral::new(&domain, !model.kind.is_linear());
        let nz = domain.n()[2];
        let pi0 = model.params.pi0();
        let layer: Vec<f64> = (0..nz)
            .map(|iz| match model.profile {
                PvProfile::Layered { beta } if model.kind.is_internal() => {
                    beta * pi0 * (2.0 * PI * iz as f64 / nz as f64).cos()
                }
                _ => 0.0,
            })
            .collect();
        let background: Vec<f64> = (0..domain.points()).map(|i| layer[i % nz]).collect();
        let q0 = if model.kind == ModelKind::RotatingInternalWaves {
            background
                .iter()
                .map(|b| model.params.f() / (pi0 + b))
                .collect()
        } else {
            vec![1.0; domain.points()]
        };
        Ok(Self {
            model,
            domain,
            spectral,
            background,
            q0,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Resting state (zero perturbation over the layered background).
    pub fn rest_state(&self) -> FieldState {
        FieldState {
            domain: self.domain,
            mass: self.background.clone(),
            phi: vec![0.0; self.domain.points()],
        }
    }

    /// Smooth random field inside the retained band, zero mean on every
    /// horizontal layer, scaled to max |value| = `amplitude`.
    pub fn smooth_random(&self, rng: &mut ChaCha8Rng, amplitude: f64) -> Vec<f64> {
        let noise: Vec<f64> = (0..self.domain.points())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let len = self.domain.len();
        let n = self.domain.n();
        // roughly four cells per e-folding of the cutoff mode
        let kc = [0, 1, 2].map(|a| 2.0 * PI * (n[a] as f64 / 8.0).max(1.0) / len[a]);
        let smooth = self.spectral.smooth(&noise, kc);
        let mut field = self.spectral.project(smooth);
        self.remove_layer_mean(&mut field);
        let peak = field.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if peak > 0.0 {
            field.iter_mut().for_each(|v| *v *= amplitude / peak);
        }
        field
    }

    /// Rest state plus smooth random perturbations of both fields.
    pub fn random_state(&self, seed: u64, amplitude: f64) -> FieldState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = self.mass_scale();
        let dm = self.smooth_random(&mut rng, amplitude * scale);
        let phi = self.smooth_random(&mut rng, amplitude * self.phi_scale());
        FieldState {
            domain: self.domain,
            mass: self
                .background
                .iter()
                .zip(&dm)
                .map(|(b, d)| b + d)
                .collect(),
            phi,
        }
    }

    /// Random direction for derivative checks, preserving layer means.
    pub fn random_direction(&self, seed: u64) -> FieldState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mass = self.smooth_random(&mut rng, self.mass_scale());
        let phi = self.smooth_random(&mut rng, self.phi_scale());
        FieldState {
            domain: self.domain,
            mass,
            phi,
        }
    }

    /// Standing wave A cos(k·x) cos(m ρ) in the mass field over the rest state.
    pub fn standing_wave(&self, j: [i64; 3], amplitude: f64) -> FieldState {
        let len = self.domain.len();
        let kv = [0, 1, 2].map(|a| 2.0 * PI * j[a] as f64 / len[a]);
        let a = amplitude * self.mass_scale();
        let mass = self
            .domain
            .coordinates()
            .zip(&self.background)
            .map(|([x, y, z], b)| b + a * (kv[0] * x + kv[1] * y).cos() * (kv[2] * z).cos())
            .collect();
        FieldState {
            domain: self.domain,
            mass,
            phi: vec![0.0; self.domain.points()],
        }
    }

    fn mass_scale(&self) -> f64 {
        if self.model.kind.is_internal() {
            self.model.params.pi0().abs()
        } else {
            1.0
        }
    }

    fn phi_scale(&self) -> f64 {
        if self.model.kind.is_internal() {
            let p = &self.model.params;
            p.g() / (p.rho0() * p.buoyancy())
        } else {
            1.0
        }
    }

    fn remove_layer_mean(&self, field: &mut [f64]) {
        let nz = self.domain.n()[2];
        let per_layer = (self.domain.points() / nz) as f64;
        let mut mean = vec![0.0; nz];
        for (i, v) in field.iter().enumerate() {
            mean[i % nz] += v;
        }
        mean.iter_mut().for_each(|m| *m /= per_layer);
        for (i, v) in field.iter_mut().enumerate() {
            *v -= mean[i % nz];
        }
    }

    /// Kinetic weight W, or None where it is identically 1.
    fn weight(&self, mass: &[f64]) -> Result<Option<Vec<f64>>> {
        match self.model.kind {
            ModelKind::LinearSW | ModelKind::RotatingLinearSW => Ok(None),
            ModelKind::NonlinearSW | ModelKind::RotatingNonlinearSW => {
                let h: Vec<f64> = mass.iter().map(|e| 1.0 + e).collect();
                if let Some(bad) = h.iter().position(|&v| !(v > 0.0)) {
                    return Err(Error::Domain(format!(
                        "layer depth 1 + eta = {} is not positive at point {bad}",
                        h[bad]
                    )));
                }
                Ok(Some(h))
            }
            ModelKind::InternalWaves | ModelKind::RotatingInternalWaves => {
                let pi0 = self.model.params.pi0();
                let p: Vec<f64> = mass.iter().map(|d| pi0 + d).collect();
                if let Some(bad) = p.iter().position(|&v| !(v < 0.0)) {
                    return Err(Error::Domain(format!(
                        "stratification sign violated: Pi0 + Pi = {} at point {bad}",
                        p[bad]
                    )));
                }
                Ok(Some(p))
            }
        }
    }

    /// σ in u = ∇φ + ∇⊥Δ⁻¹σ, checked for a vanishing horizontal mean.
    fn vortical_source(&self, mass: &[f64]) -> Result<Vec<f64>> {
        let sigma: Vec<f64> = if self.model.kind.is_internal() {
            let (pi0, f) = (self.model.params.pi0(), self.model.params.f());
            mass.iter()
                .zip(&self.q0)
                .map(|(d, q)| q * (pi0 + d) - f)
                .collect()
        } else {
            mass.to_vec()
        };
        let nz = self.domain.n()[2];
        let per_layer = (self.domain.points() / nz) as f64;
        let mut mean = vec![0.0; nz];
        let mut scale = vec![0.0_f64; nz];
        for (i, v) in sigma.iter().enumerate() {
            mean[i % nz] += v / per_layer;
            scale[i % nz] = scale[i % nz].max(v.abs());
        }
        let reference = if self.model.kind.is_internal() {
            self.model.params.f()
        } else {
            1.0
        };
        for iz in 0..nz {
            if mean[iz].abs() > 1e-10 * scale[iz].max(reference) {
                return Err(Error::Domain(format!(
                    "zero-mode ambiguity: inverse Laplacian applied to a field with layer mean {:e} at rho index {iz}",
                    mean[iz]
                )));
            }
        }
        Ok(sigma)
    }

    fn velocity(&self, state: &FieldState) -> Result<[Vec<f64>; 2]> {
        let [mut ux, mut uy] = self.spectral.grad(&state.phi);
        if self.model.kind.is_rotating() {
            let psi = self.spectral.inv_lap(&self.vortical_source(&state.mass)?);
            let [px, py] = self.spectral.perp_grad(&psi);
            ux.iter_mut().zip(px).for_each(|(a, b)| *a += b);
            uy.iter_mut().zip(py).for_each(|(a, b)| *a += b);
        }
        Ok([ux, uy])
    }

    fn potential(&self, mass: &[f64]) -> f64 {
        let dv = self.domain.cell_volume();
        if self.model.kind.is_internal() {
            let p = &self.model.params;
            let s = self.spectral.antiderivative_rho(mass);
            -0.5 * p.g() / (p.rho0() * p.rho0()) * dot(&s, &s, dv)
        } else {
            0.5 * dot(mass, mass, dv)
        }
    }

    fn potential_gradient(&self, mass: &[f64]) -> Vec<f64> {
        if self.model.kind.is_internal() {
            let p = &self.model.params;
            let c = -p.g() / (p.rho0() * p.rho0());
            self.spectral
                .antiderivative_gram(mass)
                .into_iter()
                .map(|v| c * v)
                .collect()
        } else {
            mass.to_vec()
        }
    }

    /// Discrete Hamiltonian.
    pub fn hamiltonian(&self, state: &FieldState) -> Result<f64> {
        state.check(&self.domain)?;
        let w = self.weight(&state.mass)?;
        let [ux, uy] = self.velocity(state)?;
        let kinetic: CompensatedSum = (0..ux.len())
            .map(|i| {
                let q = ux[i] * ux[i] + uy[i] * uy[i];
                0.5 * w.as_ref().map_or(1.0, |w| w[i]) * q
            })
            .collect();
        Ok(kinetic.value() * self.domain.cell_volume() + self.potential(&state.mass))
    }

    /// Canonical tendencies (mass_t, φ_t), projected on the retained band.
    pub fn rhs(&self, state: &FieldState) -> Result<FieldState> {
        state.check(&self.domain)?;
        let w = self.weight(&state.mass)?;
        let [ux, uy] = self.velocity(state)?;
        let (fx, fy) = match &w {
            Some(w) => (
                ux.iter().zip(w).map(|(u, w)| u * w).collect::<Vec<_>>(),
                uy.iter().zip(w).map(|(u, w)| u * w).collect::<Vec<_>>(),
            ),
            None => (ux.clone(), uy.clone()),
        };
        let mass_t: Vec<f64> = self
            .spectral
            .div(&fx, &fy)
            .into_iter()
            .map(|v| -v)
            .collect();
        let mut grad = self.potential_gradient(&state.mass);
        if w.is_some() {
            for i in 0..grad.len() {
                grad[i] += 0.5 * (ux[i] * ux[i] + uy[i] * uy[i]);
            }
        }
        if self.model.kind.is_rotating() {
            let back = self.spectral.inv_lap(&self.spectral.perp_div(&fx, &fy));
            for i in 0..grad.len() {
                grad[i] -= self.q0[i] * back[i];
            }
        }
        let phi_t: Vec<f64> = grad.into_iter().map(|v| -v).collect();
        Ok(FieldState {
            domain: self.domain,
            mass: self.spectral.project(mass_t),
            phi: self.spectral.project(phi_t),
        })
    }

    /// Smallest relative mismatch between the canonical directional
    /// derivative and central differences of H over the `steps`.
    pub fn functional_derivative_check(
        &self,
        state: &FieldState,
        direction: &FieldState,
        steps: &[f64],
    ) -> Result<f64> {
        direction.check(&self.domain)?;
        let r = self.rhs(state)?;
        let dv = self.domain.cell_volume();
        let exact = dot(&r.mass, &direction.phi, dv) - dot(&r.phi, &direction.mass, dv);
        let mut best = f64::INFINITY;
        for &eps in steps {
            let plus = self.hamiltonian(&state.axpy(eps, direction))?;
            let minus = self.hamiltonian(&state.axpy(-eps, direction))?;
            let fd = (plus - minus) / (2.0 * eps);
            let err = if exact == 0.0 {
                fd.abs()
            } else {
                ((fd - exact) / exact).abs()
            };
            best = best.min(err);
        }
        Ok(best)
    }

    /// L² norms of the linear and nonlinear parts of the tendency.
    pub fn tendency_split(&self, state: &FieldState) -> Result<(f64, f64)> {
        let linear_kind = match self.model.kind {
            ModelKind::NonlinearSW => ModelKind::LinearSW,
            ModelKind::RotatingNonlinearSW => ModelKind::RotatingLinearSW,
            other => {
                return Err(invalid(
                    "model",
                    format!("{other} has no linear counterpart in this lab"),
                ))
            }
        };
        let lin = Lab::new(Model::standard(linear_kind), self.domain)?;
        let full = self.rhs(state)?;
        let l = lin.rhs(state)?;
        let dv = self.domain.cell_volume();
        let diff = full.axpy(-1.0, &l);
        let norm = |s: &FieldState| (dot(&s.mass, &s.mass, dv) + dot(&s.phi, &s.phi, dv)).sqrt();
        Ok((norm(&l), norm(&diff)))
    }
}

pub fn hamiltonian(state: &FieldState, model: &Model) -> Result<f64> {
    Lab::new(*model, state.domain)?.hamiltonian(state)
}

pub fn rhs(state: &FieldState, model: &Model) -> Result<FieldState> {
    Lab::new(*model, state.domain)?.rhs(state)
}

pub fn functional_derivative_check(
    state: &FieldState,
    model: &Model,
    direction: &FieldState,
    steps: &[f64],
) -> Result<f64> {
    Lab::new(*model, state.domain)?.functional_derivative_check(state, direction, steps)
}

/// ε sequence 10⁻², 10⁻³, … 10⁻⁸.
pub fn default_steps() -> Vec<f64> {
    (2..=8).map(|e| 10f64.powi(-e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw_domain() -> Domain {
        Domain::horizontal(32, 32, 2.0 * PI, 2.0 * PI).unwrap()
    }

    fn iw_domain() -> Domain {
        Domain::cube(16).unwrap()
    }

    fn lab(kind: ModelKind) -> Lab {
        let d = if kind.is_internal() {
            iw_domain()
        } else {
            sw_domain()
        };
        Lab::new(Model::standard(kind), d).unwrap()
    }

    #[test]
    fn rest_state_has_zero_energy() {
        for kind in ModelKind::ALL {
            let l = lab(kind);
            assert_eq!(l.hamiltonian(&l.rest_state()).unwrap(), 0.0, "{kind}");
        }
    }

    #[test]
    fn single_mode_linear_energy_is_quarter_area() {
        let l = lab(ModelKind::LinearSW);
        let mut s = FieldState::zeros(*l.domain());
        s.mass = l.domain().coordinates().map(|[x, _, _]| x.cos()).collect();
        let h = l.hamiltonian(&s).unwrap();
        let area = 4.0 * PI * PI;
        assert!((h - 0.25 * area).abs() < 1e-12 * area);
    }

    #[test]
    fn model_kind_names_round_trip() {
        for kind in ModelKind::ALL {
            assert_eq!(kind.name().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("shallow".parse::<ModelKind>().is_err());
    }

    #[test]
    fn depth_must_stay_positive() {
        let l = lab(ModelKind::NonlinearSW);
        let mut s = l.rest_state();
        s.mass[3] = -1.5;
        assert!(matches!(l.rhs(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn stratification_sign_is_enforced() {
        let l = lab(ModelKind::InternalWaves);
        let mut s = l.rest_state();
        s.mass[0] = 2.0;
        let err = l.hamiltonian(&s).unwrap_err();
        assert!(err.to_string().contains("stratification"));
    }

    #[test]
    fn nonzero_mean_under_inverse_laplacian_is_flagged() {
        let l = lab(ModelKind::RotatingLinearSW);
        let mut s = l.rest_state();
        s.mass.iter_mut().for_each(|v| *v = 0.1);
        let err = l.rhs(&s).unwrap_err();
        assert!(err.to_string().contains("zero-mode"));
    }

    #[test]
    fn layered_background_satisfies_rest_relation() {
        let m = Model::new(
            ModelKind::RotatingInternalWaves,
            PhysicalParams::new(0.5, 1.0, 1.0, 1.0).unwrap(),
            PvProfile::Layered { beta: 0.3 },
        )
        .unwrap();
        let l = Lab::new(m, iw_domain()).unwrap();
        let rest = l.rest_state();
        let pi0 = m.params().pi0();
        for (i, b) in rest.mass.iter().enumerate() {
            assert!((l.q0[i] * (pi0 + b) - 0.5).abs() < 1e-15);
        }
        let r = l.rhs(&rest).unwrap();
        assert!(r.mass.iter().all(|v| v.abs() < 1e-14));
        assert!(Model::new(
            ModelKind::RotatingInternalWaves,
            PhysicalParams::unit(),
            PvProfile::Layered { beta: 0.3 }
        )
        .is_err());
    }

    #[test]
    fn linear_sw_derivative_check_at_roundoff() {
        let l = lab(ModelKind::LinearSW);
        let s = l.random_state(1, 0.1);
        let d = l.random_direction(2);
        let err = l
            .functional_derivative_check(&s, &d, &default_steps())
            .unwrap();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn nonlinear_tendency_scales_with_amplitude() {
        let l = lab(ModelKind::NonlinearSW);
        let ratio = |a: f64| {
            let (lin, non) = l.tendency_split(&l.random_state(5, a)).unwrap();
            non / lin
        };
        let (r1, r2) = (ratio(1e-3), ratio(2e-3));
        assert!((r2 / r1 - 2.0).abs() < 0.05, "{r1} {r2}");
    }
}
