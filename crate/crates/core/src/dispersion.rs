//! Linear dispersion relation and the normal-variable transformation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{PhysicalParams, Wavevector};

/// omega(k, m) without argument checks; `m` must be nonzero.
#[inline]
pub fn frequency(k: f64, m: f64, params: &PhysicalParams) -> f64 {
    let c = params.wave_speed() * k / m;
    (params.f() * params.f() + c * c).sqrt()
}

/// The f -> 0 form c k/|m|.
#[inline]
pub fn frequency_high(k: f64, m: f64, params: &PhysicalParams) -> f64 {
    params.wave_speed() * k / m.abs()
}

/// d omega / d m at fixed k.
#[inline]
pub fn frequency_dm(k: f64, m: f64, omega: f64, params: &PhysicalParams) -> f64 {
    let c = params.wave_speed() * k;
    -c * c / (m * m * m * omega)
}

pub fn omega(p: Wavevector, params: &PhysicalParams) -> Result<f64> {
    if p.m == 0.0 {
        return Err(Error::Domain("omega diverges at m = 0".into()));
    }
    Ok(frequency(p.k, p.m, params))
}

/// Vertical wavenumber in z coordinates, m_* = -(rho0 N^2/g) m.
pub fn m_star(p: Wavevector, params: &PhysicalParams) -> f64 {
    let n = params.buoyancy();
    -(params.rho0() * n * n / params.g()) * p.m
}

/// Eulerian form sqrt(f^2 + N^2 k^2/m_*^2).
pub fn eulerian_omega(k: f64, m_star: f64, params: &PhysicalParams) -> f64 {
    params.f().hypot(params.buoyancy() * k / m_star)
}

/// Weight f_p of the normal-variable transformation and the frequency at p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModeCoeffs {
    pub f_p: f64,
    pub omega: f64,
    /// Coefficient of |phi_p|^2/2 in the quadratic Hamiltonian, g k^2/N^2.
    pub phi_weight: f64,
    /// Coefficient of |Pi_p|^2/2, N^2 f^2/(g k^2) + g/(rho0^2 m^2).
    pub pi_weight: f64,
}

impl NormalModeCoeffs {
    /// phi_p = i phi_coeff (a_p - a*_{-p}).
    pub fn phi_coeff(&self) -> f64 {
        1.0 / (2.0 * self.f_p).sqrt()
    }

    /// Pi_p = pi_coeff (a_p + a*_{-p}).
    pub fn pi_coeff(&self) -> f64 {
        (0.5 * self.f_p).sqrt()
    }

    /// Canonical pair (phi_p, Pi_p) from normal amplitudes a_p and a_{-p}.
    pub fn canonical(&self, a_p: Complex64, a_minus_p: Complex64) -> (Complex64, Complex64) {
        let phi = Complex64::i() * self.phi_coeff() * (a_p - a_minus_p.conj());
        let pi = self.pi_coeff() * (a_p + a_minus_p.conj());
        (phi, pi)
    }

    /// Quadratic Hamiltonian density (|phi|^2 phi_weight + |Pi|^2 pi_weight)/2.
    pub fn quadratic_energy(&self, phi: Complex64, pi: Complex64) -> f64 {
        0.5 * (self.phi_weight * phi.norm_sqr() + self.pi_weight * pi.norm_sqr())
    }
}

pub fn normal_coeffs(p: Wavevector, params: &PhysicalParams) -> Result<NormalModeCoeffs> {
    if p.k == 0.0 {
        return Err(Error::Domain(
            "normal-mode transformation diverges at k = 0".into(),
        ));
    }
    if p.m == 0.0 {
        return Err(Error::Domain(
            "normal-mode transformation diverges at m = 0".into(),
        ));
    }
    let (f, g, n, rho0) = (params.f(), params.g(), params.buoyancy(), params.rho0());
    let k2 = p.k * p.k;
    let phi_weight = g * k2 / (n * n);
    let pi_weight = n * n * f * f / (g * k2) + g / (rho0 * rho0 * p.m * p.m);
    Ok(NormalModeCoeffs {
        f_p: (phi_weight / pi_weight).sqrt(),
        omega: frequency(p.k, p.m, params),
        phi_weight,
        pi_weight,
    })
}
