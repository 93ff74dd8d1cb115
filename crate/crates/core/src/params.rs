use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Below this f/N the medium is treated as being in the high-frequency regime.
pub const HIGH_FREQUENCY_RATIO: f64 = 0.01;

/// Environmental constants of the medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    f: f64,
    g: f64,
    n: f64,
    rho0: f64,
}

impl PhysicalParams {
    /// `f` Coriolis parameter, `g` gravity, `n` buoyancy frequency, `rho0` reference density.
    pub fn new(f: f64, g: f64, n: f64, rho0: f64) -> Result<Self> {
        if !(f.is_finite() && f >= 0.0) {
            return Err(invalid("f", format!("must be finite and >= 0, got {f}")));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("g", format!("must be finite and > 0, got {g}")));
        }
        if !(n.is_finite() && n > 0.0) {
            return Err(invalid("N", format!("must be finite and > 0, got {n}")));
        }
        if !(rho0.is_finite() && rho0 > 0.0) {
            return Err(invalid(
                "rho0",
                format!("must be finite and > 0, got {rho0}"),
            ));
        }
        Ok(Self { f, g, n, rho0 })
    }

    /// f = 0, g = N = rho0 = 1.
    pub fn unit() -> Self {
        Self {
            f: 0.0,
            g: 1.0,
            n: 1.0,
            rho0: 1.0,
        }
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn buoyancy(&self) -> f64 {
        self.n
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn with_f(self, f: f64) -> Result<Self> {
        Self::new(f, self.g, self.n, self.rho0)
    }

    pub fn f_over_n(&self) -> f64 {
        self.f / self.n
    }

    pub fn is_high_frequency(&self) -> bool {
        self.f_over_n() <= HIGH_FREQUENCY_RATIO
    }

    /// g / (rho0 N): the coefficient c in omega = c k/|m| at f = 0.
    pub fn wave_speed(&self) -> f64 {
        self.g / (self.rho0 * self.n)
    }

    /// Background stratification Pi_0 = -g/N^2.
    pub fn pi0(&self) -> f64 {
        -self.g / (self.n * self.n)
    }
}

/// Horizontal wavenumber magnitude `k` and signed isopycnal vertical wavenumber `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavevector {
    pub k: f64,
    pub m: f64,
}

impl Wavevector {
    pub fn new(k: f64, m: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(invalid("k", format!("must be finite and >= 0, got {k}")));
        }
        if !m.is_finite() {
            return Err(invalid("m", format!("must be finite, got {m}")));
        }
        Ok(Self { k, m })
    }
}
