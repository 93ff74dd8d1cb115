//! Garrett-Munk reference spectra and slope comparison.
//!
//! Here `m` is the Eulerian vertical wavenumber, so the frequency is
//! ω² = (N²k² + f²m²)/m².

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::SpectralGrid;
use crate::numerics::{gauss_nodes, CompensatedSum};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GMParams {
    energy: f64,
    m_star: f64,
    params: PhysicalParams,
}

impl GMParams {
    pub fn new(energy: f64, m_star: f64, params: PhysicalParams) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(invalid(
                "E",
                format!("must be finite and > 0, got {energy}"),
            ));
        }
        if !(m_star.is_finite() && m_star > 0.0) {
            return Err(invalid(
                "m_star",
                format!("must be finite and > 0, got {m_star}"),
            ));
        }
        if !(params.f() > 0.0) {
            return Err(invalid("f", "the Garrett-Munk spectrum needs f > 0"));
        }
        Ok(Self {
            energy,
            m_star,
            params,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Frequency of the Eulerian mode (k, m).
    pub fn omega(&self, k: f64, m: f64) -> f64 {
        let (f, n) = (self.params.f(), self.params.buoyancy());
        ((n * n * k * k + f * f * m * m) / (m * m)).sqrt()
    }
}

/// GM energy density in (k, m).
pub fn gm_energy_density(k: f64, m: f64, gm: &GMParams) -> Result<f64> {
    if !(k >= 0.0 && m >= 0.0) || !k.is_finite() || !m.is_finite() {
        return Err(Error::Domain(format!(
            "GM density needs k >= 0 and m >= 0, got ({k}, {m})"
        )));
    }
    let (f, n) = (gm.params.f(), gm.params.buoyancy());
    let denom = n * n * k * k + f * f * m * m;
    if denom == 0.0 {
        return Err(Error::Domain(format!(
            "GM density denominator vanishes at ({k}, {m})"
        )));
    }
    let r = m / gm.m_star;
    Ok(3.0 * f * n * gm.energy * r / (PI * (1.0 + r).powf(2.5) * denom))
}

/// Closed-form moored frequency spectrum.
pub fn gm_moored(omega: f64, gm: &GMParams) -> Result<f64> {
    let f = gm.params.f();
    if !(omega > f) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "moored spectrum needs omega > f = {f}, got {omega}"
        )));
    }
    let q = f / omega;
    Ok(2.0 * f * gm.energy / (PI * (1.0 - q * q).sqrt() * omega * omega))
}

/// E(k, ω) = E(k, m(k, ω)) |∂m/∂ω|.
pub fn gm_energy_k_omega(k: f64, omega: f64, gm: &GMParams) -> Result<f64> {
    let (f, n) = (gm.params.f(), gm.params.buoyancy());
    if !(omega > f) || !(k > 0.0) {
        return Err(Error::Domain(format!(
            "E(k, omega) needs k > 0 and omega > f, got ({k}, {omega})"
        )));
    }
    let s2 = omega * omega - f * f;
    let m = n * k / s2.sqrt();
    let dm = n * k * omega / (s2 * s2.sqrt());
    Ok(gm_energy_density(k, m, gm)? * dm)
}

/// E(m, ω) = E(k(m, ω), m) |∂k/∂ω|.
pub fn gm_energy_m_omega(m: f64, omega: f64, gm: &GMParams) -> Result<f64> {
    let (f, n) = (gm.params.f(), gm.params.buoyancy());
    if !(omega > f) || !(m > 0.0) {
        return Err(Error::Domain(format!(
            "E(m, omega) needs m > 0 and omega > f, got ({m}, {omega})"
        )));
    }
    let s = (omega * omega - f * f).sqrt();
    let k = m * s / n;
    let dk = m * omega / (n * s);
    Ok(gm_energy_density(k, m, gm)? * dk)
}

/// Moored spectrum by quadrature of E(m, ω) over m in (0, ∞).
///
/// Panels are uniform in ln m over `decades` decades either side of m*.
pub fn gm_moored_numeric(omega: f64, gm: &GMParams, decades: f64) -> Result<f64> {
    if !(decades > 0.0) {
        return Err(invalid("decades", format!("must be > 0, got {decades}")));
    }
    let lo = gm.m_star.ln() - decades * std::f64::consts::LN_10;
    let hi = gm.m_star.ln() + decades * std::f64::consts::LN_10;
    let panels = (8.0 * decades).ceil() as usize;
    let h = (hi - lo) / panels as f64;
    let mut sum = CompensatedSum::new();
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (u, w) in gauss_nodes(16, a, a + h) {
            let m = u.exp();
            sum.add(w * m * gm_energy_m_omega(m, omega, gm)?);
        }
    }
    Ok(sum.value())
}

/// Asymptotic GM form (k² m^{3/2})⁻¹.
pub fn gm_asymptotic(k: f64, m: f64) -> f64 {
    1.0 / (k * k * m.powf(1.5))
}

/// Energy density of the Kolmogorov wave-action spectrum.
pub fn wt_energy_density(k: f64, m: f64, amplitude: f64) -> Result<f64> {
    if !(k > 0.0 && m > 0.0) {
        return Err(Error::Domain(format!(
            "WT density needs k > 0 and m > 0, got ({k}, {m})"
        )));
    }
    Ok(amplitude * k.powf(-1.5) * m.powf(-1.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub x: f64,
    pub y: f64,
    pub intercept: f64,
    pub rms: f64,
    pub nodes: usize,
}

/// Plane fit of ln value against (ln k, ln m) over the nodes inside both windows.
///
/// `values` is row-major over the grid (k index outer).
pub fn slope_fit(
    grid: &SpectralGrid,
    values: &[f64],
    k_window: (f64, f64),
    m_window: (f64, f64),
) -> Result<SlopeFit> {
    if values.len() != grid.len() {
        return Err(Error::Mismatch(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let inside = |x: f64, (a, b): (f64, f64)| x >= a * (1.0 - 1e-12) && x <= b * (1.0 + 1e-12);
    let ks: Vec<usize> = (0..grid.nk())
        .filter(|&i| inside(grid.k_axis()[i], k_window))
        .collect();
    let ms: Vec<usize> = (0..grid.nm())
        .filter(|&j| inside(grid.m_axis()[j], m_window))
        .collect();
    if ks.len() < 4 || ms.len() < 4 {
        return Err(Error::Domain(format!(
            "fit window holds {} k nodes and {} m nodes, need at least 4 each",
            ks.len(),
            ms.len()
        )));
    }
    let mut rows = Vec::with_capacity(ks.len() * ms.len());
    for &i in &ks {
        for &j in &ms {
            let v = values[grid.index(i, j)];
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "non-positive value {v} at node ({i}, {j})"
                )));
            }
            rows.push((grid.k_axis()[i].ln(), grid.m_axis()[j].ln(), v.ln()));
        }
    }
    fit_plane(&rows)
}

/// Least-squares plane z = c + x u + y v.
pub fn fit_plane(rows: &[(f64, f64, f64)]) -> Result<SlopeFit> {
    let n = rows.len();
    // centring keeps the design matrix well conditioned
    let mean = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).sum::<f64>() / n as f64;
    let (mu, mv, mz) = (mean(|r| r.0), mean(|r| r.1), mean(|r| r.2));
    let a = DMatrix::from_fn(n, 2, |r, c| {
        if c == 0 {
            rows[r].0 - mu
        } else {
            rows[r].1 - mv
        }
    });
    let b = DVector::from_fn(n, |r, _| rows[r].2 - mz);
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Domain(format!("slope fit failed: {e}")))?;
    let resid = &a * &sol - &b;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    Ok(SlopeFit {
        x: sol[0],
        y: sol[1],
        intercept: mz - sol[0] * mu - sol[1] * mv,
        rms,
        nodes: n,
    })
}
