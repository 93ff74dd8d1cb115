//! Wave-action spectra n(k, m), even in m.

use serde::{Deserialize, Serialize};

use crate::dispersion::frequency;
use crate::error::{invalid, Error, Result};
use crate::grid::{Cutoffs, SpectralGrid};
use crate::params::PhysicalParams;

/// A wave-action density that can be evaluated anywhere in the (k, m) plane.
pub trait Spectrum: Sync {
    /// n(k, m); implementations are even in m.
    fn n(&self, k: f64, m: f64) -> f64;

    /// Box on which the spectrum is data rather than extrapolation.
    fn support(&self) -> Option<Cutoffs> {
        None
    }
}

/// n = amplitude k^x |m|^y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSpectrum {
    amplitude: f64,
    x: f64,
    y: f64,
}

impl PowerLawSpectrum {
    pub fn new(amplitude: f64, x: f64, y: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(invalid(
                "amplitude",
                format!("must be > 0, got {amplitude}"),
            ));
        }
        if !x.is_finite() {
            return Err(invalid("x", "exponent must be finite"));
        }
        if !y.is_finite() {
            return Err(invalid("y", "exponent must be finite"));
        }
        Ok(Self { amplitude, x, y })
    }

    /// The Kolmogorov-Zakharov exponents (-7/2, -1/2) with unit amplitude.
    pub fn kolmogorov() -> Self {
        Self {
            amplitude: 1.0,
            x: -3.5,
            y: -0.5,
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

impl Spectrum for PowerLawSpectrum {
    fn n(&self, k: f64, m: f64) -> f64 {
        self.amplitude * k.powf(self.x) * m.abs().powf(self.y)
    }
}

/// Thermodynamic equilibrium n = temperature / omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equipartition {
    params: PhysicalParams,
    temperature: f64,
}

impl Equipartition {
    pub fn new(params: PhysicalParams, temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(invalid("temperature", "must be > 0"));
        }
        Ok(Self {
            params,
            temperature,
        })
    }
}

impl Spectrum for Equipartition {
    fn n(&self, k: f64, m: f64) -> f64 {
        self.temperature / frequency(k, m, &self.params)
    }
}

/// Behaviour of a gridded spectrum outside its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    /// Continue the boundary cell's log-log slope.
    #[default]
    PowerLaw,
    Zero,
}

/// Nonnegative n(k, m) on the nodes of a [`SpectralGrid`], row-major with k outer.
///
/// Off-node values interpolate ln n bilinearly in (ln k, ln m), which is exact
/// for power laws. A cell with a zero corner that carries weight evaluates to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveactionSpectrum {
    grid: SpectralGrid,
    values: Vec<f64>,
    log_values: Vec<f64>,
    extrapolation: Extrapolation,
    ln_k0: f64,
    ln_m0: f64,
    dln_k: f64,
    dln_m: f64,
}

const SNAP: f64 = 1e-12;

impl WaveactionSpectrum {
    pub fn new(grid: SpectralGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Mismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nk(),
                grid.nm()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid(
                "values",
                format!("must be finite and >= 0, found {v}"),
            ));
        }
        let log_values = values
            .iter()
            .map(|&v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
            .collect();
        let ln_k0 = grid.k_axis()[0].ln();
        let ln_m0 = grid.m_axis()[0].ln();
        let dln_k = grid.k_ratio().ln();
        let dln_m = grid.m_ratio().ln();
        Ok(Self {
            grid,
            values,
            log_values,
            extrapolation: Extrapolation::default(),
            ln_k0,
            ln_m0,
            dln_k,
            dln_m,
        })
    }

    pub fn from_fn(grid: SpectralGrid, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|p| f(p.k, p.m)).collect();
        Self::new(grid, values)
    }

    pub fn with_extrapolation(mut self, extrapolation: Extrapolation) -> Self {
        self.extrapolation = extrapolation;
        self
    }

    pub fn extrapolation(&self) -> Extrapolation {
        self.extrapolation
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Same grid and extrapolation, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(self.grid.clone(), values)?.with_extrapolation(self.extrapolation))
    }

    fn locate(x: f64, x0: f64, dx: f64, n: usize) -> (usize, f64) {
        let t = (x.ln() - x0) / dx;
        let cell = (t.floor().max(0.0) as usize).min(n - 2);
        let mut s = t - cell as f64;
        if s.abs() < SNAP {
            s = 0.0;
        } else if (s - 1.0).abs() < SNAP {
            s = 1.0;
        }
        (cell, s)
    }

    /// Interpolated (and possibly extrapolated) value at (k, |m|).
    pub fn interpolate(&self, k: f64, m: f64) -> f64 {
        let m = m.abs();
        if self.extrapolation == Extrapolation::Zero && !self.grid.cutoffs().contains(k, m) {
            return 0.0;
        }
        let nm = self.grid.nm();
        let (i, s) = Self::locate(k, self.ln_k0, self.dln_k, self.grid.nk());
        let (j, t) = Self::locate(m, self.ln_m0, self.dln_m, nm);
        let corners = [
            ((1.0 - s) * (1.0 - t), i * nm + j),
            (s * (1.0 - t), (i + 1) * nm + j),
            ((1.0 - s) * t, i * nm + j + 1),
            (s * t, (i + 1) * nm + j + 1),
        ];
        let mut acc = 0.0;
        for (w, idx) in corners {
            if w == 0.0 {
                continue;
            }
            if w == 1.0 {
                return self.values[idx];
            }
            let lv = self.log_values[idx];
            if lv == f64::NEG_INFINITY {
                return 0.0;
            }
            acc += w * lv;
        }
        acc.exp()
    }
}

impl Spectrum for WaveactionSpectrum {
    fn n(&self, k: f64, m: f64) -> f64 {
        self.interpolate(k, m)
    }

    fn support(&self) -> Option<Cutoffs> {
        Some(self.grid.cutoffs())
    }
}

/// Samples `law` at every node of `grid`.
pub fn sample_power_law(grid: &SpectralGrid, law: &PowerLawSpectrum) -> WaveactionSpectrum {
    WaveactionSpectrum::from_fn(grid.clone(), |k, m| law.n(k, m))
        .expect("power law values are finite and positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_log_grid;

    fn grid() -> SpectralGrid {
        make_log_grid(1.0, 16.0, 5, 1.0, 9.0, 3).unwrap()
    }

    #[test]
    fn power_law_examples() {
        let g = grid();
        let uniform = sample_power_law(&g, &PowerLawSpectrum::new(1.0, 0.0, 0.0).unwrap());
        assert!(uniform.values().iter().all(|&v| v == 1.0));
        let kz = PowerLawSpectrum::kolmogorov();
        assert_eq!(kz.n(4.0, 1.0), 0.0078125);
        let law = PowerLawSpectrum::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(law.n(3.0, 5.0), 30.0);
        assert_eq!(law.n(3.0, -5.0), 30.0);
    }

    #[test]
    fn interpolation_exact_for_power_law() {
        let g = grid();
        let law = PowerLawSpectrum::new(0.7, -3.5, -0.5).unwrap();
        let s = sample_power_law(&g, &law);
        for &(k, m) in &[
            (1.3, 2.2),
            (15.9, 8.5),
            (0.3, 0.5),
            (40.0, 30.0),
            (2.0, -3.0),
        ] {
            let want = law.n(k, m);
            assert!((s.n(k, m) - want).abs() < 1e-13 * want, "{k} {m}");
        }
    }

    #[test]
    fn zero_extrapolation_outside() {
        let s = sample_power_law(&grid(), &PowerLawSpectrum::kolmogorov())
            .with_extrapolation(Extrapolation::Zero);
        assert_eq!(s.n(0.5, 2.0), 0.0);
        assert!(s.n(2.0, 2.0) > 0.0);
    }

    #[test]
    fn single_mode_is_isolated() {
        let g = grid();
        let mut v = vec![0.0; g.len()];
        v[g.index(2, 1)] = 3.0;
        let s = WaveactionSpectrum::new(g.clone(), v).unwrap();
        let p = g.node(2, 1);
        assert_eq!(s.n(p.k, p.m), 3.0);
        assert_eq!(s.n(p.k * 1.01, p.m), 0.0);
    }

    #[test]
    fn rejects_negative_values() {
        let g = grid();
        let mut v = vec![1.0; g.len()];
        v[0] = -1.0;
        assert!(WaveactionSpectrum::new(g, v).is_err());
    }
}
