//! Logarithmic (k, m) lattices and integration boxes.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Integration box on magnitudes: k in [k_min, k_max], |m| in [m_min, m_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub k_min: f64,
    pub k_max: f64,
    pub m_min: f64,
    pub m_max: f64,
}

impl Cutoffs {
    pub fn new(k_min: f64, k_max: f64, m_min: f64, m_max: f64) -> Result<Self> {
        check_range("k", k_min, k_max)?;
        check_range("m", m_min, m_max)?;
        Ok(Self {
            k_min,
            k_max,
            m_min,
            m_max,
        })
    }

    /// Box of half-width `decades` (in log10) around (k, m) on both axes.
    pub fn around(k: f64, m: f64, decades: f64) -> Result<Self> {
        let r = 10f64.powf(decades);
        Self::new(k / r, k * r, m.abs() / r, m.abs() * r)
    }

    /// Lower cutoffs divided and upper cutoffs multiplied by the given factors.
    pub fn extended(&self, ir: f64, uv: f64) -> Self {
        Self {
            k_min: self.k_min / ir,
            k_max: self.k_max * uv,
            m_min: self.m_min / ir,
            m_max: self.m_max * uv,
        }
    }

    pub fn contains(&self, k: f64, m: f64) -> bool {
        let am = m.abs();
        k >= self.k_min && k <= self.k_max && am >= self.m_min && am <= self.m_max
    }
}

fn check_range(axis: &'static str, lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(invalid(
            axis,
            format!("need 0 < {axis}_min < {axis}_max, got [{lo}, {hi}]"),
        ));
    }
    Ok(())
}

/// Node of a [`SpectralGrid`] with its indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub i: usize,
    pub j: usize,
    pub k: f64,
    pub m: f64,
}

/// Log-spaced axisymmetric lattice; `m_axis` holds positive m only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    k_axis: Vec<f64>,
    m_axis: Vec<f64>,
}

const LOG_SPACING_TOL: f64 = 1e-9;

impl SpectralGrid {
    /// Validates user-supplied axes (positive, increasing, log-spaced).
    pub fn from_axes(k_axis: Vec<f64>, m_axis: Vec<f64>) -> Result<Self> {
        check_axis("k", &k_axis)?;
        check_axis("m", &m_axis)?;
        Ok(Self { k_axis, m_axis })
    }

    pub fn k_axis(&self) -> &[f64] {
        &self.k_axis
    }

    pub fn m_axis(&self) -> &[f64] {
        &self.m_axis
    }

    pub fn nk(&self) -> usize {
        self.k_axis.len()
    }

    pub fn nm(&self) -> usize {
        self.m_axis.len()
    }

    pub fn len(&self) -> usize {
        self.nk() * self.nm()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cutoffs(&self) -> Cutoffs {
        Cutoffs {
            k_min: self.k_axis[0],
            k_max: self.k_axis[self.nk() - 1],
            m_min: self.m_axis[0],
            m_max: self.m_axis[self.nm() - 1],
        }
    }

    /// Ratio between consecutive k nodes.
    pub fn k_ratio(&self) -> f64 {
        self.k_axis[1] / self.k_axis[0]
    }

    pub fn m_ratio(&self) -> f64 {
        self.m_axis[1] / self.m_axis[0]
    }

    pub fn node(&self, i: usize, j: usize) -> GridNode {
        GridNode {
            i,
            j,
            k: self.k_axis[i],
            m: self.m_axis[j],
        }
    }

    /// Nodes in row-major order (k index outer).
    pub fn nodes(&self) -> impl Iterator<Item = GridNode> + '_ {
        (0..self.nk()).flat_map(move |i| (0..self.nm()).map(move |j| self.node(i, j)))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nm() + j
    }

    /// Trapezoid cell widths along k.
    pub fn k_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.k_axis)
    }

    pub fn m_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.m_axis)
    }

    /// Node index nearest to the geometric centre of the grid.
    pub fn centre(&self) -> GridNode {
        self.node(self.nk() / 2, self.nm() / 2)
    }
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(invalid(name, "axis needs at least 2 nodes"));
    }
    if axis.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(name, "axis values must be finite and positive"));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(name, "axis must be strictly increasing"));
    }
    let r0 = (axis[1] / axis[0]).ln();
    if axis
        .windows(2)
        .any(|w| ((w[1] / w[0]).ln() - r0).abs() > LOG_SPACING_TOL * r0.abs().max(1.0))
    {
        return Err(invalid(name, "axis must have constant log spacing"));
    }
    Ok(())
}

fn log_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = hi / lo;
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => lo * ratio.powf(i as f64 / last),
        })
        .collect()
}

fn trapezoid_weights(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { axis[i] - axis[i - 1] } else { 0.0 };
            let right = if i + 1 < n {
                axis[i + 1] - axis[i]
            } else {
                0.0
            };
            0.5 * (left + right)
        })
        .collect()
}

/// Log grid with `nk` by `nm` nodes, endpoints included.
pub fn make_log_grid(
    k_min: f64,
    k_max: f64,
    nk: usize,
    m_min: f64,
    m_max: f64,
    nm: usize,
) -> Result<SpectralGrid> {
    check_range("k", k_min, k_max)?;
    check_range("m", m_min, m_max)?;
    if nk < 2 {
        return Err(invalid("nk", format!("need at least 2 nodes, got {nk}")));
    }
    if nm < 2 {
        return Err(invalid("nm", format!("need at least 2 nodes, got {nm}")));
    }
    Ok(SpectralGrid {
        k_axis: log_axis(k_min, k_max, nk),
        m_axis: log_axis(m_min, m_max, nm),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_node_axes() {
        let g = make_log_grid(1.0, 100.0, 3, 1.0, 100.0, 3).unwrap();
        assert_eq!(g.k_axis(), &[1.0, 10.0, 100.0]);
        assert_eq!(g.m_axis(), &[1.0, 10.0, 100.0]);
    }

    #[test]
    fn degenerate_range_rejected() {
        assert!(make_log_grid(1.0, 1.0, 2, 1.0, 2.0, 2).is_err());
        assert!(make_log_grid(0.0, 1.0, 2, 1.0, 2.0, 2).is_err());
        assert!(make_log_grid(1.0, 2.0, 1, 1.0, 2.0, 2).is_err());
        assert!(make_log_grid(1.0, 2.0, 2, 3.0, 2.0, 2).is_err());
    }

    #[test]
    fn ratio_recomputed() {
        let g = make_log_grid(0.5, 512.0, 11, 1.0, 2.0, 2).unwrap();
        let r = (512.0f64 / 0.5).powf(0.1);
        for w in g.k_axis().windows(2) {
            assert!((w[1] / w[0] - r).abs() < 1e-14 * r);
        }
    }

    #[test]
    fn trapezoid_sums_to_length() {
        let g = make_log_grid(0.1, 10.0, 17, 1.0, 5.0, 4).unwrap();
        let s: f64 = g.k_weights().iter().sum();
        assert!((s - 9.9).abs() < 1e-12);
    }
}
