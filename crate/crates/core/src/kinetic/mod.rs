//! Angle-averaged three-wave kinetic equation: collision integral,
//! stationarity diagnostics and time evolution.

mod evolve;
mod quadrature;
mod stationarity;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::frequency;
use crate::error::{invalid, Error, Result};
use crate::grid::Cutoffs;
use crate::manifold::{Branch, ResonantPoint};
use crate::numerics::CompensatedSum;
use crate::params::{PhysicalParams, Wavevector};
use crate::spectrum::Spectrum;
use crate::triads::Coupling;

pub use crate::manifold::occupation_factor;
pub use evolve::{evolve, spectrum_energy, ClipEvent, EvolveSettings, Trajectory};
pub use stationarity::{
    cutoff_extensions, locality_check, nested_extensions, residual_report, stationarity_scan,
    LocalityRow, LocalityTable, NodeResidual, ScanResult, StationarityReport,
};

/// Quadrature and kernel settings for the collision integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSettings {
    /// Each level halves the outer panel width and doubles the angular panels.
    pub refinement: u32,
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
    /// Angle substitution at the triangle edge (true) or explicit 1/Delta (false).
    pub boundary_mapping: bool,
    /// Overall constant multiplying the collision integral.
    pub kernel_norm: f64,
    /// Include triads whose vertical wavenumbers differ in sign.
    pub mixed_sign: bool,
    /// Evaluate the spectrum beyond its own grid (false: zero there).
    pub extrapolate: bool,
    /// Multiply the K part of V by 1/4.
    pub k_prefactor_quarter: bool,
    /// Use omega = c k/|m| inside V.
    pub high_frequency: bool,
    /// Integration box; defaults to the spectrum's grid.
    pub cutoffs: Option<Cutoffs>,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            refinement: 1,
            order: 8,
            boundary_mapping: true,
            kernel_norm: 1.0,
            mixed_sign: true,
            extrapolate: true,
            k_prefactor_quarter: false,
            high_frequency: false,
            cutoffs: None,
        }
    }
}

impl QuadSettings {
    pub fn validate(&self) -> Result<()> {
        if self.refinement > 12 {
            return Err(invalid("refinement", "must be at most 12"));
        }
        if !(1..=64).contains(&self.order) {
            return Err(invalid("order", "must be in 1..=64"));
        }
        if !(self.kernel_norm.is_finite() && self.kernel_norm > 0.0) {
            return Err(invalid("kernel_norm", "must be finite and > 0"));
        }
        if let Some(c) = self.cutoffs {
            Cutoffs::new(c.k_min, c.k_max, c.m_min, c.m_max)?;
        }
        Ok(())
    }

    pub fn with_cutoffs(mut self, cutoffs: Cutoffs) -> Self {
        self.cutoffs = Some(cutoffs);
        self
    }

    pub fn with_refinement(mut self, refinement: u32) -> Self {
        self.refinement = refinement;
        self
    }

    pub fn coupling(&self, params: &PhysicalParams) -> Coupling {
        Coupling::new(*params)
            .with_k_prefactor_quarter(self.k_prefactor_quarter)
            .with_high_frequency(self.high_frequency)
    }

    fn resolve_box(&self, spectrum: &(impl Spectrum + ?Sized)) -> Result<Cutoffs> {
        self.cutoffs.or_else(|| spectrum.support()).ok_or_else(|| {
            invalid(
                "cutoffs",
                "an integration box is required for analytic spectra",
            )
        })
    }
}

/// One quadrature point of the collision integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint {
    pub point: ResonantPoint,
    /// Measure, frequency jacobian and kernel_norm.
    pub weight: f64,
    pub v_squared: f64,
    /// (n, n1, n2).
    pub n: [f64; 3],
}

impl QuadraturePoint {
    /// Signed contribution to dn/dt.
    pub fn integrand(&self) -> f64 {
        let [n, n1, n2] = self.n;
        self.point.branch.sign()
            * self.weight
            * self.v_squared
            * self.point.branch.occupation(n, n1, n2)
    }

    /// Same term with the occupation factor replaced by |gain| + |loss|.
    pub fn magnitude(&self) -> f64 {
        let [n, n1, n2] = self.n;
        self.weight * self.v_squared * self.point.branch.occupation_magnitude(n, n1, n2)
    }
}

/// Evaluates n honouring `extrapolate`.
fn occupation_at<S: Spectrum + ?Sized>(s: &S, extrapolate: bool, k: f64, m: f64) -> f64 {
    if !extrapolate {
        if let Some(sup) = s.support() {
            if !sup.contains(k, m) {
                return 0.0;
            }
        }
    }
    s.n(k, m)
}

/// Calls `visit` for every quadrature point at host `node`; returns the point count.
pub fn for_each_point<S, F>(
    spectrum: &S,
    node: Wavevector,
    params: &PhysicalParams,
    quad: &QuadSettings,
    mut visit: F,
) -> Result<usize>
where
    S: Spectrum + ?Sized,
    F: FnMut(&QuadraturePoint),
{
    quad.validate()?;
    let box_ = quad.resolve_box(spectrum)?;
    if !(node.k > 0.0 && node.m != 0.0) {
        return Err(Error::Domain(format!(
            "host node needs k > 0, m != 0, got {node:?}"
        )));
    }
    let (k, m) = (node.k, node.m.abs());
    let coupling = quad.coupling(params);
    let n0 = occupation_at(spectrum, quad.extrapolate, k, m);
    let w0 = frequency(k, m, params);
    let mut count = 0usize;
    let mut inner = |pt: &ResonantPoint, weight: f64| {
        let w1 = frequency(pt.k1, pt.m1, params);
        let w2 = frequency(pt.k2, pt.m2, params);
        let ks = pt.branch.triad_order([k, pt.k1, pt.k2]);
        let ws = if quad.high_frequency {
            pt.branch.triad_order([
                coupling.omega(k, m),
                coupling.omega(pt.k1, pt.m1),
                coupling.omega(pt.k2, pt.m2),
            ])
        } else {
            pt.branch.triad_order([w0, w1, w2])
        };
        let qp = QuadraturePoint {
            point: *pt,
            weight: weight * quad.kernel_norm,
            v_squared: coupling.v_squared_raw(ks, ws),
            n: [
                n0,
                occupation_at(spectrum, quad.extrapolate, pt.k1, pt.m1),
                occupation_at(spectrum, quad.extrapolate, pt.k2, pt.m2),
            ],
        };
        count += 1;
        visit(&qp);
    };
    if quad.boundary_mapping {
        quadrature::mapped(k, m, params, &box_, quad, &mut inner);
    } else {
        quadrature::unmapped(k, m, params, &box_, quad, &mut inner);
    }
    Ok(count)
}

/// dn/dt at one node with its per-branch decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionResult {
    pub rate: f64,
    /// Signed contributions of R^k_12, -R^1_k2, -R^2_1k.
    pub branch_contributions: [f64; 3],
    /// Same sums with |gain| + |loss| in place of the occupation factor.
    pub normalizer: f64,
    pub branch_normalizers: [f64; 3],
    pub node: Wavevector,
    pub points: usize,
    pub refinement: u32,
}

impl CollisionResult {
    /// rate / normalizer (0 when the normalizer vanishes).
    pub fn relative(&self) -> f64 {
        if self.normalizer > 0.0 {
            self.rate / self.normalizer
        } else {
            0.0
        }
    }
}

pub fn collision_rate<S: Spectrum + ?Sized>(
    spectrum: &S,
    node: Wavevector,
    params: &PhysicalParams,
    quad: &QuadSettings,
) -> Result<CollisionResult> {
    let mut sums = [CompensatedSum::new(); 3];
    let mut mags = [CompensatedSum::new(); 3];
    let mut bad = None;
    let points = for_each_point(spectrum, node, params, quad, |qp| {
        let b = qp.point.branch.index();
        let v = qp.integrand();
        if !v.is_finite() && bad.is_none() {
            bad = Some(*qp);
        }
        sums[b].add(v);
        mags[b].add(qp.magnitude());
    })?;
    if let Some(qp) = bad {
        return Err(Error::NonFinite(format!(
            "collision integrand at {:?} (weight {}, |V|^2 {}, n {:?})",
            qp.point, qp.weight, qp.v_squared, qp.n
        )));
    }
    let branch_contributions = sums.map(|s| s.value());
    let branch_normalizers = mags.map(|s| s.value());
    let rate = branch_contributions
        .iter()
        .copied()
        .collect::<CompensatedSum>()
        .value();
    let normalizer = branch_normalizers
        .iter()
        .copied()
        .collect::<CompensatedSum>()
        .value();
    Ok(CollisionResult {
        rate,
        branch_contributions,
        normalizer,
        branch_normalizers,
        node,
        points,
        refinement: quad.refinement,
    })
}

/// [`collision_rate`] at many nodes in parallel; output order follows `nodes`.
pub fn collision_rates<S: Spectrum + ?Sized>(
    spectrum: &S,
    nodes: &[Wavevector],
    params: &PhysicalParams,
    quad: &QuadSettings,
) -> Result<Vec<CollisionResult>> {
    nodes
        .par_iter()
        .map(|&p| collision_rate(spectrum, p, params, quad))
        .collect()
}

/// Zakharov-transformed bracket
/// 1 - (k1/k)^(-6-2x) |m/m1|^(2+2y) - (k2/k)^(-6-2x) |m/m2|^(2+2y).
pub fn zakharov_factor(k: f64, m: f64, point: &ResonantPoint, x: f64, y: f64) -> Result<f64> {
    if k == 0.0 || point.m1 == 0.0 || point.m2 == 0.0 {
        return Err(Error::Domain(
            "zakharov factor needs nonzero k, m1, m2".into(),
        ));
    }
    if point.k1 == 0.0 || point.k2 == 0.0 {
        return Err(Error::Domain(
            "boundary-excluded point: a partner has zero horizontal wavenumber".into(),
        ));
    }
    let a = -6.0 - 2.0 * x;
    let b = 2.0 + 2.0 * y;
    let t1 = (point.k1 / k).powf(a) * (m / point.m1).abs().powf(b);
    let t2 = (point.k2 / k).powf(a) * (m / point.m2).abs().powf(b);
    Ok(1.0 - t1 - t2)
}

/// Total resonant measure at a host for one branch (unit V and occupations).
pub fn manifold_measure(
    node: Wavevector,
    params: &PhysicalParams,
    quad: &QuadSettings,
    branch: Branch,
) -> Result<f64> {
    let box_ = quad
        .cutoffs
        .ok_or_else(|| invalid("cutoffs", "manifold_measure needs an explicit box"))?;
    let mut acc = CompensatedSum::new();
    let visit = |pt: &ResonantPoint, w: f64| {
        if pt.branch == branch {
            acc.add(w);
        }
    };
    let m = node.m.abs();
    if quad.boundary_mapping {
        quadrature::mapped(node.k, m, params, &box_, quad, visit);
    } else {
        quadrature::unmapped(node.k, m, params, &box_, quad, visit);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupation_examples() {
        assert_eq!(occupation_factor(1.0, 1.0, 1.0), -1.0);
        assert_eq!(occupation_factor(0.0, 2.0, 3.0), 6.0);
        let (w1, w2) = (0.75f64, 1.5f64);
        let w = w1 + w2;
        let f = occupation_factor(1.0 / w, 1.0 / w1, 1.0 / w2);
        assert!(f.abs() < 1e-15);
    }

    #[test]
    fn panels_cover_interval() {
        let p = quadrature::panels(0.0, 1.0, &[0.25, 0.9, 2.0], 0.3);
        assert_eq!(p.first().unwrap().0, 0.0);
        assert_eq!(p.last().unwrap().1, 1.0);
        for w in p.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert!(p.iter().all(|(a, b)| b - a <= 0.3 + 1e-15));
        assert!(p.iter().any(|(a, _)| *a == 0.25));
    }
}
