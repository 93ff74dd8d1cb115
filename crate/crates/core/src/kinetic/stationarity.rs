use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::grid::Cutoffs;
use crate::params::{PhysicalParams, Wavevector};
use crate::spectrum::PowerLawSpectrum;

use super::{collision_rate, CollisionResult, QuadSettings};

/// Rate and normalizer at one probe node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeResidual {
    pub node: Wavevector,
    pub rate: f64,
    pub normalizer: f64,
    pub branch_contributions: [f64; 3],
}

impl NodeResidual {
    fn from_result(r: &CollisionResult) -> Self {
        Self {
            node: r.node,
            rate: r.rate,
            normalizer: r.normalizer,
            branch_contributions: r.branch_contributions,
        }
    }

    pub fn relative(&self) -> f64 {
        if self.normalizer > 0.0 {
            self.rate / self.normalizer
        } else {
            0.0
        }
    }
}

/// Stationarity of a power law over a probe set.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    pub law: PowerLawSpectrum,
    /// Root mean square over probes of rate / normalizer at the finest refinement.
    pub residual_norm: f64,
    pub per_node: Vec<NodeResidual>,
    /// (refinement, residual norm) for every requested level.
    pub convergence: Vec<(u32, f64)>,
}

fn rms_relative(rows: &[NodeResidual]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let s: f64 = rows.iter().map(|r| r.relative().powi(2)).sum();
    (s / rows.len() as f64).sqrt()
}

/// Residual of `law` at `probes`, evaluated at each of `refinements` (last one reported).
pub fn residual_report(
    law: &PowerLawSpectrum,
    probes: &[Wavevector],
    params: &PhysicalParams,
    quad: &QuadSettings,
    refinements: &[u32],
) -> Result<StationarityReport> {
    if probes.is_empty() {
        return Err(invalid("probes", "need at least one probe node"));
    }
    let levels: Vec<u32> = if refinements.is_empty() {
        vec![quad.refinement]
    } else {
        refinements.to_vec()
    };
    let mut convergence = Vec::with_capacity(levels.len());
    let mut per_node = Vec::new();
    for &r in &levels {
        let q = quad.with_refinement(r);
        let rows = probes
            .par_iter()
            .map(|&p| collision_rate(law, p, params, &q).map(|c| NodeResidual::from_result(&c)))
            .collect::<Result<Vec<_>>>()?;
        convergence.push((r, rms_relative(&rows)));
        per_node = rows;
    }
    Ok(StationarityReport {
        law: *law,
        residual_norm: convergence.last().map(|c| c.1).unwrap_or(0.0),
        per_node,
        convergence,
    })
}

/// Residual surface over a rectangular exponent lattice (x outer).
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub reports: Vec<StationarityReport>,
}

impl ScanResult {
    pub fn residual(&self, ix: usize, iy: usize) -> f64 {
        self.reports[ix * self.ys.len() + iy].residual_norm
    }

    /// (x, y, residual) of the smallest residual.
    pub fn argmin(&self) -> (f64, f64, f64) {
        let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
        for (ix, &x) in self.xs.iter().enumerate() {
            for (iy, &y) in self.ys.iter().enumerate() {
                let r = self.residual(ix, iy);
                if r < best.2 {
                    best = (x, y, r);
                }
            }
        }
        best
    }
}

pub fn stationarity_scan(
    xs: &[f64],
    ys: &[f64],
    probes: &[Wavevector],
    params: &PhysicalParams,
    quad: &QuadSettings,
) -> Result<ScanResult> {
    if quad.cutoffs.is_none() {
        return Err(invalid(
            "cutoffs",
            "a stationarity scan needs an integration box",
        ));
    }
    let jobs: Vec<(usize, usize, usize)> = (0..xs.len())
        .flat_map(|ix| {
            (0..ys.len()).flat_map(move |iy| (0..probes.len()).map(move |p| (ix, iy, p)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(ix, iy, p)| {
            let law = PowerLawSpectrum::new(1.0, xs[ix], ys[iy])?;
            collision_rate(&law, probes[p], params, quad).map(|c| NodeResidual::from_result(&c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::with_capacity(xs.len() * ys.len());
    for (cell, rows) in results.chunks(probes.len()).enumerate() {
        let law = PowerLawSpectrum::new(1.0, xs[cell / ys.len()], ys[cell % ys.len()])?;
        let r = rms_relative(rows);
        reports.push(StationarityReport {
            law,
            residual_norm: r,
            per_node: rows.to_vec(),
            convergence: vec![(quad.refinement, r)],
        });
    }
    Ok(ScanResult {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        reports,
    })
}

/// One integration box of a locality study.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityRow {
    pub label: String,
    pub cutoffs: Cutoffs,
    pub rate: f64,
    pub branch_contributions: [f64; 3],
    pub normalizer: f64,
}

/// Rates under a sequence of boxes; the first row is the base box.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityTable {
    pub rows: Vec<LocalityRow>,
    pub tolerance: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (b - a).abs() / a.abs()
}

impl LocalityTable {
    /// |r_i - r_0| / |r_0| for every row after the base.
    pub fn relative_changes(&self) -> Vec<f64> {
        let base = self.rows[0].rate;
        self.rows[1..].iter().map(|r| rel(base, r.rate)).collect()
    }

    /// |r_i - r_{i-1}| / |r_{i-1}| for consecutive rows.
    pub fn successive_changes(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| rel(w[0].rate, w[1].rate))
            .collect()
    }

    /// Largest per-branch relative change against the base, per row.
    pub fn branch_changes(&self) -> Vec<f64> {
        let base = self.rows[0].branch_contributions;
        self.rows[1..]
            .iter()
            .map(|r| {
                (0..3)
                    .map(|b| rel(base[b], r.branch_contributions[b]))
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Every extension moves the rate by less than the tolerance.
    pub fn converged(&self) -> bool {
        self.rows.len() > 1 && self.relative_changes().iter().all(|c| *c < self.tolerance)
    }
}

/// Base box, each cutoff pushed out alone by `factor`, then all four together.
pub fn cutoff_extensions(base: &Cutoffs, factor: f64) -> Vec<(String, Cutoffs)> {
    let mut out = vec![("base".to_string(), *base)];
    let mut b = *base;
    b.k_min /= factor;
    out.push((format!("k_min/{factor}"), b));
    let mut b = *base;
    b.k_max *= factor;
    out.push((format!("k_max*{factor}"), b));
    let mut b = *base;
    b.m_min /= factor;
    out.push((format!("m_min/{factor}"), b));
    let mut b = *base;
    b.m_max *= factor;
    out.push((format!("m_max*{factor}"), b));
    out.push((format!("all*{factor}"), base.extended(factor, factor)));
    out
}

/// Base box followed by every cutoff pushed out by each of `factors`.
pub fn nested_extensions(base: &Cutoffs, factors: &[f64]) -> Vec<(String, Cutoffs)> {
    std::iter::once(("base".to_string(), *base))
        .chain(
            factors
                .iter()
                .map(|&f| (format!("all*{f}"), base.extended(f, f))),
        )
        .collect()
}

/// Recomputes the rate at `node` for each box; the first box is the reference.
pub fn locality_check(
    law: &PowerLawSpectrum,
    node: Wavevector,
    params: &PhysicalParams,
    quad: &QuadSettings,
    boxes: &[(String, Cutoffs)],
    tolerance: f64,
) -> Result<LocalityTable> {
    if boxes.len() < 2 {
        return Err(invalid(
            "cutoffs",
            "a locality study needs a base box and at least one extension",
        ));
    }
    if !(tolerance > 0.0) {
        return Err(invalid("tolerance", "must be > 0"));
    }
    let rows = boxes
        .par_iter()
        .map(|(label, cutoffs)| {
            let r = collision_rate(law, node, params, &quad.with_cutoffs(*cutoffs))?;
            Ok(LocalityRow {
                label: label.clone(),
                cutoffs: *cutoffs,
                rate: r.rate,
                branch_contributions: r.branch_contributions,
                normalizer: r.normalizer,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalityTable { rows, tolerance })
}
