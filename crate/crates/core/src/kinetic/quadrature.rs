//! Quadrature over the resonant manifold of one host wavevector.
//!
//! Mapped scheme: the smaller horizontal partner k_s runs over log-spaced
//! Gauss panels and the angle phi between the host and k_s vectors is the
//! second variable, so that dk_big/Delta = dphi/k_big and the triangle-edge
//! singularity disappears. The frequency delta is resolved in m1.
//! Unmapped scheme: tensor Gauss rule in (k2, k1) with explicit 1/Delta.

use crate::dispersion::frequency;
use crate::grid::Cutoffs;
use crate::manifold::{sector_window, solve_k2, solve_m1, triangle_delta, Branch, ResonantPoint};
use crate::numerics::gauss_nodes;
use crate::params::PhysicalParams;

use super::QuadSettings;

/// Base log-width of an outer panel.
const BASE_LOG_PANEL: f64 = std::f64::consts::LN_2;

/// Which partner is the smaller one in the mapped scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    /// k2 <= k1
    SecondSmall,
    /// k1 < k2
    FirstSmall,
}

/// Splits [a, b] at the given interior breakpoints and into pieces no wider than `h`.
pub(crate) fn panels(a: f64, b: f64, breaks: &[f64], h: f64) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * y.abs().max(1e-300));
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let n = ((hi - lo) / h).ceil().max(1.0) as usize;
        let step = (hi - lo) / n as f64;
        for i in 0..n {
            let x0 = lo + i as f64 * step;
            let x1 = if i + 1 == n {
                hi
            } else {
                lo + (i + 1) as f64 * step
            };
            out.push((x0, x1));
        }
    }
    out
}

pub(crate) struct Windows {
    /// Per branch: up to three m1 windows with their same-sign flag.
    per_branch: [Vec<(f64, f64)>; 3],
}

impl Windows {
    pub(crate) fn new(m: f64, box_: &Cutoffs, mixed_sign: bool) -> Self {
        let per_branch = Branch::ALL.map(|b| {
            b.sign_sectors(m)
                .iter()
                .filter(|s| mixed_sign || s.2)
                .filter_map(|s| sector_window(b, m, (s.0, s.1), box_))
                .collect()
        });
        Self { per_branch }
    }

    fn of(&self, b: Branch) -> &[(f64, f64)] {
        &self.per_branch[b.index()]
    }
}

/// Visits every resonant point with its measure weight
/// (everything except |V|^2, the occupation factor and the branch sign).
pub(crate) fn mapped<F: FnMut(&ResonantPoint, f64)>(
    k: f64,
    m: f64,
    params: &PhysicalParams,
    box_: &Cutoffs,
    quad: &QuadSettings,
    mut visit: F,
) {
    let (kmin, kmax) = (box_.k_min, box_.k_max);
    let windows = Windows::new(m, box_, quad.mixed_sign);
    let h = BASE_LOG_PANEL / f64::from(1u32 << quad.refinement);
    let breaks: Vec<f64> = [0.5 * k, k - kmin, k + kmin, kmax - k]
        .iter()
        .filter(|x| **x > 0.0)
        .map(|x| x.ln())
        .collect();
    let phi_panels = 1usize << quad.refinement;
    let w_host = frequency(k, m, params);
    let mut phi_breaks = Vec::with_capacity(12);
    for (a, b) in panels(kmin.ln(), kmax.ln(), &breaks, h) {
        for (lks, wl) in gauss_nodes(quad.order, a, b) {
            let ks = lks.exp();
            let denom = 2.0 * k * ks;
            let c_hi = 1f64
                .min(k / (2.0 * ks))
                .min((k * k + ks * ks - kmin * kmin) / denom);
            let c_lo = (-1f64).max((k * k + ks * ks - kmax * kmax) / denom);
            if c_lo >= c_hi {
                continue;
            }
            let (p0, p1) = (c_hi.acos(), c_lo.acos());
            for region in [Region::SecondSmall, Region::FirstSmall] {
                for branch in Branch::ALL {
                    let wins = windows.of(branch);
                    if wins.is_empty() {
                        continue;
                    }
                    phi_breaks.clear();
                    for &(lo, hi) in wins {
                        for e in [lo, hi] {
                            if let Some(c) =
                                window_edge_cos(branch, region, k, m, w_host, ks, e, params)
                            {
                                if c > c_lo && c < c_hi {
                                    phi_breaks.push(c.acos());
                                }
                            }
                        }
                    }
                    let hp = (p1 - p0) / phi_panels as f64;
                    for (pa, pb) in panels(p0, p1, &phi_breaks, hp * (1.0 + 1e-12)) {
                        for (phi, wp) in gauss_nodes(quad.order, pa, pb) {
                            let kb2 = k * k + ks * ks - denom * phi.cos();
                            let kb = kb2.max(0.0).sqrt();
                            let (k1, k2) = match region {
                                Region::SecondSmall => (kb, ks),
                                Region::FirstSmall => (ks, kb),
                            };
                            // d ln ks * ks, dphi / k_big, times k1 k2 (1/k cancels k)
                            let measure = wl * wp * ks * ks;
                            for &win in wins {
                                if let Some(pt) = solve_m1(branch, k, m, k1, k2, win, params) {
                                    visit(&pt, measure * pt.jacobian);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// cos(phi) at which the resonant m1 sits exactly at `m1_edge`, if any.
#[allow(clippy::too_many_arguments)]
fn window_edge_cos(
    branch: Branch,
    region: Region,
    k: f64,
    m: f64,
    w: f64,
    ks: f64,
    m1_edge: f64,
    params: &PhysicalParams,
) -> Option<f64> {
    let m2 = branch.m2(m, m1_edge);
    let kb = match region {
        Region::FirstSmall => {
            let w1 = frequency(ks, m1_edge, params);
            solve_k2(branch.omega2(w, w1), m2, params).ok()?.k2
        }
        Region::SecondSmall => {
            let w2 = frequency(ks, m2, params);
            let w1 = match branch {
                Branch::Direct => w - w2,
                Branch::FirstMirror => w + w2,
                Branch::SecondMirror => w2 - w,
            };
            solve_k2(w1, m1_edge, params).ok()?.k2
        }
    };
    Some((k * k + ks * ks - kb * kb) / (2.0 * k * ks))
}

/// Plain tensor rule in (ln k2, k1) with explicit 1/Delta weights.
pub(crate) fn unmapped<F: FnMut(&ResonantPoint, f64)>(
    k: f64,
    m: f64,
    params: &PhysicalParams,
    box_: &Cutoffs,
    quad: &QuadSettings,
    mut visit: F,
) {
    let (kmin, kmax) = (box_.k_min, box_.k_max);
    let windows = Windows::new(m, box_, quad.mixed_sign);
    let h = BASE_LOG_PANEL / f64::from(1u32 << quad.refinement);
    let breaks: Vec<f64> = [k - kmin, k + kmin, kmax - k, k]
        .iter()
        .filter(|x| **x > 0.0)
        .map(|x| x.ln())
        .collect();
    let inner_panels = 1usize << quad.refinement;
    for (a, b) in panels(kmin.ln(), kmax.ln(), &breaks, h) {
        for (lk2, wl) in gauss_nodes(quad.order, a, b) {
            let k2 = lk2.exp();
            let lo = kmin.max((k - k2).abs());
            let hi = kmax.min(k + k2);
            if lo >= hi {
                continue;
            }
            let hk = (hi - lo) / inner_panels as f64;
            for (qa, qb) in panels(lo, hi, &[], hk * (1.0 + 1e-12)) {
                for (k1, w1) in gauss_nodes(quad.order, qa, qb) {
                    let d = triangle_delta(k, k1, k2);
                    if d <= 0.0 {
                        continue;
                    }
                    let measure = wl * k2 * w1 * k1 * k2 / d;
                    for branch in Branch::ALL {
                        for &win in windows.of(branch) {
                            if let Some(pt) = solve_m1(branch, k, m, k1, k2, win, params) {
                                visit(&pt, measure * pt.jacobian);
                            }
                        }
                    }
                }
            }
        }
    }
}
