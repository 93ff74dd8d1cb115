//! Resonant manifold: the m- and frequency-resonance conditions resolved
//! for the three terms of the angle-averaged collision integral.

use crate::dispersion::{frequency, frequency_dm};
use crate::error::{Error, Result};
use crate::grid::{Cutoffs, SpectralGrid};
use crate::numerics::brent;
use crate::params::{PhysicalParams, Wavevector};
use crate::triads::heron;

/// Root of omega(k2, m2) = omega_target and the inverse slope |d omega/d k2|^-1 there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSolution {
    pub k2: f64,
    /// Infinite at the inertial limit k2 = 0.
    pub jacobian: f64,
}

pub fn solve_k2(omega_target: f64, m2: f64, params: &PhysicalParams) -> Result<KSolution> {
    if m2 == 0.0 || !m2.is_finite() {
        return Err(Error::Domain("solve_k2 needs a finite nonzero m2".into()));
    }
    let f = params.f();
    if !(omega_target >= f) {
        return Err(Error::OffManifold(format!(
            "target frequency {omega_target} below f = {f}"
        )));
    }
    let (g, n, rho0) = (params.g(), params.buoyancy(), params.rho0());
    let s = (omega_target - f) * (omega_target + f);
    let k2 = rho0 * n * m2.abs() / g * s.sqrt();
    let jacobian = if k2 == 0.0 {
        f64::INFINITY
    } else {
        rho0 * rho0 * m2 * m2 * n * n * omega_target / (g * g * k2)
    };
    Ok(KSolution { k2, jacobian })
}

/// Inverse triangle kernel 1/Delta for sides (k, k1, k2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriangleWeight {
    Interior(f64),
    /// Degenerate (collinear) triangle where 1/Delta diverges integrably.
    Boundary,
    /// No triangle with these sides.
    Outside,
}

impl TriangleWeight {
    pub fn weight(&self) -> Option<f64> {
        match self {
            TriangleWeight::Interior(w) => Some(*w),
            _ => None,
        }
    }
}

/// Delta = (1/2) sqrt(2((k k1)^2 + (k k2)^2 + (k1 k2)^2) - k^4 - k1^4 - k2^4).
pub fn triangle_delta(k: f64, k1: f64, k2: f64) -> f64 {
    heron(k, k1, k2)
}

pub fn triangle_kernel(k: f64, k1: f64, k2: f64) -> Result<TriangleWeight> {
    if [k, k1, k2].iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Domain(format!(
            "triangle sides must be nonnegative, got ({k}, {k1}, {k2})"
        )));
    }
    let (lo, hi) = ((k1 - k2).abs(), k1 + k2);
    if k < lo || k > hi {
        return Ok(TriangleWeight::Outside);
    }
    if k == lo || k == hi {
        return Ok(TriangleWeight::Boundary);
    }
    let d = triangle_delta(k, k1, k2);
    Ok(if d > 0.0 {
        TriangleWeight::Interior(1.0 / d)
    } else {
        TriangleWeight::Boundary
    })
}

/// The three terms R^k_12, R^1_k2, R^2_1k of the collision integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// p = p1 + p2.
    Direct,
    /// p1 = p + p2.
    FirstMirror,
    /// p2 = p1 + p.
    SecondMirror,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Direct, Branch::FirstMirror, Branch::SecondMirror];

    pub fn index(self) -> usize {
        match self {
            Branch::Direct => 0,
            Branch::FirstMirror => 1,
            Branch::SecondMirror => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Direct => "direct",
            Branch::FirstMirror => "first_mirror",
            Branch::SecondMirror => "second_mirror",
        }
    }

    /// Sign with which the term enters dn/dt.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Direct => 1.0,
            _ => -1.0,
        }
    }

    /// m2 from the host m and the free m1.
    #[inline]
    pub fn m2(self, m: f64, m1: f64) -> f64 {
        match self {
            Branch::Direct => m - m1,
            Branch::FirstMirror => m1 - m,
            Branch::SecondMirror => m1 + m,
        }
    }

    /// Frequency mismatch whose zero is the resonance.
    #[inline]
    pub fn mismatch(self, w: f64, w1: f64, w2: f64) -> f64 {
        match self {
            Branch::Direct => w - w1 - w2,
            Branch::FirstMirror => w1 - w - w2,
            Branch::SecondMirror => w2 - w - w1,
        }
    }

    /// Frequency of partner 2 implied by resonance.
    #[inline]
    pub fn omega2(self, w: f64, w1: f64) -> f64 {
        match self {
            Branch::Direct => w - w1,
            Branch::FirstMirror => w1 - w,
            Branch::SecondMirror => w + w1,
        }
    }

    /// d mismatch / d m1 given d omega1/d m1 and d omega2/d m2.
    #[inline]
    fn mismatch_dm1(self, dw1: f64, dw2: f64) -> f64 {
        match self {
            Branch::Direct => -dw1 + dw2,
            Branch::FirstMirror => dw1 - dw2,
            Branch::SecondMirror => dw2 - dw1,
        }
    }

    /// Occupation factor with the branch's index roles, from (n, n1, n2).
    #[inline]
    pub fn occupation(self, n: f64, n1: f64, n2: f64) -> f64 {
        match self {
            Branch::Direct => occupation_factor(n, n1, n2),
            Branch::FirstMirror => occupation_factor(n1, n, n2),
            Branch::SecondMirror => occupation_factor(n2, n1, n),
        }
    }

    /// |gain| + |loss| of [`Branch::occupation`].
    #[inline]
    pub fn occupation_magnitude(self, n: f64, n1: f64, n2: f64) -> f64 {
        let (a, b, c) = match self {
            Branch::Direct => (n, n1, n2),
            Branch::FirstMirror => (n1, n, n2),
            Branch::SecondMirror => (n2, n1, n),
        };
        (b * c).abs() + (a * (b + c)).abs()
    }

    /// Reorders (host, partner 1, partner 2) so the sum wavevector comes first,
    /// as needed by the interaction coefficient.
    #[inline]
    pub fn triad_order<T: Copy>(self, v: [T; 3]) -> [T; 3] {
        match self {
            Branch::Direct => v,
            Branch::FirstMirror => [v[1], v[0], v[2]],
            Branch::SecondMirror => [v[2], v[1], v[0]],
        }
    }

    /// Open m1 intervals with fixed signs of m1 and m2 for a host m > 0,
    /// tagged with whether all three vertical wavenumbers share a sign.
    pub fn sign_sectors(self, m: f64) -> [(f64, f64, bool); 3] {
        let inf = f64::INFINITY;
        match self {
            Branch::Direct => [(-inf, 0.0, false), (0.0, m, true), (m, inf, false)],
            Branch::FirstMirror => [(-inf, 0.0, false), (0.0, m, false), (m, inf, true)],
            Branch::SecondMirror => [(-inf, -m, false), (-m, 0.0, false), (0.0, inf, true)],
        }
    }
}

/// n1 n2 - n (n1 + n2).
#[inline]
pub fn occupation_factor(n: f64, n1: f64, n2: f64) -> f64 {
    n1 * n2 - n * (n1 + n2)
}

/// A point of the resonant manifold serving one branch at host (k, m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantPoint {
    pub branch: Branch,
    pub k: f64,
    pub m: f64,
    pub k1: f64,
    pub m1: f64,
    pub k2: f64,
    pub m2: f64,
    /// Inverse derivative of the frequency mismatch with respect to the
    /// resolved variable (k2 for [`enumerate_manifold`], m1 for [`solve_m1`]).
    pub jacobian: f64,
    /// 1/Delta of (k, k1, k2).
    pub triangle_weight: f64,
}

impl ResonantPoint {
    pub fn omegas(&self, params: &PhysicalParams) -> [f64; 3] {
        [
            frequency(self.k, self.m, params),
            frequency(self.k1, self.m1, params),
            frequency(self.k2, self.m2, params),
        ]
    }

    /// |mismatch| relative to the largest frequency involved.
    pub fn resonance_error(&self, params: &PhysicalParams) -> f64 {
        let [w, w1, w2] = self.omegas(params);
        self.branch.mismatch(w, w1, w2).abs() / w.max(w1).max(w2)
    }

    /// All three vertical wavenumbers share one sign.
    pub fn same_sign(&self) -> bool {
        let s = self.m.signum();
        self.m1.signum() == s && self.m2.signum() == s
    }
}

/// Lattice enumeration of the manifold: (k1, m1) run over the grid nodes
/// (m1 of both signs when `mixed_sign`, otherwise only the sign giving
/// same-sign triads), k2 follows from the frequency resonance.
pub fn enumerate_manifold(
    p: Wavevector,
    grid: &SpectralGrid,
    branch: Branch,
    params: &PhysicalParams,
    mixed_sign: bool,
) -> Vec<ResonantPoint> {
    let mut out = Vec::new();
    if p.m == 0.0 || p.k <= 0.0 {
        return out;
    }
    let w = frequency(p.k, p.m, params);
    for &k1 in grid.k_axis() {
        for &am1 in grid.m_axis() {
            for sign in [1.0, -1.0] {
                let m1 = sign * am1;
                let m2 = branch.m2(p.m, m1);
                if m2 == 0.0 {
                    continue;
                }
                let same = m1.signum() == p.m.signum() && m2.signum() == p.m.signum();
                if !mixed_sign && !same {
                    continue;
                }
                let w1 = frequency(k1, m1, params);
                let Ok(sol) = solve_k2(branch.omega2(w, w1), m2, params) else {
                    continue;
                };
                if !(sol.k2 > 0.0 && sol.jacobian.is_finite()) {
                    continue;
                }
                if let Ok(TriangleWeight::Interior(tw)) = triangle_kernel(p.k, k1, sol.k2) {
                    out.push(ResonantPoint {
                        branch,
                        k: p.k,
                        m: p.m,
                        k1,
                        m1,
                        k2: sol.k2,
                        m2,
                        jacobian: sol.jacobian,
                        triangle_weight: tw,
                    });
                }
            }
        }
    }
    out
}

/// Interval of m1 inside one sign sector that keeps |m1| and |m2| in the box.
pub fn sector_window(
    branch: Branch,
    m: f64,
    sector: (f64, f64),
    box_: &Cutoffs,
) -> Option<(f64, f64)> {
    let (a, b) = sector;
    let mid = if a.is_finite() && b.is_finite() {
        0.5 * (a + b)
    } else if a.is_finite() {
        a + 1.0 + a.abs()
    } else {
        b - 1.0 - b.abs()
    };
    let s1 = mid.signum();
    let s2 = branch.m2(m, mid).signum();
    let (mut lo, mut hi) = (a, b);
    let clip = |lo: &mut f64, hi: &mut f64, l: f64, h: f64| {
        *lo = lo.max(l);
        *hi = hi.min(h);
    };
    let (l1, h1) = signed_range(s1, box_.m_min, box_.m_max);
    clip(&mut lo, &mut hi, l1, h1);
    // m2 = sigma m1 + beta, sigma = +-1
    let (sigma, beta) = match branch {
        Branch::Direct => (-1.0, m),
        Branch::FirstMirror => (1.0, -m),
        Branch::SecondMirror => (1.0, m),
    };
    let (l2, h2) = signed_range(s2, box_.m_min, box_.m_max);
    let (x, y) = ((l2 - beta) / sigma, (h2 - beta) / sigma);
    clip(&mut lo, &mut hi, x.min(y), x.max(y));
    (lo < hi).then_some((lo, hi))
}

fn signed_range(sign: f64, lo: f64, hi: f64) -> (f64, f64) {
    if sign > 0.0 {
        (lo, hi)
    } else {
        (-hi, -lo)
    }
}

/// Resolves frequency resonance in m1 on `window` for given magnitudes (k, k1, k2).
/// The mismatch is monotone in m1 on every mixed-sign sector, so a sign change of the
/// mismatch across the window brackets the unique root.
#[allow(clippy::too_many_arguments)]
pub fn solve_m1(
    branch: Branch,
    k: f64,
    m: f64,
    k1: f64,
    k2: f64,
    window: (f64, f64),
    params: &PhysicalParams,
) -> Option<ResonantPoint> {
    let w = frequency(k, m, params);
    let mismatch = |m1: f64| {
        branch.mismatch(
            w,
            frequency(k1, m1, params),
            frequency(k2, branch.m2(m, m1), params),
        )
    };
    let (lo, hi) = window;
    let (flo, fhi) = (mismatch(lo), mismatch(hi));
    if flo.signum() == fhi.signum() && flo != 0.0 && fhi != 0.0 {
        return None;
    }
    let m1 = brent(mismatch, lo, hi, flo, fhi, 1e-15, 200)?;
    let m2 = branch.m2(m, m1);
    let w1 = frequency(k1, m1, params);
    let w2 = frequency(k2, m2, params);
    let d = branch.mismatch_dm1(
        frequency_dm(k1, m1, w1, params),
        frequency_dm(k2, m2, w2, params),
    );
    if !(d.is_finite() && d != 0.0) {
        return None;
    }
    let delta = triangle_delta(k, k1, k2);
    Some(ResonantPoint {
        branch,
        k,
        m,
        k1,
        m1,
        k2,
        m2,
        jacobian: 1.0 / d.abs(),
        triangle_weight: if delta > 0.0 {
            1.0 / delta
        } else {
            f64::INFINITY
        },
    })
}
