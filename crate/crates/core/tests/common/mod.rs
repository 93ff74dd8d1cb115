//! Reference implementations shared by the integration tests. Nothing here
//! calls the resonant-manifold machinery of the crate.

#![allow(dead_code)]

use std::f64::consts::PI;

use isowave::triads::{Coupling, Triad};
use isowave::{Cutoffs, PhysicalParams};

/// sqrt(f^2 + (g k / (rho0 N m))^2), written out independently.
pub fn omega(k: f64, m: f64, p: &PhysicalParams) -> f64 {
    let c = p.g() / (p.rho0() * p.buoyancy());
    (p.f() * p.f() + (c * k / m).powi(2)).sqrt()
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            let dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Splits [a, b] at `cuts` and into pieces of width at most `h`.
pub fn pieces(a: f64, b: f64, cuts: &[f64], h: f64) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = cuts.iter().copied().filter(|c| *c > a && *c < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in pts.windows(2) {
        if w[1] - w[0] <= 1e-15 * (1.0 + w[0].abs()) {
            continue;
        }
        let n = ((w[1] - w[0]) / h).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            out.push((w[0] + i as f64 * step, w[0] + (i + 1) as f64 * step));
        }
    }
    out
}

/// Kronrod 15-point abscissae (non-negative half) with weights; every second
/// abscissa from index 1 is a 7-point Gauss node.
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// (Kronrod estimate, |Kronrod - Gauss|, Kronrod estimate of the integral of |f|).
fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let (mut k, mut g, mut abs) = (WK[7] * fc, WG[3] * fc, WK[7] * fc.abs());
    for i in 0..7 {
        let (f1, f2) = (f(c - h * XK[i]), f(c + h * XK[i]));
        k += WK[i] * (f1 + f2);
        abs += WK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h)
}

/// Globally adaptive Gauss-Kronrod quadrature over the given starting
/// intervals; stops when the summed error estimate falls below
/// `rtol` times the integral of |f|, or after `max_splits` bisections.
pub fn adaptive(
    f: &mut dyn FnMut(f64) -> f64,
    intervals: &[(f64, f64)],
    rtol: f64,
    max_splits: usize,
) -> f64 {
    let mut parts: Vec<(f64, f64, f64, f64, f64)> = intervals
        .iter()
        .map(|&(a, b)| {
            let (v, e, m) = gk15(f, a, b);
            (a, b, v, e, m)
        })
        .collect();
    for _ in 0..max_splits {
        let err: f64 = parts.iter().map(|p| p.3).sum();
        let mag: f64 = parts.iter().map(|p| p.4).sum();
        if err <= rtol * mag {
            break;
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (a, b, ..) = parts.swap_remove(i);
        let c = 0.5 * (a + b);
        for (lo, hi) in [(a, c), (c, b)] {
            let (v, e, m) = gk15(f, lo, hi);
            parts.push((lo, hi, v, e, m));
        }
    }
    parts.iter().map(|p| p.2).sum()
}

/// The three collision terms in vector form. `Direct`: p = q + r with q free.
/// `First`: q = p + r with r free. `Second`: r = q + p with q free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Direct,
    First,
    Second,
}

pub struct OracleSettings {
    /// Gaussian width of the frequency delta.
    pub sigma: f64,
    /// Starting panel width in ln k of the free horizontal wavenumber.
    pub h_lnk: f64,
    /// Starting angular panels.
    pub theta_panels: usize,
    /// Coarse cell width in ln |m| of the free vertical wavenumber.
    pub h_lnm: f64,
    /// Relative tolerance of the adaptive outer integrals.
    pub rtol: f64,
}

/// Brute-force dn/dt contribution of `term` at host (k, m): the momentum
/// delta is used to eliminate one partner, the free partner (k vector, m)
/// runs over the box on adaptive Gauss-Kronrod rules in (ln k, angle) and a
/// fine composite Gauss rule in ln |m|, and the frequency delta is a
/// Gaussian of width `sigma`.
pub fn oracle_term(
    n: &dyn Fn(f64, f64) -> f64,
    k: f64,
    m: f64,
    params: &PhysicalParams,
    cut: &Cutoffs,
    term: Term,
    s: &OracleSettings,
) -> f64 {
    let coupling = Coupling::new(*params);
    let inner = gauss_legendre(4);
    let host = [k, 0.0];
    let w0 = omega(k, m, params);
    let n0 = n(k, m);
    // partner = sgn_h host + sgn_f free
    let (sh, sf) = match term {
        Term::Direct => (1.0, -1.0),
        Term::First | Term::Second => (1.0, 1.0),
    };
    let in_box = |kk: f64, mm: f64| {
        kk >= cut.k_min && kk <= cut.k_max && mm.abs() >= cut.m_min && mm.abs() <= cut.m_max
    };
    let norm = 1.0 / (s.sigma * (2.0 * PI).sqrt());
    // occupation and |V|^2 for free (kf, mf) and partner (kp, mp)
    let kernel = |kf: [f64; 2], mf: f64, kp: [f64; 2], mp: f64| -> Option<(f64, f64)> {
        let af = kf[0].hypot(kf[1]);
        let ap = kp[0].hypot(kp[1]);
        let (wf, wp) = (omega(af, mf, params), omega(ap, mp, params));
        let (nf, np) = (n(af, mf), n(ap, mp));
        let (mismatch, occ, triad) = match term {
            Term::Direct => (
                w0 - wf - wp,
                nf * np - n0 * (nf + np),
                Triad::from_vectors(kf, mf, kp, mp),
            ),
            // partner is the sum leg: partner = host + free
            Term::First => (
                wp - w0 - wf,
                n0 * nf - np * (n0 + nf),
                Triad::from_vectors(host, m, kf, mf),
            ),
            Term::Second => (
                wp - wf - w0,
                nf * n0 - np * (nf + n0),
                Triad::from_vectors(kf, mf, host, m),
            ),
        };
        let gauss = (-0.5 * (mismatch / s.sigma).powi(2)).exp() * norm;
        if gauss == 0.0 {
            return Some((0.0, 0.0));
        }
        let v2 = coupling.v_squared(&triad.ok()?);
        Some((mismatch, gauss * v2 * occ))
    };
    let mismatch_only = |kf: [f64; 2], mf: f64, kp: [f64; 2], mp: f64| -> f64 {
        let wf = omega(kf[0].hypot(kf[1]), mf, params);
        let wp = omega(kp[0].hypot(kp[1]), mp, params);
        match term {
            Term::Direct => w0 - wf - wp,
            Term::First => wp - w0 - wf,
            Term::Second => wp - wf - w0,
        }
    };

    // integral over m of the broadened kernel at fixed horizontal vectors
    let line = |kfv: [f64; 2], kpv: [f64; 2]| -> f64 {
        let (kf, kp) = (kfv[0].hypot(kfv[1]), kpv[0].hypot(kpv[1]));
        let mut line = 0.0;
        for sign in [1.0, -1.0] {
            let mf_of = |u: f64| sign * u.exp();
            let mp_of = |mf: f64| sh * m + sf * mf;
            let mut mcuts = Vec::new();
            for mb in [cut.m_min, cut.m_max] {
                for target in [mb, -mb] {
                    let mf = (target - sh * m) / sf;
                    if mf * sign > 0.0 {
                        mcuts.push(mf.abs().ln());
                    }
                }
            }
            let cells = pieces(cut.m_min.ln(), cut.m_max.ln(), &mcuts, s.h_lnm);
            let ends: Vec<f64> = cells
                .iter()
                .map(|c| c.0)
                .chain(std::iter::once(cells.last().unwrap().1))
                .map(|u| {
                    let mf = mf_of(u);
                    mismatch_only(kfv, mf, kpv, mp_of(mf))
                })
                .collect();
            for (ci, &(u0, u1)) in cells.iter().enumerate() {
                let mid = mf_of(0.5 * (u0 + u1));
                if !in_box(kf, mid) || !in_box(kp, mp_of(mid)) {
                    continue;
                }
                let (e0, e1) = (ends[ci], ends[ci + 1]);
                let curve = if ci + 2 < ends.len() {
                    (ends[ci + 2] - 2.0 * e1 + e0).abs()
                } else if ci > 0 {
                    (e1 - 2.0 * e0 + ends[ci - 1]).abs()
                } else {
                    0.0
                };
                let floor = e0.abs().min(e1.abs()) - (e1 - e0).abs() - curve;
                if e0.signum() == e1.signum() && floor > 12.0 * s.sigma {
                    continue;
                }
                let sub = ((2.0 * (e1 - e0).abs() + 2.0 * curve) / s.sigma)
                    .ceil()
                    .max(1.0) as usize;
                let du = (u1 - u0) / sub as f64;
                for j in 0..sub {
                    let (v0, v1) = (u0 + j as f64 * du, u0 + (j + 1) as f64 * du);
                    for &(xm, wm) in &inner {
                        let u = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * xm;
                        let mf = mf_of(u);
                        if let Some((_, val)) = kernel(kfv, mf, kpv, mp_of(mf)) {
                            line += 0.5 * (v1 - v0) * wm * mf.abs() * val;
                        }
                    }
                }
            }
        }
        line
    };
    // angular integral at fixed free magnitude; theta -> -theta leaves
    // |V|^2 and the mismatch unchanged
    let ring = |lk: f64| -> f64 {
        let kf = lk.exp();
        let mut cuts = Vec::new();
        for kb in [cut.k_min, cut.k_max] {
            let c = sh * sf * (kb * kb - k * k - kf * kf) / (2.0 * k * kf);
            if c.abs() < 1.0 {
                cuts.push(c.acos());
            }
        }
        let mut f = |th: f64| {
            let kfv = [kf * th.cos(), kf * th.sin()];
            let kpv = [sh * host[0] + sf * kfv[0], sh * host[1] + sf * kfv[1]];
            let kp = kpv[0].hypot(kpv[1]);
            if kp < cut.k_min || kp > cut.k_max {
                return 0.0;
            }
            line(kfv, kpv)
        };
        let start = pieces(0.0, PI, &cuts, PI / s.theta_panels as f64);
        2.0 * kf * kf * adaptive(&mut f, &start, 0.1 * s.rtol, 400)
    };
    let start = pieces(cut.k_min.ln(), cut.k_max.ln(), &[k.ln()], s.h_lnk);
    let mut ring = ring;
    adaptive(&mut ring, &start, s.rtol, 200)
}

/// Signed total of the three vector-form terms.
pub fn oracle_rate(
    n: &dyn Fn(f64, f64) -> f64,
    k: f64,
    m: f64,
    params: &PhysicalParams,
    cut: &Cutoffs,
    s: &OracleSettings,
) -> [f64; 3] {
    [
        oracle_term(n, k, m, params, cut, Term::Direct, s),
        -oracle_term(n, k, m, params, cut, Term::First, s),
        -oracle_term(n, k, m, params, cut, Term::Second, s),
    ]
}
