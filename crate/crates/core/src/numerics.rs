//! Small numerical building blocks shared by the kinetic and spectral code.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

const MAX_GL_ORDER: usize = 64;

/// Gauss-Legendre nodes and weights on [-1, 1], cached per order (1..=64).
pub fn gauss_legendre(order: usize) -> &'static [(f64, f64)] {
    static RULES: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();
    assert!(
        (1..=MAX_GL_ORDER).contains(&order),
        "Gauss-Legendre order {order} outside 1..={MAX_GL_ORDER}"
    );
    let rules = RULES.get_or_init(|| {
        (1..=MAX_GL_ORDER)
            .map(|n| {
                let rule = GaussLegendre::new(NonZeroUsize::new(n).unwrap());
                let mut pairs = rule.as_node_weight_pairs().to_vec();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                pairs
            })
            .collect()
    });
    &rules[order - 1]
}

/// Gauss-Legendre nodes mapped to [a, b] as (x, w) pairs.
pub fn gauss_nodes(order: usize, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(order)
        .iter()
        .map(move |&(x, w)| (mid + half * x, half * w))
}

/// Brent's method on a bracket with f(a) f(b) <= 0.
pub fn brent(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Option<f64> {
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..max_iter {
        if fb == 0.0 {
            return Some(b);
        }
        let tol = xtol * b.abs().max(f64::MIN_POSITIVE) + 4.0 * f64::EPSILON * b.abs();
        if (b - a).abs() <= tol {
            return Some(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= 0.5 * (b - c).abs() || (b - c).abs() < tol
        } else {
            (s - b).abs() >= 0.5 * (c - d).abs() || (c - d).abs() < tol
        };
        if outside || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Some(b)
}
