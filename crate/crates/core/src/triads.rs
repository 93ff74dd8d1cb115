//! Three-wave interaction coefficients V = I + J + K for p1 = p2 + p3.

use crate::dispersion::{frequency, frequency_high};
use crate::error::{invalid, Error, Result};
use crate::params::PhysicalParams;

/// Horizontal geometry of a triad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Horizontal vectors of p2 and p3; p1 is their sum.
    Vector { k2: [f64; 2], k3: [f64; 2] },
    /// Only the magnitudes are known.
    Magnitude,
}

/// Wavevectors p1 = p2 + p3 (indices 0, 1, 2 here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    k: [f64; 3],
    m: [f64; 3],
    geometry: Geometry,
}

const CLOSURE_TOL: f64 = 1e-12;

impl Triad {
    pub fn from_vectors(k2: [f64; 2], m2: f64, k3: [f64; 2], m3: f64) -> Result<Self> {
        let k1 = [k2[0] + k3[0], k2[1] + k3[1]];
        let k = [k1[0].hypot(k1[1]), k2[0].hypot(k2[1]), k3[0].hypot(k3[1])];
        Self::validate(k, m2, m3)?;
        Ok(Self {
            k,
            m: [m2 + m3, m2, m3],
            geometry: Geometry::Vector { k2, k3 },
        })
    }

    /// Magnitudes k1, k2, k3 and vertical wavenumbers m2, m3; m1 = m2 + m3.
    pub fn from_magnitudes(k1: f64, k2: f64, k3: f64, m2: f64, m3: f64) -> Result<Self> {
        let k = [k1, k2, k3];
        Self::validate(k, m2, m3)?;
        let scale = k1.max(k2).max(k3);
        if k1 > k2 + k3 + CLOSURE_TOL * scale || k1 < (k2 - k3).abs() - CLOSURE_TOL * scale {
            return Err(Error::Domain(format!(
                "triangle inequality violated for ({k1}, {k2}, {k3})"
            )));
        }
        Ok(Self {
            k,
            m: [m2 + m3, m2, m3],
            geometry: Geometry::Magnitude,
        })
    }

    fn validate(k: [f64; 3], m2: f64, m3: f64) -> Result<()> {
        if k.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Domain(format!(
                "triad needs positive wavenumbers, got {k:?}"
            )));
        }
        if !(m2.is_finite() && m3.is_finite()) {
            return Err(invalid("m", "vertical wavenumbers must be finite"));
        }
        if m2 == 0.0 || m3 == 0.0 || m2 + m3 == 0.0 {
            return Err(Error::Domain(
                "triad needs nonzero vertical wavenumbers".into(),
            ));
        }
        Ok(())
    }

    pub fn k(&self) -> [f64; 3] {
        self.k
    }

    pub fn m(&self) -> [f64; 3] {
        self.m
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Same triad with p2 and p3 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            k: [self.k[0], self.k[2], self.k[1]],
            m: [self.m[0], self.m[2], self.m[1]],
            geometry: match self.geometry {
                Geometry::Vector { k2, k3 } => Geometry::Vector { k2: k3, k3: k2 },
                Geometry::Magnitude => Geometry::Magnitude,
            },
        }
    }

    /// Direction cosines (c23, c13, c12).
    pub fn cosines(&self) -> [f64; 3] {
        match self.geometry {
            Geometry::Vector { k2, k3 } => {
                let k1 = [k2[0] + k3[0], k2[1] + k3[1]];
                let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
                [
                    dot(k2, k3) / (self.k[1] * self.k[2]),
                    dot(k1, k3) / (self.k[0] * self.k[2]),
                    dot(k1, k2) / (self.k[0] * self.k[1]),
                ]
            }
            Geometry::Magnitude => law_of_cosines(self.k),
        }
    }

    /// Signed k2 . k3_perp with perp(a) = (-a_y, a_x); vector form only.
    pub fn cross(&self) -> Option<f64> {
        match self.geometry {
            Geometry::Vector { k2, k3 } => Some(k2[1] * k3[0] - k2[0] * k3[1]),
            Geometry::Magnitude => None,
        }
    }

    /// |k2 x k3|.
    pub fn cross_abs(&self) -> f64 {
        match self.cross() {
            Some(c) => c.abs(),
            None => heron(self.k[0], self.k[1], self.k[2]),
        }
    }
}

/// (c23, c13, c12) for k1 = k2 + k3 from magnitudes.
#[inline]
pub fn law_of_cosines(k: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = [k[0] * k[0], k[1] * k[1], k[2] * k[2]];
    [
        (a - b - c) / (2.0 * k[1] * k[2]),
        (a + c - b) / (2.0 * k[0] * k[2]),
        (a + b - c) / (2.0 * k[0] * k[1]),
    ]
}

/// Twice the area of the triangle with sides k, k1, k2 (0 when degenerate or absent).
#[inline]
pub fn heron(k: f64, k1: f64, k2: f64) -> f64 {
    // Kahan's ordering a >= b >= c keeps nearly flat triangles accurate
    let mut s = [k, k1, k2];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.5 * q.max(0.0).sqrt()
}

/// The three parts of V; `k` is the coefficient of i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElement {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl MatrixElement {
    pub fn v_squared(&self) -> f64 {
        let r = self.i + self.j;
        r * r + self.k * self.k
    }
}

/// Evaluation settings for the interaction coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    params: PhysicalParams,
    k_prefactor_quarter: bool,
    high_frequency: bool,
}

impl Coupling {
    pub fn new(params: PhysicalParams) -> Self {
        Self {
            params,
            k_prefactor_quarter: false,
            high_frequency: false,
        }
    }

    /// Multiply the K prefactor by 1/4.
    pub fn with_k_prefactor_quarter(mut self, on: bool) -> Self {
        self.k_prefactor_quarter = on;
        self
    }

    /// Use omega = c k/|m| inside V.
    pub fn with_high_frequency(mut self, on: bool) -> Self {
        self.high_frequency = on;
        self
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn omega(&self, k: f64, m: f64) -> f64 {
        if self.high_frequency {
            frequency_high(k, m, &self.params)
        } else {
            frequency(k, m, &self.params)
        }
    }

    pub fn omegas(&self, t: &Triad) -> [f64; 3] {
        [0, 1, 2].map(|i| self.omega(t.k[i], t.m[i]))
    }

    fn i_raw(&self, k: [f64; 3], w: [f64; 3], c: [f64; 3]) -> f64 {
        let pre = -self.params.buoyancy() / (4.0 * (2.0 * self.params.g()).sqrt());
        pre * (c[0] * (w[1] * w[2] / w[0]).sqrt() * k[0]
            + c[1] * (w[0] * w[2] / w[1]).sqrt() * k[1]
            + c[2] * (w[0] * w[1] / w[2]).sqrt() * k[2])
    }

    fn j_raw(&self, k: [f64; 3], w: [f64; 3], c: [f64; 3]) -> f64 {
        let f = self.params.f();
        if f == 0.0 {
            return 0.0;
        }
        let pre = self.params.buoyancy() * f * f
            / (4.0 * (2.0 * self.params.g() * w[0] * w[1] * w[2]).sqrt());
        pre * (c[0] * k[0] - c[1] * k[1] - c[2] * k[2])
    }

    fn k_raw(&self, k: [f64; 3], w: [f64; 3], cross: f64) -> f64 {
        let f = self.params.f();
        if f == 0.0 || cross == 0.0 {
            return 0.0;
        }
        let mut pre = f * self.params.buoyancy() / (2.0 * self.params.g()).sqrt();
        if self.k_prefactor_quarter {
            pre *= 0.25;
        }
        let [a, b, c] = [k[0] * k[0], k[1] * k[1], k[2] * k[2]];
        let bracket = (w[1] / (w[0] * w[2])).sqrt() * (a - c)
            + (w[0] / (w[1] * w[2])).sqrt() * (b - c)
            + (w[2] / (w[0] * w[1])).sqrt() * (b - a);
        pre * cross / (k[0] * k[1] * k[2]) * bracket
    }

    /// All three parts; for magnitude triads `k` carries |k2 x k3| (sign unknown).
    pub fn element(&self, t: &Triad) -> MatrixElement {
        let w = self.omegas(t);
        let c = t.cosines();
        let cross = t.cross().unwrap_or_else(|| t.cross_abs());
        MatrixElement {
            i: self.i_raw(t.k, w, c),
            j: self.j_raw(t.k, w, c),
            k: self.k_raw(t.k, w, cross),
        }
    }

    pub fn i_term(&self, t: &Triad) -> f64 {
        self.i_raw(t.k, self.omegas(t), t.cosines())
    }

    pub fn j_term(&self, t: &Triad) -> f64 {
        self.j_raw(t.k, self.omegas(t), t.cosines())
    }

    /// Signed coefficient of i in K; needs a vector-form triad.
    pub fn k_term(&self, t: &Triad) -> Result<f64> {
        let cross = t.cross().ok_or_else(|| {
            Error::Domain("signed K needs the horizontal orientation of a vector-form triad".into())
        })?;
        Ok(self.k_raw(t.k, self.omegas(t), cross))
    }

    pub fn v_squared(&self, t: &Triad) -> f64 {
        self.element(t).v_squared()
    }

    /// |V|^2 from magnitudes and precomputed frequencies; the kinetic hot path.
    #[inline]
    pub fn v_squared_raw(&self, k: [f64; 3], w: [f64; 3]) -> f64 {
        let c = law_of_cosines(k);
        let r = self.i_raw(k, w, c) + self.j_raw(k, w, c);
        let kk = self.k_raw(k, w, heron(k[0], k[1], k[2]));
        r * r + kk * kk
    }
}

pub fn i_term(t: &Triad, params: &PhysicalParams) -> f64 {
    Coupling::new(*params).i_term(t)
}

pub fn j_term(t: &Triad, params: &PhysicalParams) -> f64 {
    Coupling::new(*params).j_term(t)
}

pub fn k_term(t: &Triad, params: &PhysicalParams) -> Result<f64> {
    Coupling::new(*params).k_term(t)
}

pub fn v_squared(t: &Triad, params: &PhysicalParams) -> f64 {
    Coupling::new(*params).v_squared(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: f64) -> PhysicalParams {
        PhysicalParams::new(f, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn collinear_i_matches_unit_cosines() {
        let p = params(0.0);
        let t = Triad::from_vectors([1.0, 0.0], 1.0, [2.0, 0.0], 3.0).unwrap();
        let w: [f64; 3] = [3.0 / 4.0, 1.0, 2.0 / 3.0];
        let want = -1.0 / (4.0 * 2f64.sqrt())
            * ((w[1] * w[2] / w[0]).sqrt() * 3.0
                + (w[0] * w[2] / w[1]).sqrt()
                + (w[0] * w[1] / w[2]).sqrt() * 2.0);
        assert!((i_term(&t, &p) - want).abs() < 1e-15);
        assert_eq!(k_term(&t, &params(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn f_zero_kills_j_and_k() {
        let t = Triad::from_vectors([1.0, 0.5], 1.0, [-0.2, 2.0], -3.0).unwrap();
        let p = params(0.0);
        assert_eq!(j_term(&t, &p), 0.0);
        assert_eq!(k_term(&t, &p).unwrap(), 0.0);
        assert_eq!(v_squared(&t, &p), i_term(&t, &p).powi(2));
    }

    #[test]
    fn magnitude_k_term_is_an_error() {
        let t = Triad::from_magnitudes(1.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(k_term(&t, &params(0.1)).is_err());
        assert!(Triad::from_magnitudes(5.0, 1.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn degenerate_triangle_has_no_k() {
        let t = Triad::from_magnitudes(3.0, 1.0, 2.0, 1.0, 2.0).unwrap();
        let e = Coupling::new(params(0.2)).element(&t);
        assert_eq!(e.k, 0.0);
    }

    #[test]
    fn heron_equilateral() {
        assert!((heron(1.0, 1.0, 1.0) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
