use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::Domain;

/// Axis wavenumbers with the Nyquist entry zeroed, so that odd-order
/// derivative symbols stay antisymmetric on real fields.
fn wavenumbers(n: usize, len: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if n.is_multiple_of(2) && i == n / 2 {
                return 0.0;
            }
            let j = if i <= n / 2 {
                i as f64
            } else {
                i as f64 - n as f64
            };
            2.0 * PI * j / len
        })
        .collect()
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

const PAR_THRESHOLD: usize = 1 << 14;

/// FFT plans and derivative symbols for one periodic domain.
///
/// Layout is row-major with ρ fastest: index = (ix ny + iy) nz + iz.
pub struct Spectral {
    n: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
    kx: Vec<f64>,
    ky: Vec<f64>,
    kz: Vec<f64>,
    band: Option<Vec<bool>>,
}

impl Spectral {
    /// `band_horizontal` keeps horizontal modes with |j| <= (n - 1) / 4 on each axis.
    pub fn new(domain: &Domain, band_horizontal: bool) -> Self {
        let n = domain.n();
        let len = domain.len();
        let mut planner = FftPlanner::new();
        let forward = [0, 1, 2].map(|a| planner.plan_fft_forward(n[a]));
        let inverse = [0, 1, 2].map(|a| planner.plan_fft_inverse(n[a]));
        let band = band_horizontal.then(|| {
            let kx_max = ((n[0] as i64) - 1) / 4;
            let ky_max = ((n[1] as i64) - 1) / 4;
            let mut mask = vec![false; n[0] * n[1] * n[2]];
            for ix in 0..n[0] {
                for iy in 0..n[1] {
                    let keep = signed_index(ix, n[0]).abs() <= kx_max
                        && signed_index(iy, n[1]).abs() <= ky_max;
                    for iz in 0..n[2] {
                        mask[(ix * n[1] + iy) * n[2] + iz] = keep;
                    }
                }
            }
            mask
        });
        Self {
            n,
            forward,
            inverse,
            kx: wavenumbers(n[0], len[0]),
            ky: wavenumbers(n[1], len[1]),
            kz: wavenumbers(n[2], len[2]),
            band,
        }
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_pass(&self, data: &mut [Complex64], axis: usize, inverse: bool) {
        let n = self.n;
        let len = n[axis];
        if len == 1 {
            return;
        }
        let plan = if inverse {
            &self.inverse[axis]
        } else {
            &self.forward[axis]
        };
        if axis == 2 {
            if data.len() >= PAR_THRESHOLD {
                data.par_chunks_mut(len).for_each(|line| plan.process(line));
            } else {
                plan.process(data);
            }
            return;
        }
        let stride = if axis == 0 { n[1] * n[2] } else { n[2] };
        let starts: Vec<usize> = if axis == 0 {
            (0..n[1] * n[2]).collect()
        } else {
            (0..n[0])
                .flat_map(|ix| (0..n[2]).map(move |iz| ix * n[1] * n[2] + iz))
                .collect()
        };
        let gather = |s: usize| -> Vec<Complex64> {
            let mut line: Vec<Complex64> = (0..len).map(|t| data[s + t * stride]).collect();
            plan.process(&mut line);
            line
        };
        let lines: Vec<Vec<Complex64>> = if data.len() >= PAR_THRESHOLD {
            starts.par_iter().map(|&s| gather(s)).collect()
        } else {
            starts.iter().map(|&s| gather(s)).collect()
        };
        for (s, line) in starts.into_iter().zip(lines) {
            for (t, v) in line.into_iter().enumerate() {
                data[s + t * stride] = v;
            }
        }
    }

    pub fn forward(&self, field: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = field.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for axis in 0..3 {
            self.axis_pass(&mut data, axis, false);
        }
        data
    }

    pub fn inverse_complex(&self, mut data: Vec<Complex64>) -> Vec<Complex64> {
        for axis in 0..3 {
            self.axis_pass(&mut data, axis, true);
        }
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
        data
    }

    pub fn inverse(&self, data: Vec<Complex64>) -> Vec<f64> {
        self.inverse_complex(data)
            .into_iter()
            .map(|z| z.re)
            .collect()
    }

    fn map_symbol(
        &self,
        mut hat: Vec<Complex64>,
        symbol: impl Fn(f64, f64, f64) -> Complex64,
    ) -> Vec<Complex64> {
        let n = self.n;
        for ix in 0..n[0] {
            for iy in 0..n[1] {
                let base = (ix * n[1] + iy) * n[2];
                for iz in 0..n[2] {
                    hat[base + iz] *= symbol(self.kx[ix], self.ky[iy], self.kz[iz]);
                }
            }
        }
        hat
    }

    fn apply(&self, field: &[f64], symbol: impl Fn(f64, f64, f64) -> Complex64) -> Vec<f64> {
        let hat = self.map_symbol(self.forward(field), symbol);
        self.inverse(hat)
    }

    /// (∂x f, ∂y f)
    pub fn grad(&self, field: &[f64]) -> [Vec<f64>; 2] {
        let hat = self.forward(field);
        let dx = self.map_symbol(hat.clone(), |kx, _, _| Complex64::new(0.0, kx));
        let dy = self.map_symbol(hat, |_, ky, _| Complex64::new(0.0, ky));
        [self.inverse(dx), self.inverse(dy)]
    }

    /// ∇⊥ f = (−∂y f, ∂x f)
    pub fn perp_grad(&self, field: &[f64]) -> [Vec<f64>; 2] {
        let [dx, dy] = self.grad(field);
        [dy.into_iter().map(|v| -v).collect(), dx]
    }

    pub fn div(&self, vx: &[f64], vy: &[f64]) -> Vec<f64> {
        let mut hat = self.map_symbol(self.forward(vx), |kx, _, _| Complex64::new(0.0, kx));
        let hy = self.map_symbol(self.forward(vy), |_, ky, _| Complex64::new(0.0, ky));
        hat.iter_mut().zip(hy).for_each(|(a, b)| *a += b);
        self.inverse(hat)
    }

    /// ∇⊥·v = −∂y vx + ∂x vy
    pub fn perp_div(&self, vx: &[f64], vy: &[f64]) -> Vec<f64> {
        let mut hat = self.map_symbol(self.forward(vx), |_, ky, _| Complex64::new(0.0, -ky));
        let hy = self.map_symbol(self.forward(vy), |kx, _, _| Complex64::new(0.0, kx));
        hat.iter_mut().zip(hy).for_each(|(a, b)| *a += b);
        self.inverse(hat)
    }

    /// Horizontal inverse Laplacian with the horizontal zero mode set to zero.
    pub fn inv_lap(&self, field: &[f64]) -> Vec<f64> {
        self.apply(field, |kx, ky, _| {
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / k2, 0.0)
            }
        })
    }

    /// Zero-mean antiderivative in ρ.
    pub fn antiderivative_rho(&self, field: &[f64]) -> Vec<f64> {
        self.apply(field, |_, _, kz| {
            if kz == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / kz)
            }
        })
    }

    /// Adjoint-squared antiderivative: symbol 1/m² (zero where m vanishes).
    pub fn antiderivative_gram(&self, field: &[f64]) -> Vec<f64> {
        self.apply(field, |_, _, kz| {
            if kz == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / (kz * kz), 0.0)
            }
        })
    }

    /// Gaussian low-pass with per-axis e-folding wavenumbers `kc`.
    pub fn smooth(&self, field: &[f64], kc: [f64; 3]) -> Vec<f64> {
        self.apply(field, |kx, ky, kz| {
            let r = (kx / kc[0]).powi(2) + (ky / kc[1]).powi(2) + (kz / kc[2]).powi(2);
            Complex64::new((-r).exp(), 0.0)
        })
    }

    /// Projection onto the retained band; identity when unbanded.
    pub fn project(&self, field: Vec<f64>) -> Vec<f64> {
        match &self.band {
            None => field,
            Some(mask) => {
                let mut hat = self.forward(&field);
                hat.iter_mut()
                    .zip(mask)
                    .filter(|(_, &keep)| !keep)
                    .for_each(|(z, _)| *z = Complex64::new(0.0, 0.0));
                self.inverse(hat)
            }
        }
    }

    /// Largest imaginary part after a round trip, relative to the largest real part.
    pub fn imaginary_residue(&self, field: &[f64]) -> f64 {
        let back = self.inverse_complex(self.forward(field));
        let re = back.iter().fold(0.0_f64, |a, z| a.max(z.re.abs()));
        let im = back.iter().fold(0.0_f64, |a, z| a.max(z.im.abs()));
        if re == 0.0 {
            im
        } else {
            im / re
        }
    }

    /// Complex coefficient of the lattice mode (jx, jy, jz) in the unnormalised forward transform.
    pub fn mode(&self, field: &[f64], j: [i64; 3]) -> Complex64 {
        let n = self.n;
        let idx = |a: usize| j[a].rem_euclid(n[a] as i64) as usize;
        let hat = self.forward(field);
        hat[(idx(0) * n[1] + idx(1)) * n[2] + idx(2)]
    }
}
