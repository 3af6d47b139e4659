use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

struct Inner {
    dim: usize,
    n: usize,
    length: f64,
    k: Vec<f64>,
    /// Wavenumbers with the Nyquist entry zeroed, used for odd-order derivatives.
    k_odd: Vec<f64>,
    keep: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Periodic grid with `n` points per axis on a box of side `length`.
///
/// Values are stored row-major: index `j * n + i` holds the point
/// `(x_i, y_j)`, so axis 0 runs fastest. In one dimension the index is `i`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<Inner>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.inner.dim)
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim
                && self.inner.n == other.inner.n
                && self.inner.length == other.inner.length)
    }
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Grid> {
        if dim != 1 && dim != 2 {
            return Err(Error::Dimension(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Parameter(format!("box length must be positive, got {length}")));
        }
        let scale = 2.0 * PI / length;
        let k: Vec<f64> = (0..n)
            .map(|j| {
                let s = if j < n / 2 { j as isize } else { j as isize - n as isize };
                scale * s as f64
            })
            .collect();
        let mut k_odd = k.clone();
        k_odd[n / 2] = 0.0;
        // 2/3 rule: keep |j| <= n/3 on every axis.
        let cut = n / 3;
        let keep_axis: Vec<bool> = (0..n)
            .map(|j| {
                let s = if j < n / 2 { j } else { n - j };
                s <= cut && j != n / 2
            })
            .collect();
        let total = n.pow(dim as u32);
        let keep = (0..total)
            .map(|m| {
                if dim == 1 {
                    keep_axis[m]
                } else {
                    keep_axis[m % n] && keep_axis[m / n]
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Grid {
            inner: Arc::new(Inner { dim, n, length, k, k_odd, keep, forward, inverse }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    pub fn dx(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    /// Total number of grid points (`n` or `n²`).
    pub fn len(&self) -> usize {
        self.inner.n.pow(self.inner.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis wavenumber table in signed FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.k
    }

    /// Cell volume `dx^dim`.
    pub fn cell(&self) -> f64 {
        self.dx().powi(self.inner.dim as i32)
    }

    /// Wavevector of flattened mode `m`; the second entry is 0 in 1D.
    pub fn xi(&self, m: usize) -> [f64; 2] {
        let n = self.inner.n;
        if self.inner.dim == 1 {
            [self.inner.k[m], 0.0]
        } else {
            [self.inner.k[m % n], self.inner.k[m / n]]
        }
    }

    /// Wavevector with Nyquist components zeroed.
    pub fn xi_odd(&self, m: usize) -> [f64; 2] {
        let n = self.inner.n;
        if self.inner.dim == 1 {
            [self.inner.k_odd[m], 0.0]
        } else {
            [self.inner.k_odd[m % n], self.inner.k_odd[m / n]]
        }
    }

    pub fn xi2(&self, m: usize) -> f64 {
        let [a, b] = self.xi(m);
        a * a + b * b
    }

    /// Index of the mode carrying wavevector `-xi(m)`.
    pub fn mirror(&self, m: usize) -> usize {
        let n = self.inner.n;
        let flip = |j: usize| (n - j) % n;
        if self.inner.dim == 1 {
            flip(m)
        } else {
            flip(m / n) * n + flip(m % n)
        }
    }

    /// True when mode `m` survives the 2/3 rule.
    pub fn kept(&self, m: usize) -> bool {
        self.inner.keep[m]
    }

    /// Largest resolved |ξ| on one axis.
    pub fn nyquist(&self) -> f64 {
        PI * self.inner.n as f64 / self.inner.length
    }

    /// Coordinates of grid point `m`.
    pub fn point(&self, m: usize) -> [f64; 2] {
        let n = self.inner.n;
        let dx = self.dx();
        if self.inner.dim == 1 {
            [m as f64 * dx, 0.0]
        } else {
            [(m % n) as f64 * dx, (m / n) as f64 * dx]
        }
    }

    /// Unnormalized forward transform of a real array.
    pub fn fft(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_in_place(&mut buf);
        buf
    }

    /// Unnormalized forward transform of a complex array, in place.
    pub fn fft_in_place(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.inner.forward);
    }

    /// Normalized inverse transform, in place.
    pub fn ifft_in_place(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.inner.inverse);
        let scale = 1.0 / self.len() as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    /// Inverse transform keeping the real part.
    pub fn real(&self, spec: &[Complex64]) -> Vec<f64> {
        let mut buf = spec.to_vec();
        self.ifft_in_place(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Inverse transform keeping real and imaginary parts.
    pub fn complex(&self, spec: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spec.to_vec();
        self.ifft_in_place(&mut buf);
        buf
    }

    /// Zero every mode outside the 2/3 band.
    pub fn dealias(&self, spec: &mut [Complex64]) {
        for (z, &keep) in spec.iter_mut().zip(&self.inner.keep) {
            if !keep {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Spectrum of `∂_axis f`.
    pub fn diff(&self, spec: &[Complex64], axis: usize) -> Vec<Complex64> {
        spec.iter()
            .enumerate()
            .map(|(m, &z)| z * Complex64::new(0.0, self.xi_odd(m)[axis]))
            .collect()
    }

    /// Spectrum of `Δf`.
    pub fn laplacian(&self, spec: &[Complex64]) -> Vec<Complex64> {
        spec.iter().enumerate().map(|(m, &z)| -z * self.xi2(m)).collect()
    }

    fn transform(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.len(), "buffer does not match grid size");
        let n = self.inner.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(buf, &mut scratch);
        if self.inner.dim == 2 {
            transpose(buf, n);
            plan.process_with_scratch(buf, &mut scratch);
            transpose(buf, n);
        }
    }
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for j in 0..n {
        for i in (j + 1)..n {
            buf.swap(j * n + i, i * n + j);
        }
    }
}
