//! Pointwise products and spectral derivatives on real arrays, without truncation.

use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};

pub(crate) type Arr = Vec<f64>;

pub(crate) struct Calc<'a> {
    pub grid: &'a Grid,
}

impl<'a> Calc<'a> {
    pub fn new(grid: &'a Grid) -> Calc<'a> {
        Calc { grid }
    }

    pub fn zeros(&self) -> Arr {
        vec![0.0; self.grid.len()]
    }

    pub fn d(&self, f: &[f64], axis: usize) -> Arr {
        self.grid.real(&self.grid.diff(&self.grid.fft(f), axis))
    }

    /// Repeated derivative along one axis.
    pub fn dn(&self, f: &[f64], axis: usize, k: usize) -> Arr {
        let mut s = self.grid.fft(f);
        for _ in 0..k {
            s = self.grid.diff(&s, axis);
        }
        self.grid.real(&s)
    }

    pub fn lap(&self, f: &[f64]) -> Arr {
        self.grid.real(&self.grid.laplacian(&self.grid.fft(f)))
    }

    pub fn grad(&self, f: &[f64]) -> Vec<Arr> {
        let s = self.grid.fft(f);
        (0..self.grid.dim()).map(|a| self.grid.real(&self.grid.diff(&s, a))).collect()
    }

    pub fn div(&self, comps: &[Arr]) -> Arr {
        let mut out = self.zeros();
        for (a, c) in comps.iter().enumerate() {
            add_to(&mut out, 1.0, &self.d(c, a));
        }
        out
    }
}

pub(crate) fn mul(a: &[f64], b: &[f64]) -> Arr {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

pub(crate) fn mul3(a: &[f64], b: &[f64], c: &[f64]) -> Arr {
    a.iter().zip(b).zip(c).map(|((x, y), z)| x * y * z).collect()
}

pub(crate) fn scaled(s: f64, a: &[f64]) -> Arr {
    a.iter().map(|x| s * x).collect()
}

/// `out += s * a`.
pub(crate) fn add_to(out: &mut [f64], s: f64, a: &[f64]) {
    for (o, x) in out.iter_mut().zip(a) {
        *o += s * x;
    }
}

pub(crate) fn dot(a: &[Arr], b: &[Arr]) -> Arr {
    let mut out = vec![0.0; a[0].len()];
    for (x, y) in a.iter().zip(b) {
        for ((o, p), q) in out.iter_mut().zip(x).zip(y) {
            *o += p * q;
        }
    }
    out
}

/// `1 + εη` and its reciprocal, with the cavitation check.
pub(crate) fn depth(eps: f64, eta: &[f64]) -> Result<(Arr, Arr)> {
    let h: Arr = eta.iter().map(|e| 1.0 + eps * e).collect();
    let min = h.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::Cavitation { min });
    }
    let w = h.iter().map(|x| 1.0 / x).collect();
    Ok((h, w))
}

pub(crate) fn field(grid: &Grid, a: Arr) -> Field {
    Field::new(grid, a).expect("array built on this grid")
}
