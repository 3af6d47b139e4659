use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Real scalar field sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid: grid.clone(), values })
    }

    pub fn zeros(grid: &Grid) -> Field {
        Field { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    /// Sample `f(x, y)` at the grid points (`y = 0` in 1D).
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Field {
        let values = (0..grid.len())
            .map(|m| {
                let [x, y] = grid.point(m);
                f(x, y)
            })
            .collect();
        Field { grid: grid.clone(), values }
    }

    /// Real part of the inverse transform of `spec`.
    pub fn from_spectrum(grid: &Grid, spec: &[Complex64]) -> Field {
        Field { grid: grid.clone(), values: grid.real(spec) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        self.grid.fft(&self.values)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidField("non-finite value".into()))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Field) -> Field {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + alpha * b).collect();
        Field { grid: self.grid.clone(), values }
    }

    /// Sup-norm distance to another field.
    pub fn sup_dist(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Cyclic shift by `s` points along axis 0 (and `t` along axis 1 in 2D).
    pub fn shifted(&self, s: usize, t: usize) -> Field {
        let n = self.grid.n();
        let values = (0..self.grid.len())
            .map(|m| {
                if self.grid.dim() == 1 {
                    self.values[(m + n - s % n) % n]
                } else {
                    let (i, j) = (m % n, m / n);
                    self.values[((j + n - t % n) % n) * n + (i + n - s % n) % n]
                }
            })
            .collect();
        Field { grid: self.grid.clone(), values }
    }
}
