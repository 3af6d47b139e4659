use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};

fn require_2d(u: &[Field]) -> Result<&Grid> {
    let grid = u.first().ok_or_else(|| Error::Dimension("empty vector field".into()))?.grid();
    if grid.dim() != 2 || u.len() != 2 {
        return Err(Error::Dimension("curl-free projection needs a 2D vector field".into()));
    }
    if u[1].grid() != grid {
        return Err(Error::GridMismatch("components on different grids".into()));
    }
    Ok(grid)
}

/// Project onto gradient fields: `û ← ξ(ξ·û)/|ξ|²`, mean kept.
pub fn curl_free_projection(u: &[Field]) -> Result<Vec<Field>> {
    let grid = require_2d(u)?;
    let s: Vec<Vec<Complex64>> = u.iter().map(Field::spectrum).collect();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; 2];
    for m in 0..grid.len() {
        let k = grid.xi_odd(m);
        let k2 = k[0] * k[0] + k[1] * k[1];
        if grid.xi(m) == [0.0, 0.0] {
            out[0][m] = s[0][m];
            out[1][m] = s[1][m];
        } else if k2 > 0.0 {
            let p = (k[0] * s[0][m] + k[1] * s[1][m]) / k2;
            out[0][m] = k[0] * p;
            out[1][m] = k[1] * p;
        }
    }
    Ok(out.iter().map(|z| Field::from_spectrum(grid, z)).collect())
}

/// `∂₁u₂ − ∂₂u₁`.
pub fn curl(u: &[Field]) -> Result<Field> {
    let grid = require_2d(u)?;
    let a = grid.diff(&u[1].spectrum(), 0);
    let b = grid.diff(&u[0].spectrum(), 1);
    let d: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(Field::from_spectrum(grid, &d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(2, 32, 2.0 * PI).unwrap()
    }

    #[test]
    fn gradients_pass_through() {
        let g = grid();
        // φ = sin x cos 2y
        let u = vec![
            Field::from_fn(&g, |x, y| x.cos() * (2.0 * y).cos()),
            Field::from_fn(&g, |x, y| -2.0 * x.sin() * (2.0 * y).sin()),
        ];
        let p = curl_free_projection(&u).unwrap();
        assert!(p[0].sup_dist(&u[0]) < 1e-13 && p[1].sup_dist(&u[1]) < 1e-13);
        assert!(curl(&u).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn rotations_vanish_and_idempotent() {
        let g = grid();
        // ψ = cos x sin y; u = (−ψ_y, ψ_x) plus a mean
        let u = vec![
            Field::from_fn(&g, |x, y| 0.5 - x.cos() * y.cos()),
            Field::from_fn(&g, |x, y| -x.sin() * y.sin()),
        ];
        let p = curl_free_projection(&u).unwrap();
        assert!(p[0].sup_dist(&Field::from_fn(&g, |_, _| 0.5)) < 1e-14);
        assert!(p[1].max_abs() < 1e-14);
        let q = curl_free_projection(&p).unwrap();
        assert!(q[0].sup_dist(&p[0]) < 1e-15 && q[1].sup_dist(&p[1]) < 1e-15);
    }

    #[test]
    fn rejects_1d() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        assert!(matches!(curl_free_projection(&[Field::zeros(&g)]), Err(Error::Dimension(_))));
    }
}
