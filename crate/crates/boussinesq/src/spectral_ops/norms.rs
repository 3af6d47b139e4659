use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use crate::error::Result;

/// `Σ w(ξ)|f̂(ξ)|²` scaled so that `w ≡ 1` gives `∫|f|²`.
pub fn weighted_sq(grid: &Grid, spec: &[Complex64], w: impl Fn(f64) -> f64) -> f64 {
    let scale = grid.length().powi(grid.dim() as i32) / (grid.len() as f64).powi(2);
    let sum: f64 = spec.iter().enumerate().map(|(m, z)| w(grid.xi2(m)) * z.norm_sqr()).sum();
    sum * scale
}

/// Squared `H^s` norm of a spectrum.
pub fn hs_sq(grid: &Grid, spec: &[Complex64], s: f64) -> f64 {
    weighted_sq(grid, spec, |k2| (1.0 + k2).powf(s))
}

/// Squared `X^s_{ε^k}` norm: `|f|²_{H^s} + ε^k |f|²_{H^{s+k}}`.
pub fn xsk_sq(grid: &Grid, spec: &[Complex64], s: f64, k: u32, eps: f64) -> f64 {
    let ek = eps.powi(k as i32);
    weighted_sq(grid, spec, |k2| (1.0 + k2).powf(s) + ek * (1.0 + k2).powf(s + k as f64))
}

pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64> {
    f.check_finite()?;
    Ok(hs_sq(f.grid(), &f.spectrum(), s).sqrt())
}

pub fn xsk_norm(f: &Field, s: f64, k: u32, eps: f64) -> Result<f64> {
    f.check_finite()?;
    Ok(xsk_sq(f.grid(), &f.spectrum(), s, k, eps).sqrt())
}

/// Real `L²` inner product `(f | g)` of two spectra.
pub fn inner(grid: &Grid, f: &[Complex64], g: &[Complex64]) -> f64 {
    let scale = grid.length().powi(grid.dim() as i32) / (grid.len() as f64).powi(2);
    f.iter().zip(g).map(|(a, b)| (a * b.conj()).re).sum::<f64>() * scale
}

/// Grid quadrature `∫ f`.
pub fn integral(grid: &Grid, values: &[f64]) -> f64 {
    values.iter().sum::<f64>() * grid.cell()
}

/// 2/3-rule truncation of a field.
pub fn dealias(f: &Field) -> Field {
    let mut spec = f.spectrum();
    f.grid().dealias(&mut spec);
    Field::from_spectrum(f.grid(), &spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_l2_norm_is_sqrt_pi() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let f = Field::from_fn(&g, |x, _| x.cos());
        assert!((sobolev_norm(&f, 0.0).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert_eq!(sobolev_norm(&Field::zeros(&g), 1.5).unwrap(), 0.0);
    }

    #[test]
    fn xsk_matches_quadrature() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let eps = 0.3;
        let f = Field::from_fn(&g, |x, _| x.cos());
        // ∫f² + ε∫(f² + f_x²), by trapezoid quadrature.
        let q: f64 = (0..64)
            .map(|m| {
                let x = g.point(m)[0];
                x.cos().powi(2) + eps * (x.cos().powi(2) + x.sin().powi(2))
            })
            .sum::<f64>()
            * g.dx();
        assert!((xsk_norm(&f, 0.0, 1, eps).unwrap() - q.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn dealias_behaviour() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let low = Field::from_fn(&g, |x, _| (3.0 * x).sin() + (10.0 * x).cos());
        assert!(dealias(&low).sup_dist(&low) < 1e-14);
        let nyq = Field::from_fn(&g, |x, _| (16.0 * x).cos());
        assert!(dealias(&nyq).max_abs() < 1e-14);
        let mixed = Field::from_fn(&g, |x, _| (3.0 * x).sin() + (12.0 * x).cos());
        let once = dealias(&mixed);
        assert!(dealias(&once).sup_dist(&once) < 1e-15);
        assert!(once.sup_dist(&Field::from_fn(&g, |x, _| (3.0 * x).sin())) < 1e-14);
    }
}
