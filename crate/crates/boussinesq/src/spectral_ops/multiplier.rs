use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

type Symbol = dyn Fn([f64; 2]) -> Complex64 + Send + Sync;

/// Fourier multiplier `f ↦ F⁻¹[m(ξ) f̂(ξ)]`.
#[derive(Clone)]
pub struct MultiplierOp {
    name: String,
    symbol: Arc<Symbol>,
    real_to_real: bool,
    dim: Option<usize>,
}

impl fmt::Debug for MultiplierOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierOp")
            .field("name", &self.name)
            .field("real_to_real", &self.real_to_real)
            .finish()
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn norm(xi: [f64; 2]) -> f64 {
    xi[0].hypot(xi[1])
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} must be positive, got {v}")))
    }
}

fn nonnegative(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} must be non-negative, got {v}")))
    }
}

impl MultiplierOp {
    /// Custom multiplier. `real_to_real` asserts `m(-ξ) = conj(m(ξ))`.
    pub fn new(
        name: impl Into<String>,
        real_to_real: bool,
        symbol: impl Fn([f64; 2]) -> Complex64 + Send + Sync + 'static,
    ) -> MultiplierOp {
        MultiplierOp { name: name.into(), symbol: Arc::new(symbol), real_to_real, dim: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_real_to_real(&self) -> bool {
        self.real_to_real
    }

    pub fn symbol(&self, xi: [f64; 2]) -> Complex64 {
        (self.symbol)(xi)
    }

    /// Product of symbols: applying the result equals applying `other` then `self`.
    pub fn compose(&self, other: &MultiplierOp) -> MultiplierOp {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        MultiplierOp {
            name: format!("{}*{}", self.name, other.name),
            symbol: Arc::new(move |xi| a(xi) * b(xi)),
            real_to_real: self.real_to_real && other.real_to_real,
            dim: self.dim.or(other.dim),
        }
    }

    /// Symbol values on every mode of `grid`.
    ///
    /// For real-to-real operators the table is averaged with the conjugate
    /// of the mirrored mode, which only changes Nyquist entries and keeps
    /// outputs of real fields real.
    pub fn table(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        if let Some(d) = self.dim {
            if grid.dim() != d {
                return Err(Error::Dimension(format!(
                    "`{}` needs a {d}D grid, got {}D",
                    self.name,
                    grid.dim()
                )));
            }
        }
        let raw: Vec<Complex64> = (0..grid.len()).map(|m| self.symbol(grid.xi(m))).collect();
        if let Some(mode) = raw.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::SymbolDomain { op: self.name.clone(), mode });
        }
        if !self.real_to_real {
            return Ok(raw);
        }
        Ok((0..grid.len())
            .map(|m| {
                let r = grid.mirror(m);
                if r == m || grid.xi(r) != grid.xi(m).map(|v| -v) {
                    0.5 * (raw[m] + raw[r].conj())
                } else {
                    raw[m]
                }
            })
            .collect())
    }
}

/// Apply `op` to a real field and return the real part of the result.
pub fn apply_multiplier(op: &MultiplierOp, f: &Field) -> Result<Field> {
    f.check_finite()?;
    let table = op.table(f.grid())?;
    let mut spec = f.spectrum();
    for (z, m) in spec.iter_mut().zip(&table) {
        *z *= m;
    }
    Ok(Field::from_spectrum(f.grid(), &spec))
}

/// Apply `op` to a spectrum in place.
pub fn apply_spectral(op: &MultiplierOp, grid: &Grid, spec: &mut [Complex64]) -> Result<()> {
    if spec.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidField("non-finite spectrum".into()));
    }
    let table = op.table(grid)?;
    for (z, m) in spec.iter_mut().zip(&table) {
        *z *= m;
    }
    Ok(())
}

pub fn identity() -> MultiplierOp {
    MultiplierOp::new("identity", true, |_| c(1.0))
}

/// `J_ε = (1 - εΔ)^{1/2}`.
pub fn j_eps(eps: f64) -> Result<MultiplierOp> {
    positive("eps", eps)?;
    Ok(MultiplierOp::new("j_eps", true, move |xi| {
        c((1.0 + eps * (xi[0] * xi[0] + xi[1] * xi[1])).sqrt())
    }))
}

/// `J_ε⁻¹`.
pub fn j_eps_inv(eps: f64) -> Result<MultiplierOp> {
    positive("eps", eps)?;
    Ok(MultiplierOp::new("j_eps_inv", true, move |xi| {
        c(1.0 / (1.0 + eps * (xi[0] * xi[0] + xi[1] * xi[1])).sqrt())
    }))
}

/// `(1 - coef Δ)⁻¹`.
pub fn helmholtz_inv(coef: f64) -> Result<MultiplierOp> {
    nonnegative("helmholtz coefficient", coef)?;
    Ok(MultiplierOp::new("helmholtz_inv", true, move |xi| {
        c(1.0 / (1.0 + coef * (xi[0] * xi[0] + xi[1] * xi[1])))
    }))
}

/// Skew operator with symbol `iξ / ((1+εξ²)^{1/2} + ε^{1/2}|ξ|)`.
pub fn r_eps(eps: f64) -> Result<MultiplierOp> {
    positive("eps", eps)?;
    let mut op = MultiplierOp::new("r_eps", true, move |xi| {
        let k = xi[0];
        Complex64::new(0.0, k / ((1.0 + eps * k * k).sqrt() + eps.sqrt() * k.abs()))
    });
    op.dim = Some(1);
    Ok(op)
}

/// Hilbert transform, symbol `-i sign(ξ₁)`, zero at the origin.
pub fn hilbert() -> MultiplierOp {
    MultiplierOp::new("hilbert", true, |xi| {
        if xi[0] == 0.0 {
            c(0.0)
        } else {
            Complex64::new(0.0, -xi[0].signum())
        }
    })
}

/// Riesz transform `R_j`, symbol `iξ_j/|ξ|`, zero at the origin.
pub fn riesz(axis: usize) -> Result<MultiplierOp> {
    if axis != 1 && axis != 2 {
        return Err(Error::Parameter(format!("riesz axis must be 1 or 2, got {axis}")));
    }
    let a = axis - 1;
    let mut op = MultiplierOp::new(format!("riesz{axis}"), true, move |xi| {
        let r = norm(xi);
        if r == 0.0 {
            c(0.0)
        } else {
            Complex64::new(0.0, xi[a] / r)
        }
    });
    op.dim = Some(2);
    Ok(op)
}

fn tanh_ratio(z: f64) -> f64 {
    if z < 1e-4 {
        1.0 - z * z / 3.0 + 2.0 * z.powi(4) / 15.0
    } else {
        z.tanh() / z
    }
}

/// `T_ε = tanh(√ε|D|)/(√ε|D|)`.
pub fn t_eps(eps: f64) -> Result<MultiplierOp> {
    positive("eps", eps)?;
    Ok(MultiplierOp::new("t_eps", true, move |xi| c(tanh_ratio(eps.sqrt() * norm(xi)))))
}

/// `P_ε = (1 + βε|D|²)^{1/2} T_ε`.
pub fn p_eps(eps: f64, beta: f64) -> Result<MultiplierOp> {
    positive("eps", eps)?;
    nonnegative("beta", beta)?;
    Ok(MultiplierOp::new("p_eps", true, move |xi| {
        let r = norm(xi);
        c((1.0 + beta * eps * r * r).sqrt() * tanh_ratio(eps.sqrt() * r))
    }))
}

/// Cutoff profile: 1 on `|s| <= 1/2`, 0 on `|s| >= 1`.
pub fn bump(s: f64) -> f64 {
    let s = s.abs();
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let t = 2.0 * s - 1.0;
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Mollifier `J_δ`, symbol `φ(δ|ξ|)`.
pub fn mollifier(delta: f64) -> Result<MultiplierOp> {
    positive("delta", delta)?;
    Ok(MultiplierOp::new("mollifier", true, move |xi| c(bump(delta * norm(xi)))))
}

/// `Λ^s = (1 - Δ)^{s/2}`.
pub fn lambda_s(s: f64) -> MultiplierOp {
    MultiplierOp::new("lambda_s", true, move |xi| {
        c((1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powf(0.5 * s))
    })
}
