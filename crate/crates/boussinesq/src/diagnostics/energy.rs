use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral_ops::{hs_sq, integral, weighted_sq, xsk_sq, Grid};
use crate::systems::{CaseId, CaseParams, State};
use crate::transforms::{depth, Bundle, Calc};

const TOL: f64 = 1e-12;

fn zero(x: f64) -> bool {
    x.abs() <= TOL
}

/// `f̂ ↦ m(|ξ|²) f̂`, back in real space.
fn filtered(grid: &Grid, spec: &[Complex64], m: impl Fn(f64) -> f64) -> Vec<f64> {
    let s: Vec<Complex64> = spec.iter().enumerate().map(|(k, z)| z * m(grid.xi2(k))).collect();
    grid.real(&s)
}

fn l2_sq(grid: &Grid, a: &[f64]) -> f64 {
    integral(grid, &a.iter().map(|x| x * x).collect::<Vec<_>>())
}

fn weighted(grid: &Grid, w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    integral(grid, &w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).collect::<Vec<_>>())
}

fn pair(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    integral(grid, &a.iter().zip(b).map(|(a, b)| a * b).collect::<Vec<_>>())
}

/// `½∫(−cε|∇η|² − aε|∇u|² + η² + |u|² + εη|u|²)`, conserved when `b = d`.
pub fn hamiltonian(p: &CaseParams, s: &State) -> Result<f64> {
    let abcd = matches!(p.case_id, CaseId::Unassigned | CaseId::Registry(_));
    if !abcd || (p.b - p.d).abs() > TOL {
        return Err(Error::Unsupported(format!("no Hamiltonian for b = {}, d = {}", p.b, p.d)));
    }
    s.check_finite()?;
    let grid = s.grid();
    let eps = p.eps;
    let eta = s.eta.values();
    let grad_sq = |spec: &[Complex64]| weighted_sq(grid, spec, |k2| k2);
    let mut h = -p.c * eps * grad_sq(&s.eta.spectrum()) + l2_sq(grid, eta);
    for u in &s.vel {
        h += -p.a * eps * grad_sq(&u.spectrum()) + l2_sq(grid, u.values());
        h += eps * weighted(grid, eta, u.values(), u.values());
    }
    Ok(0.5 * h)
}

/// Symmetrized energy `E_s(U)` of the cases that come with a symmetrizer:
/// `b > 0` with `a = c = d = 0`; `d > 0` with `a = b = c = 0`; `a < 0` with
/// `b = c = d = 0`; and the BBM-type fifth-order system.
pub fn energy_symmetrized(p: &CaseParams, s: &State, sorder: f64) -> Result<f64> {
    s.check_finite()?;
    let grid = s.grid();
    let eps = p.eps;
    let eta = s.eta.values();
    let h: Vec<f64> = eta.iter().map(|e| 1.0 + eps * e).collect();
    let lam = |k2: f64| (1.0 + k2).powf(0.5 * sorder);
    let es = s.eta.spectrum();
    let us: Vec<Vec<Complex64>> = s.vel.iter().map(|u| u.spectrum()).collect();
    let a_ = filtered(grid, &es, lam);
    let b_: Vec<Vec<f64>> = us.iter().map(|u| filtered(grid, u, lam)).collect();
    let u: Vec<&[f64]> = s.vel.iter().map(|f| f.values()).collect();
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    if p.case_id == CaseId::FifthOrder {
        if grid.dim() != 1 {
            return Err(Error::Dimension("fifth-order energy is one-dimensional".into()));
        }
        let (b1, d1) = match (p.ext.b1, p.ext.d1) {
            (Some(b1), Some(d1)) => (b1, d1),
            _ => return Err(Error::MissingCoefficients("b1, d1".into())),
        };
        let m1 = filtered(grid, &es, |k2| lam(k2) * (1.0 + b * eps * k2 + b1 * eps * eps * k2 * k2));
        let m2 = filtered(grid, &us[0], |k2| lam(k2) * (1.0 + d * eps * k2 + d1 * eps * eps * k2 * k2));
        let axx = filtered(grid, &es, |k2| -k2 * lam(k2));
        let bxx = filtered(grid, &us[0], |k2| -k2 * lam(k2));
        let s1: Vec<f64> = (0..grid.len()).map(|i| a_[i] + c * eps * axx[i] + eps * eps * eta[i] * axx[i]).collect();
        let s2: Vec<f64> = (0..grid.len())
            .map(|i| h[i] * b_[0][i] + a * eps * bxx[i] + (a - 1.0 / 3.0) * eps * eps * eta[i] * bxx[i])
            .collect();
        return Ok(pair(grid, &m1, &s1) + pair(grid, &m2, &s2));
    }
    if !matches!(p.case_id, CaseId::Unassigned | CaseId::Registry(_)) {
        return Err(Error::Unsupported("no symmetrizer for this system".into()));
    }
    if b > TOL && zero(a) && zero(c) && zero(d) {
        let ma = filtered(grid, &es, |k2| lam(k2) * (1.0 + b * eps * k2));
        let mut e = l2_sq(grid, &ma);
        for (ui, bi) in us.iter().zip(&b_) {
            let mb = filtered(grid, ui, |k2| lam(k2) * (1.0 + b * eps * k2));
            e += weighted(grid, &h, &mb, bi);
        }
        return Ok(e);
    }
    let udotb: Vec<f64> = (0..grid.len()).map(|i| u.iter().zip(&b_).map(|(uk, bk)| uk[i] * bk[i]).sum()).collect();
    if a < -TOL && zero(b) && zero(c) && zero(d) {
        // S = [[1, εuᵀ], [εu, 1 + εη + aεΔ]]
        let mut e = pair(grid, &a_, &a_) + eps * pair(grid, &a_, &udotb);
        for (k, (ui, bi)) in us.iter().zip(&b_).enumerate() {
            let lap_b = filtered(grid, ui, |k2| -k2 * lam(k2));
            e += eps * weighted(grid, u[k], bi, &a_);
            e += weighted(grid, &h, bi, bi) + a * eps * pair(grid, bi, &lap_b);
        }
        return Ok(e);
    }
    if d > TOL && zero(a) && zero(b) && zero(c) {
        // ((1 − dεΔ)Λ^sU | S_U Λ^sU)
        let ma = filtered(grid, &es, |k2| lam(k2) * (1.0 + d * eps * k2));
        let mb: Vec<Vec<f64>> = us.iter().map(|ui| filtered(grid, ui, |k2| lam(k2) * (1.0 + d * eps * k2))).collect();
        let lap_b: Vec<Vec<f64>> = us.iter().map(|ui| filtered(grid, ui, |k2| -k2 * lam(k2))).collect();
        let udotlap: Vec<f64> =
            (0..grid.len()).map(|i| u.iter().zip(&lap_b).map(|(uk, lk)| uk[i] * lk[i]).sum()).collect();
        let mut e = pair(grid, &ma, &a_) + eps * pair(grid, &ma, &udotb);
        for k in 0..u.len() {
            let row: Vec<f64> = (0..grid.len())
                .map(|i| {
                    eps * u[k][i] * a_[i] + h[i] * mb[k][i] + d * eps.powi(3) * u[k][i] * udotlap[i]
                })
                .collect();
            e += pair(grid, &mb[k], &row);
        }
        return Ok(e);
    }
    Err(Error::Unsupported(format!("no symmetrizer for (a,b,c,d) = ({a}, {b}, {c}, {d})")))
}

/// Quasilinear energy `E` and total energy `𝓔` of the `(η, v)` system.
///
/// One dimension needs the bundle through `∂_t²`, two dimensions through `∂_t³`.
pub fn energy_quasilinear(b: &Bundle) -> Result<(f64, f64)> {
    let grid = b.grid();
    let dim = grid.dim();
    let levels = dim; // derivative levels in E beyond E₀
    b.require(dim + 1)?;
    let eps = b.eps;
    let c = Calc::new(grid);
    let eta = |k: usize| b.eta[k].values();
    let (h, w) = depth(eps, eta(0))?;
    let grad_sq = |f: &[f64]| c.grad(f).iter().map(|g| l2_sq(grid, g)).sum::<f64>();
    let grad_w = |f: &[f64], wt: &[f64]| c.grad(f).iter().map(|g| weighted(grid, wt, g, g)).sum::<f64>();
    let v_w = |k: usize| b.v[k].iter().map(|f| weighted(grid, &w, f.values(), f.values())).sum::<f64>();
    let mut e = l2_sq(grid, eta(0)) + eps * grad_sq(eta(0)) + v_w(0);
    for k in 0..levels {
        let n = eta(k);
        let lap = c.lap(n);
        e += l2_sq(grid, eta(k + 1)) + eps * grad_sq(eta(k + 1));
        e += grad_w(n, &h) + 2.0 * eps * weighted(grid, &h, &lap, &lap) + eps * eps * grad_w(&lap, &h);
        let vk: Vec<Vec<f64>> = b.v[k].iter().map(|f| f.values().to_vec()).collect();
        let div = c.div(&vk);
        e += v_w(k + 1) + l2_sq(grid, &div) + eps * grad_sq(&div);
    }
    let x = |f: &[f64], s: f64, k: u32| xsk_sq(grid, &grid.fft(f), s, k, eps);
    // ∂_t^j η ∈ X^{m-j}_{ε^{m-j+1}}, ∂_t^j v ∈ X^{m-j}_{ε^{m-j}} (plain L² at j = m)
    let m = dim as u32 + 1;
    let mut total = 0.0;
    for j in 0..=m {
        let r = m - j;
        total += x(eta(j as usize), r as f64, r + 1);
        for f in &b.v[j as usize] {
            total += if r == 0 { hs_sq(grid, &f.spectrum(), 0.0) } else { x(f.values(), r as f64, r) };
        }
    }
    Ok((e, total))
}

/// `min(1 + εη) − H`.
pub fn check_noncavitation(s: &State, eps: f64, threshold: f64) -> f64 {
    s.eta.values().iter().fold(f64::INFINITY, |m, e| m.min(1.0 + eps * e)) - threshold
}

/// Mean of `η`.
pub fn mass(s: &State) -> f64 {
    s.eta.mean()
}
