use super::calc::{add_to, field, mul, Arr, Calc};
use crate::error::{Error, Result};
use crate::spectral_ops::{apply_multiplier, j_eps, Field, Grid};
use crate::systems::{Abcd, CaseParams, Evolution, State};

/// `η̃ = (1 − εΔ)η`; the velocity is unchanged.
pub fn tilde_eta_transform(s: &State, eps: f64) -> Result<State> {
    s.check_finite()?;
    let j2 = j_eps(eps)?.compose(&j_eps(eps)?);
    State::new(apply_multiplier(&j2, &s.eta)?, s.vel.clone(), s.time)
}

/// Inverse of [`tilde_eta_transform`].
pub fn tilde_eta_inverse(s: &State, eps: f64) -> Result<State> {
    s.check_finite()?;
    let h = crate::spectral_ops::helmholtz_inv(eps)?;
    State::new(apply_multiplier(&h, &s.eta)?, s.vel.clone(), s.time)
}

/// Parameters `(a,b,c,d) = (−1,0,0,0)` of the leading-order system in `(η̃, u)`.
pub fn tilde_leading_params(eps: f64) -> CaseParams {
    CaseParams::abcd(-1.0, 0.0, 0.0, 0.0, eps, 4.0 / 3.0)
}

/// The `ε²` source in the `η̃` equation, `ε²(Δ∇·(ηu) − ∇·(uΔη))` with
/// `η = J_ε⁻²η̃`. In 1D this is `ε²(2η_xx u_x + 3η_x u_xx + η u_xxx)`.
pub fn tilde_remainder(s: &State, eps: f64) -> Result<Field> {
    let grid = s.grid();
    let eta = tilde_eta_inverse(s, eps)?.eta;
    let c = Calc::new(grid);
    let u: Vec<Arr> = s.vel.iter().map(|f| f.values().to_vec()).collect();
    let e = eta.values();
    let flux: Vec<Arr> = u.iter().map(|ui| mul(e, ui)).collect();
    let lap_e = c.lap(e);
    let flux2: Vec<Arr> = u.iter().map(|ui| mul(&lap_e, ui)).collect();
    let mut r = c.lap(&c.div(&flux));
    add_to(&mut r, -1.0, &c.div(&flux2));
    Ok(field(grid, r.into_iter().map(|x| eps * eps * x).collect()))
}

/// Right-hand side of the `c = −1` system in the unknowns `(η̃, u)`.
///
/// With `keep_remainder = false` this is exactly the `a = −1` system.
pub fn rhs_tilde_eta(s: &State, eps: f64, keep_remainder: bool) -> Result<State> {
    s.check_finite()?;
    let grid: &Grid = s.grid();
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let sys = Abcd::new_unchecked(grid, tilde_leading_params(eps)).with_dealias(false);
    let mut d = State::from_modes(grid, &sys.rhs(&s.to_modes())?, s.time);
    if keep_remainder {
        d.eta = d.eta.axpy(1.0, &tilde_remainder(s, eps)?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::rhs_abcd_1d;
    use std::f64::consts::PI;

    #[test]
    fn tilde_of_cosine() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let s = State::new(Field::from_fn(&g, |x, _| x.cos()), vec![Field::zeros(&g)], 0.0).unwrap();
        let t = tilde_eta_transform(&s, 1.0).unwrap();
        assert!(t.eta.sup_dist(&Field::from_fn(&g, |x, _| 2.0 * x.cos())) < 1e-14);
        assert!(tilde_eta_inverse(&t, 1.0).unwrap().sup_dist(&s) < 1e-14);
    }

    #[test]
    fn one_dimensional_remainder_formula() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let eps = 0.3;
        let eta = |x: f64| 0.2 * x.sin() + 0.1 * (2.0 * x).cos();
        let s0 = State::new(Field::from_fn(&g, |x, _| eta(x)), vec![Field::from_fn(&g, |x, _| (3.0 * x).cos())], 0.0).unwrap();
        let s = tilde_eta_transform(&s0, eps).unwrap();
        let r = tilde_remainder(&s, eps).unwrap();
        let want = Field::from_fn(&g, |x, _| {
            let (e1, e2) = (0.2 * x.cos() - 0.2 * (2.0 * x).sin(), -0.2 * x.sin() - 0.4 * (2.0 * x).cos());
            let (u1, u2, u3) = (-3.0 * (3.0 * x).sin(), -9.0 * (3.0 * x).cos(), 27.0 * (3.0 * x).sin());
            eps * eps * (2.0 * e2 * u1 + 3.0 * e1 * u2 + eta(x) * u3)
        });
        assert!(r.sup_dist(&want) < 1e-12);
    }

    #[test]
    fn dropped_remainder_is_a_neg_system() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let s = State::new(Field::from_fn(&g, |x, _| 0.1 * x.cos()), vec![Field::from_fn(&g, |x, _| x.sin())], 0.0).unwrap();
        let a = rhs_tilde_eta(&s, 0.1, false).unwrap();
        // rhs_abcd_1d dealiases; the data here are band-limited well inside the 2/3 band.
        let b = rhs_abcd_1d(&tilde_leading_params(0.1), &s).unwrap();
        assert!(a.sup_dist(&b) < 1e-12);
    }
}
