use super::calc::{add_to, depth, dot, field, mul, mul3, scaled, Arr, Calc};
use super::eta_v::taylor_jets;
use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};
use crate::systems::State;

/// Time derivatives `∂_t^k η`, `∂_t^k v` for `k = 0..=order` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub eps: f64,
    pub time: f64,
    /// `eta[k] = ∂_t^k η`.
    pub eta: Vec<Field>,
    /// `v[k][i] = ∂_t^k vᵢ`.
    pub v: Vec<Vec<Field>>,
}

impl Bundle {
    pub fn new(eps: f64, time: f64, eta: Vec<Field>, v: Vec<Vec<Field>>) -> Result<Bundle> {
        if eta.is_empty() || eta.len() != v.len() {
            return Err(Error::Bundle(format!("{} η derivatives vs {} v derivatives", eta.len(), v.len())));
        }
        let grid = eta[0].grid();
        for (e, vk) in eta.iter().zip(&v) {
            if e.grid() != grid || vk.len() != grid.dim() || vk.iter().any(|f| f.grid() != grid) {
                return Err(Error::Bundle("inconsistent grids or component counts".into()));
            }
        }
        Ok(Bundle { eps, time, eta, v })
    }

    /// Exact time derivatives of the `(η, v)` flow through `order`, by
    /// repeated differentiation of the right-hand side.
    pub fn from_state(s: &State, eps: f64, order: usize) -> Result<Bundle> {
        let grid = s.grid();
        let j = taylor_jets(grid, eps, s, order)?;
        let mut fact = 1.0;
        let mut eta = Vec::new();
        let mut v = Vec::new();
        for k in 0..=order {
            if k > 0 {
                fact *= k as f64;
            }
            eta.push(field(grid, scaled(fact, &j.eta[k])));
            v.push(j.v[k].iter().map(|a| field(grid, scaled(fact, a))).collect());
        }
        Bundle::new(eps, s.time, eta, v)
    }

    /// Central differences over equally spaced samples `t₀ + (i − m)h`, centred on the middle one.
    ///
    /// Three samples give second-order derivatives through `∂_t²`; five
    /// samples give fourth-order `∂_t`, `∂_t²` and second-order `∂_t³`.
    pub fn from_samples(samples: &[State], h: f64, order: usize, eps: f64) -> Result<Bundle> {
        let weights: Vec<Vec<f64>> = match (samples.len(), order) {
            (3, o) if o <= 2 => vec![vec![0.0, 1.0, 0.0], vec![-0.5, 0.0, 0.5], vec![1.0, -2.0, 1.0]],
            (5, o) if o <= 3 => vec![
                vec![0.0, 0.0, 1.0, 0.0, 0.0],
                vec![1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
                vec![-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
                vec![-0.5, 1.0, 0.0, -1.0, 0.5],
            ],
            (n, o) => {
                return Err(Error::Bundle(format!("no central stencil with {n} samples for order {o}")));
            }
        };
        if !(h > 0.0) {
            return Err(Error::Bundle(format!("sample spacing must be positive, got {h}")));
        }
        let mid = &samples[samples.len() / 2];
        let grid = mid.grid();
        let dim = grid.dim();
        let combine = |k: usize, pick: &dyn Fn(&State) -> &Field| -> Field {
            let mut acc = vec![0.0; grid.len()];
            for (wt, s) in weights[k].iter().zip(samples) {
                add_to(&mut acc, *wt / h.powi(k as i32), pick(s).values());
            }
            field(grid, acc)
        };
        let mut eta = Vec::new();
        let mut v = Vec::new();
        for k in 0..=order {
            eta.push(combine(k, &|s: &State| &s.eta));
            v.push((0..dim).map(|i| combine(k, &|s: &State| &s.vel[i])).collect());
        }
        Bundle::new(eps, mid.time, eta, v)
    }

    pub fn order(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn grid(&self) -> &Grid {
        self.eta[0].grid()
    }

    pub(crate) fn require(&self, order: usize) -> Result<()> {
        if self.order() < order {
            return Err(Error::Bundle(format!("need derivatives through order {order}, have {}", self.order())));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Bundle(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }

    fn arrays(&self, k: usize) -> (Arr, Vec<Arr>) {
        (self.eta[k].values().to_vec(), self.v[k].iter().map(|f| f.values().to_vec()).collect())
    }
}

/// Residuals of both quasilinearized equations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasilinearResidual {
    pub res_f: Field,
    pub res_g: Vec<Field>,
}

impl QuasilinearResidual {
    pub fn sup(&self) -> f64 {
        self.res_g.iter().map(Field::max_abs).fold(self.res_f.max_abs(), f64::max)
    }
}

/// Left side minus source of the second-order-in-time equations for `η` and `v`.
///
/// Needs the bundle through `∂_t²`. On an exact solution both residuals vanish.
pub fn quasilinear_residual(b: &Bundle) -> Result<QuasilinearResidual> {
    b.require(2)?;
    let grid = b.grid();
    let c = Calc::new(grid);
    let eps = b.eps;
    let (eta, v) = b.arrays(0);
    let (eta_t, v_t) = b.arrays(1);
    let (eta_tt, v_tt) = b.arrays(2);
    let (h, w) = depth(eps, &eta)?;
    let (res_f, res_g) = if grid.dim() == 1 {
        let (v, v_t, v_tt) = (&v[0], &v_t[0], &v_tt[0]);
        let ex = c.d(&eta, 0);
        let exxx = c.dn(&eta, 0, 3);
        let vx = c.d(v, 0);
        let vw = mul(v, &w);
        let w2 = mul(&w, &w);
        // η equation
        let mut lf = eta_tt.clone();
        add_to(&mut lf, -1.0, &c.d(&mul(&h, &ex), 0));
        add_to(&mut lf, eps, &c.d(&mul(&h, &exxx), 0));
        add_to(&mut lf, 2.0 * eps, &mul(&vw, &c.d(&eta_t, 0)));
        let mut f = scaled(2.0 * eps, &mul3(&vx, &vx, &w));
        add_to(&mut f, -2.0 * eps * eps, &mul3(&w2, &mul(v, &vx), &ex));
        add_to(&mut f, -eps * eps, &c.d(&mul3(&ex, &mul(v, v), &w2), 0));
        add_to(&mut lf, -1.0, &f);
        // v equation
        let mut lg = mul(&w, v_tt);
        add_to(&mut lg, -1.0, &c.dn(v, 0, 2));
        add_to(&mut lg, eps, &c.dn(v, 0, 4));
        add_to(&mut lg, 2.0 * eps, &mul(&vw, &c.d(&mul(v_t, &w), 0)));
        let sig: Arr = ex.iter().zip(&exxx).map(|(a, b)| a - eps * b).collect();
        let mut g = scaled(-eps, &mul3(&eta_t, &w, &sig));
        add_to(&mut g, -2.0 * eps, &mul3(&vx, v_t, &w2));
        add_to(&mut g, eps * eps, &mul(&w, &c.d(&mul3(&mul(v, v), &eta_t, &w2), 0)));
        add_to(&mut lg, -1.0, &g);
        (lf, vec![lg])
    } else {
        let ge = c.grad(&eta);
        let gle = c.grad(&c.lap(&eta));
        let gw = c.grad(&w);
        let divv = c.div(&v);
        let divvt = c.div(&v_t);
        let w2 = mul(&w, &w);
        let v_dot = |f: &Arr| dot(&v, &c.grad(f));
        // η equation
        let mut lf = eta_tt.clone();
        let flux1: Vec<Arr> = ge.iter().map(|g| mul(&h, g)).collect();
        let flux2: Vec<Arr> = gle.iter().map(|g| mul(&h, g)).collect();
        add_to(&mut lf, -1.0, &c.div(&flux1));
        add_to(&mut lf, eps, &c.div(&flux2));
        add_to(&mut lf, 2.0 * eps, &mul(&w, &v_dot(&eta_t)));
        let vgw = dot(&v, &gw);
        let mut f = scaled(eps, &mul3(&w, &divv, &divv));
        add_to(&mut f, 2.0 * eps, &mul(&vgw, &divv));
        add_to(&mut f, eps, &v_dot(&vgw));
        for i in 0..2 {
            let gvw = c.grad(&mul(&v[i], &w));
            // Σ_j ∂_j(vⁱw) ∂_i vʲ
            for j in 0..2 {
                add_to(&mut f, eps, &mul(&gvw[j], &c.d(&v[j], i)));
            }
        }
        add_to(&mut lf, -1.0, &f);
        // v equations
        let gdiv = c.grad(&divv);
        let gldiv = c.grad(&c.lap(&divv));
        let vt_dot = |f: &Arr| dot(&v_t, &c.grad(f));
        let mut lg = Vec::new();
        for i in 0..2 {
            let mut l = mul(&w, &v_tt[i]);
            add_to(&mut l, -1.0, &gdiv[i]);
            add_to(&mut l, eps, &gldiv[i]);
            add_to(&mut l, eps, &mul(&w, &v_dot(&mul(&v_t[i], &w))));
            add_to(&mut l, eps, &mul3(&v[i], &w2, &divvt));
            let sig: Arr = ge[i].iter().zip(&gle[i]).map(|(a, b)| a - eps * b).collect();
            let mut g = scaled(-eps, &mul3(&eta_t, &w, &sig));
            add_to(&mut g, eps * eps, &mul(&w, &v_dot(&mul3(&v[i], &eta_t, &w2))));
            // ∂_t(vⁱw) = vⁱ_t w − ε vⁱ η_t w²
            let mut dt_vw = mul(&v_t[i], &w);
            add_to(&mut dt_vw, -eps, &mul3(&v[i], &eta_t, &w2));
            add_to(&mut g, -eps, &mul3(&w, &dt_vw, &divv));
            add_to(&mut g, -eps, &mul(&w, &vt_dot(&mul(&v[i], &w))));
            add_to(&mut l, -1.0, &g);
            lg.push(l);
        }
        (lf, lg)
    };
    Ok(QuasilinearResidual {
        res_f: field(grid, res_f),
        res_g: res_g.into_iter().map(|a| field(grid, a)).collect(),
    })
}

/// Residual norms of the two identities trading time for space regularity,
/// `∇·v + η_t = 0` and `(1 − εΔ)∇η + v_t/(1+εη) + ε/(1+εη) ∇·(v ⊗ v/(1+εη)) = 0`,
/// with the ratio of the total to the quasilinear energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    pub first: f64,
    pub second: f64,
    pub energy_ratio: f64,
}

pub fn regularity_transfer_check(b: &Bundle) -> Result<TransferReport> {
    b.require(1)?;
    let grid = b.grid();
    let c = Calc::new(grid);
    let eps = b.eps;
    let (eta, v) = b.arrays(0);
    let (eta_t, v_t) = b.arrays(1);
    let (_, w) = depth(eps, &eta)?;
    let mut r1 = c.div(&v);
    add_to(&mut r1, 1.0, &eta_t);
    let first = r1.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let dim = grid.dim();
    let mut second = 0.0f64;
    let ge = c.grad(&eta);
    let gle = c.grad(&c.lap(&eta));
    for i in 0..dim {
        let mut r: Arr = ge[i].iter().zip(&gle[i]).map(|(a, b)| a - eps * b).collect();
        add_to(&mut r, 1.0, &mul(&w, &v_t[i]));
        let flux: Vec<Arr> = (0..dim).map(|j| mul3(&v[i], &v[j], &w)).collect();
        add_to(&mut r, eps, &mul(&w, &c.div(&flux)));
        second = r.iter().fold(second, |m, x| m.max(x.abs()));
    }
    let energy_ratio = match crate::diagnostics::energy_quasilinear(b) {
        Ok((e, total)) if e > 0.0 => total / e,
        Ok(_) => f64::NAN,
        Err(Error::Bundle(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(TransferReport { first, second, energy_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(g: &Grid, amp: f64) -> State {
        State::new(
            Field::from_fn(g, |x, _| amp * (x.cos() + 0.3 * (2.0 * x).sin())),
            vec![Field::from_fn(g, |x, _| amp * (0.5 * x.sin() - 0.2 * (3.0 * x).cos()))],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn rest_has_zero_residual() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let b = Bundle::from_state(&State::rest(&g), 0.1, 2).unwrap();
        let r = quasilinear_residual(&b).unwrap();
        assert_eq!(r.sup(), 0.0);
        let t = regularity_transfer_check(&b).unwrap();
        assert_eq!((t.first, t.second), (0.0, 0.0));
    }

    #[test]
    fn exact_derivatives_satisfy_both_equations() {
        let g = Grid::new(1, 128, 2.0 * PI).unwrap();
        let b = Bundle::from_state(&state(&g, 0.3), 0.1, 2).unwrap();
        let r = quasilinear_residual(&b).unwrap();
        assert!(r.sup() < 1e-9, "{}", r.sup());
        let t = regularity_transfer_check(&b).unwrap();
        assert!(t.first < 1e-13 && t.second < 1e-10, "{t:?}");
    }

    #[test]
    fn exact_derivatives_satisfy_2d_equations() {
        let g = Grid::new(2, 64, 2.0 * PI).unwrap();
        let s = State::new(
            Field::from_fn(&g, |x, y| 0.2 * (x.cos() + 0.5 * (x + y).sin())),
            vec![
                Field::from_fn(&g, |x, y| 0.2 * x.cos() * y.cos()),
                Field::from_fn(&g, |x, y| -0.2 * x.sin() * y.sin()),
            ],
            0.0,
        )
        .unwrap();
        let b = Bundle::from_state(&s, 0.1, 2).unwrap();
        let r = quasilinear_residual(&b).unwrap();
        assert!(r.sup() < 1e-9, "{}", r.sup());
    }

    #[test]
    fn stencil_mismatch() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let s = vec![State::rest(&g); 4];
        assert!(matches!(Bundle::from_samples(&s, 0.1, 2, 0.1), Err(Error::Bundle(_))));
        let s = vec![State::rest(&g); 3];
        assert!(matches!(Bundle::from_samples(&s, 0.1, 3, 0.1), Err(Error::Bundle(_))));
        let b = Bundle::from_state(&State::rest(&g), 0.1, 1).unwrap();
        assert!(matches!(quasilinear_residual(&b), Err(Error::Bundle(_))));
    }
}
