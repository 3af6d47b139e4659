use num_complex::Complex64;

use super::calc::{add_to, depth, field, mul, mul3, scaled, Arr, Calc};
use crate::error::{Error, Result};
use crate::spectral_ops::{Field, Grid};
use crate::systems::{
    check_finite_modes, radial_table, wave_block, Block, Evolution, Kit, Modes, State,
};

/// `v = (1 + εη) u`, taken pointwise so that the inverse is exact.
pub fn to_v_variable(s: &State, eps: f64) -> Result<State> {
    s.check_finite()?;
    let (h, _) = depth(eps, s.eta.values())?;
    let vel = s.vel.iter().map(|u| field(s.grid(), mul(&h, u.values()))).collect();
    State::new(s.eta.clone(), vel, s.time)
}

/// `u = v / (1 + εη)`.
pub fn from_v_variable(s: &State, eps: f64) -> Result<State> {
    s.check_finite()?;
    let (_, w) = depth(eps, s.eta.values())?;
    let vel = s.vel.iter().map(|v| field(s.grid(), mul(&w, v.values()))).collect();
    State::new(s.eta.clone(), vel, s.time)
}

/// The `c = -1` system written for `(η, v)`:
///
/// ```text
/// η_t + ∇·v = 0
/// v_t + (1+εη)(∇η − ε∇Δη) + ε∇·(v ⊗ v/(1+εη)) = 0
/// ```
#[derive(Debug, Clone)]
pub struct EtaV {
    grid: Grid,
    eps: f64,
    dealias: bool,
    q: Vec<f64>,
}

impl EtaV {
    pub fn new(grid: &Grid, eps: f64) -> Result<EtaV> {
        if !(eps > 0.0) {
            return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
        }
        Ok(EtaV { grid: grid.clone(), eps, dealias: true, q: radial_table(grid, |k2| 1.0 + eps * k2) })
    }

    pub fn with_dealias(mut self, on: bool) -> EtaV {
        self.dealias = on;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Evolution for EtaV {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ncomp(&self) -> usize {
        1 + self.grid.dim()
    }

    fn linear(&self, m: usize) -> Block {
        wave_block(&self.grid, m, 1.0, self.q[m])
    }

    fn nonlinear(&self, u: &[Vec<Complex64>]) -> Result<Modes> {
        check_finite_modes(u)?;
        let dim = self.grid.dim();
        let kit = Kit::new(&self.grid, self.dealias);
        let eps = self.eps;
        let eta = kit.real(&u[0]);
        let (_, w) = depth(eps, &eta)?;
        let v: Vec<Arr> = u[1..].iter().map(|s| kit.real(s)).collect();
        // ∇η − ε∇Δη
        let lap = self.grid.laplacian(&u[0]);
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.grid.len()]];
        for i in 0..dim {
            let g: Vec<Complex64> =
                kit.diff(&u[0], i).iter().zip(kit.diff(&lap, i)).map(|(a, b)| a - eps * b).collect();
            let mut acc = kit.product(&eta, &kit.real(&g));
            let flux: Vec<Vec<Complex64>> =
                (0..dim).map(|j| kit.project(&mul3(&v[i], &v[j], &w))).collect();
            let div = kit.div(&flux);
            for (a, d) in acc.iter_mut().zip(&div) {
                *a = -eps * (*a + d);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

fn eta_v_rhs(s: &State, eps: f64, dim: usize) -> Result<State> {
    if s.grid().dim() != dim {
        return Err(Error::Dimension(format!("expected a {dim}D state")));
    }
    s.check_finite()?;
    let sys = EtaV::new(s.grid(), eps)?;
    Ok(State::from_modes(s.grid(), &sys.rhs(&s.to_modes())?, s.time))
}

/// `(η_t, v_t)` of the one-dimensional `(η, v)` system.
pub fn rhs_eta_v_1d(eta: &Field, v: &Field, eps: f64) -> Result<(Field, Field)> {
    let s = State::new(eta.clone(), vec![v.clone()], 0.0)?;
    let d = eta_v_rhs(&s, eps, 1)?;
    Ok((d.eta, d.vel.into_iter().next().expect("one component")))
}

/// `(η_t, v⃗_t)` of the two-dimensional `(η, v⃗)` system.
pub fn rhs_eta_v_2d(eta: &Field, v: &[Field], eps: f64) -> Result<(Field, Vec<Field>)> {
    let s = State::new(eta.clone(), v.to_vec(), 0.0)?;
    let d = eta_v_rhs(&s, eps, 2)?;
    Ok((d.eta, d.vel))
}

/// Taylor coefficients in time of a solution of the `(η, v)` system.
///
/// `eta[k]`, `v[k][i]` and `w[k]` are the `k`-th coefficients of `η`, `vᵢ`
/// and `1/(1+εη)`. Products are taken pointwise without truncation, so the
/// `k!`-scaled coefficients are the nested time derivatives of the
/// untruncated right-hand side.
pub(crate) struct Jets {
    pub eta: Vec<Arr>,
    pub v: Vec<Vec<Arr>>,
}

fn cauchy(a: &[Arr], b: &[Arr], k: usize) -> Arr {
    let mut out = vec![0.0; a[0].len()];
    for j in 0..=k {
        for ((o, x), y) in out.iter_mut().zip(&a[j]).zip(&b[k - j]) {
            *o += x * y;
        }
    }
    out
}

pub(crate) fn taylor_jets(grid: &Grid, eps: f64, s: &State, order: usize) -> Result<Jets> {
    s.check_finite()?;
    let c = Calc::new(grid);
    let dim = grid.dim();
    let (_, w0) = depth(eps, s.eta.values())?;
    let mut eta = vec![s.eta.values().to_vec()];
    let mut v = vec![s.vel.iter().map(|f| f.values().to_vec()).collect::<Vec<_>>()];
    let mut w = vec![w0];
    // σ_k = ∇η_k − ε∇Δη_k, per component
    let mut sigma: Vec<Vec<Arr>> = Vec::new();
    for k in 0..order {
        let scale = 1.0 / (k + 1) as f64;
        sigma.push({
            let g = c.grad(&eta[k]);
            let gl = c.grad(&c.lap(&eta[k]));
            g.iter().zip(&gl).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - eps * y).collect()).collect()
        });
        let comp = |i: usize, seq: &Vec<Vec<Arr>>| -> Vec<Arr> { seq.iter().map(|x| x[i].clone()).collect() };
        let next_eta = scaled(-scale, &c.div(&v[k]));
        let mut next_v = Vec::with_capacity(dim);
        for i in 0..dim {
            let sig_i = comp(i, &sigma);
            let mut acc = scaled(-1.0, &sig_i[k]);
            add_to(&mut acc, -eps, &cauchy(&eta, &sig_i, k));
            let vi = comp(i, &v);
            for j in 0..dim {
                let vj = comp(j, &v);
                let vv: Vec<Arr> = (0..=k).map(|n| cauchy(&vi, &vj, n)).collect();
                let flux = cauchy(&vv, &w, k);
                add_to(&mut acc, -eps, &c.d(&flux, j));
            }
            next_v.push(scaled(scale, &acc));
        }
        eta.push(next_eta);
        v.push(next_v);
        // (1 + εη) w = 1 order by order
        let n = k + 1;
        let mut wn = c.zeros();
        for j in 1..=n {
            add_to(&mut wn, eps, &mul(&eta[j], &w[n - j]));
        }
        let wn = mul(&w[0], &wn).into_iter().map(|x| -x).collect();
        w.push(wn);
    }
    Ok(Jets { eta, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state1d(g: &Grid) -> State {
        State::new(
            Field::from_fn(g, |x, _| 0.3 * x.cos() + 0.1 * (2.0 * x).sin()),
            vec![Field::from_fn(g, |x, _| 0.2 * x.sin() - 0.1 * (3.0 * x).cos())],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn flat_surface_keeps_velocity() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let u = Field::from_fn(&g, |x, _| x.sin());
        let s = State::new(Field::zeros(&g), vec![u.clone()], 0.0).unwrap();
        assert_eq!(to_v_variable(&s, 0.1).unwrap().vel[0], u);
        let s = State::new(Field::from_fn(&g, |_, _| 0.5), vec![u.clone()], 0.0).unwrap();
        assert!(to_v_variable(&s, 0.1).unwrap().vel[0].sup_dist(&u.map(|x| 1.05 * x)) < 1e-15);
    }

    #[test]
    fn v_round_trip_and_cavitation() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let s = state1d(&g);
        let back = from_v_variable(&to_v_variable(&s, 0.2).unwrap(), 0.2).unwrap();
        assert!(back.sup_dist(&s) < 1e-15);
        let bad = State::new(Field::from_fn(&g, |x, _| -20.0 * x.cos()), vec![Field::zeros(&g)], 0.0).unwrap();
        assert!(matches!(to_v_variable(&bad, 0.1), Err(Error::Cavitation { .. })));
    }

    #[test]
    fn first_equation_is_exact() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let s = state1d(&g);
        let (et, _) = rhs_eta_v_1d(&s.eta, &s.vel[0], 0.1).unwrap();
        let want = Field::from_spectrum(&g, &g.diff(&s.vel[0].spectrum(), 0)).map(|x| -x);
        assert!(et.sup_dist(&want) < 1e-14);
    }

    #[test]
    fn jets_start_with_the_rhs() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let s = state1d(&g);
        let sys = EtaV::new(&g, 0.1).unwrap().with_dealias(false);
        let d = State::from_modes(&g, &sys.rhs(&s.to_modes()).unwrap(), 0.0);
        let j = taylor_jets(&g, 0.1, &s, 1).unwrap();
        assert!(field(&g, j.eta[1].clone()).sup_dist(&d.eta) < 1e-12);
        assert!(field(&g, j.v[1][0].clone()).sup_dist(&d.vel[0]) < 1e-12);
    }
}
