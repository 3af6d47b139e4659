#![allow(dead_code)]

use boussinesq::spectral_ops::{Field, Grid};
use boussinesq::systems::State;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn grid(dim: usize, n: usize) -> Grid {
    Grid::new(dim, n, 2.0 * PI).unwrap()
}

/// Zero-mean trigonometric polynomial with `|k_i| <= kmax` and sup norm at most `amp`.
pub fn random_field(g: &Grid, kmax: i32, amp: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ky = if g.dim() == 2 { kmax } else { 0 };
    let mut terms = Vec::new();
    for k1 in 0..=kmax {
        for k2 in -ky..=ky {
            if k1 == 0 && k2 <= 0 {
                continue;
            }
            terms.push((k1 as f64, k2 as f64, rng.gen_range(-1.0f64..1.0), rng.gen_range(0.0..2.0 * PI)));
        }
    }
    let norm: f64 = terms.iter().map(|t| t.2.abs()).sum();
    Field::from_fn(g, |x, y| terms.iter().map(|&(a, b, c, p)| amp / norm * c * (a * x + b * y + p).cos()).sum())
}

pub fn random_state(g: &Grid, kmax: i32, amp: f64, seed: u64) -> State {
    let eta = random_field(g, kmax, amp, seed);
    let vel = (0..g.dim()).map(|i| random_field(g, kmax, amp, seed.wrapping_add(1 + i as u64))).collect();
    State::new(eta, vel, 0.0).unwrap()
}

/// Smooth curl-free 2D state, `u = ∇φ`.
pub fn curl_free_state(g: &Grid, amp: f64) -> State {
    let eta = Field::from_fn(g, |x, y| amp * (x.cos() + 0.5 * (x + 2.0 * y).sin()));
    let ux = Field::from_fn(g, |x, y| amp * (-x.sin() * y.cos() + 0.3 * (2.0 * x - y).cos()));
    let uy = Field::from_fn(g, |x, y| amp * (-x.cos() * y.sin() - 0.15 * (2.0 * x - y).cos()));
    State::new(eta, vec![ux, uy], 0.0).unwrap()
}

/// `Σ_{k=1}^{kmax} amp k^{-decay} cos(kx + phase k²)`: algebraic spectral decay.
pub fn power_law_field(g: &Grid, kmax: usize, amp: f64, decay: f64, phase: f64) -> Field {
    Field::from_fn(g, |x, _| {
        (1..=kmax).map(|k| {
            let k = k as f64;
            amp * k.powf(-decay) * (k * x + phase * k * k).cos()
        }).sum()
    })
}
