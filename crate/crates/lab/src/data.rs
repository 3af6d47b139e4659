//! Initial-data library.
//!
//! Randomness: `random_bandlimited` draws phases from `ChaCha8Rng` seeded
//! with `data.seed`; `η` uses stream 0 and velocity component `i` stream
//! `i + 1`, so adding a component never changes the others.

use std::f64::consts::PI;

use boussinesq::diagnostics::check_noncavitation;
use boussinesq::spectral_ops::{Field, Grid};
use boussinesq::systems::State;
use boussinesq::transforms::{curl_free_projection, to_v_variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{DataRecipe, Family, RunConfig, SystemKind};
use crate::error::{invalid, LabError, LabResult};

/// Integer lattice vectors `k` with `1 ≤ |k|_∞ ≤ kmax`, one of each `±k` pair.
fn half_lattice(dim: usize, kmax: i64) -> Vec<[i64; 2]> {
    let ky = if dim == 2 { kmax } else { 0 };
    let mut out = Vec::new();
    for k1 in 0..=kmax {
        for k2 in -ky..=ky {
            if k1 > 0 || k2 > 0 {
                out.push([k1, k2]);
            }
        }
    }
    out
}

fn random_field(g: &Grid, r: &DataRecipe, stream: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    rng.set_stream(stream);
    let base = 2.0 * PI / g.length();
    let terms: Vec<([f64; 2], f64, f64)> = half_lattice(g.dim(), r.kmax as i64)
        .into_iter()
        .map(|k| {
            let mag = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
            let phase = rng.gen_range(0.0..2.0 * PI);
            ([k[0] as f64 * base, k[1] as f64 * base], r.amplitude * mag.powf(-r.decay), phase)
        })
        .collect();
    Field::from_fn(g, |x, y| terms.iter().map(|(k, a, p)| a * (k[0] * x + k[1] * y + p).cos()).sum())
}

/// `(η, u)` at `t = 0` for the recipe on `g`.
pub fn generate(g: &Grid, r: &DataRecipe) -> LabResult<State> {
    let dim = g.dim();
    let l = g.length();
    let base = 2.0 * PI / l;
    let (a, w) = (r.amplitude, r.width);
    let (eta, mut vel) = match r.family {
        Family::GaussianHump => {
            let eta = Field::from_fn(g, |x, y| {
                let r2 = (x - l / 2.0).powi(2) + if dim == 2 { (y - l / 2.0).powi(2) } else { 0.0 };
                a * (-r2 / (w * w)).exp()
            });
            (eta, vec![Field::zeros(g); dim])
        }
        Family::CosineModes => {
            if r.modes.is_empty() {
                return Err(LabError::Validation("cosine_modes needs data.modes".into()));
            }
            let wave = |s: f64| r.modes.iter().map(|&k| a * (k as f64 * base * s).cos()).sum::<f64>();
            let eta = Field::from_fn(g, |x, y| wave(x) + if dim == 2 { wave(y) } else { 0.0 });
            let mut vel = vec![Field::from_fn(g, |x, _| wave(x))];
            if dim == 2 {
                vel.push(Field::from_fn(g, |_, y| wave(y)));
            }
            (eta, vel)
        }
        Family::SolitaryLike => {
            let sech2 = |x: f64| 1.0 / ((x - l / 2.0) / w).cosh().powi(2);
            let eta = Field::from_fn(g, |x, _| a * sech2(x));
            let mut vel = vec![eta.clone()];
            if dim == 2 {
                vel.push(Field::zeros(g));
            }
            (eta, vel)
        }
        Family::RandomBandlimited => {
            let vel = (0..dim).map(|i| random_field(g, r, 1 + i as u64)).collect();
            (random_field(g, r, 0), vel)
        }
    };
    if r.curl_free && dim == 2 {
        vel = curl_free_projection(&vel).map_err(invalid)?;
    }
    State::new(eta, vel, 0.0).map_err(invalid)
}

/// Initial state in the unknowns of the configured system, after the
/// non-cavitation check `1 + εη ≥ H` (amplitudes are never rescaled).
pub fn initial_state(cfg: &RunConfig) -> LabResult<State> {
    let g = cfg.grid()?;
    let s = generate(&g, &cfg.data)?;
    let margin = check_noncavitation(&s, cfg.eps, cfg.depth_min);
    if !(margin >= 0.0) {
        return Err(LabError::Validation(format!(
            "initial data violate 1 + eps*eta >= {} (margin {margin})",
            cfg.depth_min
        )));
    }
    match cfg.system {
        SystemKind::Abcd => Ok(s),
        SystemKind::EtaV => to_v_variable(&s, cfg.eps).map_err(invalid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CaseSelector;
    use boussinesq::transforms::curl;

    fn cfg(family: Family, dim: usize) -> RunConfig {
        let mut c = RunConfig::new(CaseSelector::Tag(7), 0.1, 32, 0.01, 0.1);
        c.dim = dim;
        c.data.family = family;
        c.data.seed = 9;
        c.data.modes = vec![1, 2];
        c
    }

    #[test]
    fn every_family_in_both_dimensions() {
        for f in Family::ALL {
            for dim in 1..=2 {
                let s = initial_state(&cfg(f, dim)).unwrap();
                assert!(s.is_finite() && s.eta.max_abs() > 0.0, "{f:?} {dim}D");
                assert_eq!(s.vel.len(), dim);
            }
        }
    }

    #[test]
    fn seeded_data_are_reproducible() {
        let c = cfg(Family::RandomBandlimited, 2);
        let (a, b) = (initial_state(&c).unwrap(), initial_state(&c).unwrap());
        assert_eq!(a.eta.values(), b.eta.values());
        let mut d = c.clone();
        d.data.seed = 10;
        assert_ne!(initial_state(&d).unwrap().eta.values(), a.eta.values());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let g1 = Grid::new(1, 32, 2.0 * PI).unwrap();
        let r = cfg(Family::RandomBandlimited, 1).data;
        let a = random_field(&g1, &r, 0);
        let b = random_field(&g1, &r, 0);
        assert_eq!(a.values(), b.values());
        assert_ne!(random_field(&g1, &r, 1).values(), a.values());
    }

    #[test]
    fn curl_projection_on_request() {
        let mut c = cfg(Family::RandomBandlimited, 2);
        c.data.curl_free = true;
        let s = initial_state(&c).unwrap();
        assert!(curl(&s.vel).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn cavitating_amplitude_is_rejected_not_rescaled() {
        let mut c = cfg(Family::GaussianHump, 1);
        c.data.amplitude = -6.0;
        assert_eq!(initial_state(&c).unwrap_err().exit_code(), 3);
    }
}
