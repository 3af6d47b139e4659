mod common;

use boussinesq::diagnostics::{hamiltonian, mass};
use boussinesq::solvers::*;
use boussinesq::spectral_ops::Field;
use boussinesq::systems::{canonical_params, validate_params, Abcd, CaseParams, Evolution, Modes, State};
use boussinesq::transforms::EtaV;
use common::*;
use std::f64::consts::PI;

fn registry(tag: u8, eps: f64) -> CaseParams {
    let (a, b, c, d, tau) = canonical_params(tag).unwrap();
    validate_params(CaseParams::abcd(a, b, c, d, eps, tau)).unwrap()
}

fn run<E: Evolution>(sys: &E, s: &State, dt: f64, t: f64) -> State {
    let cfg = IntegratorConfig::new(Scheme::Rk4IntegratingFactor, dt, t).unwrap();
    State::from_modes(sys.grid(), &integrate(&cfg, sys, s.to_modes()).unwrap(), t)
}

fn order<E: Evolution>(sys: &E, s: &State, dts: [f64; 3], t: f64) -> f64 {
    let u: Vec<State> = dts.iter().map(|&dt| run(sys, s, dt, t)).collect();
    (u[0].sup_dist(&u[1]) / u[1].sup_dist(&u[2])).log2()
}

#[test]
fn evolution_is_bit_reproducible() {
    let g = grid(1, 64);
    let sys = Abcd::new(&g, registry(7, 0.1)).unwrap();
    let s = random_state(&g, 12, 0.2, 3);
    let a = run(&sys, &s, 0.01, 1.0);
    let b = run(&sys, &s, 0.01, 1.0);
    assert_eq!(a.eta.values(), b.eta.values());
    assert_eq!(a.vel[0].values(), b.vel[0].values());
}

#[test]
fn linear_wave_returns_after_one_period() {
    let g = grid(1, 64);
    let eps = 0.1;
    let sys = Abcd::new(&g, registry(13, eps)).unwrap().linear_only();
    // a = −1: ω(ξ) = ξ(1 + εξ²)^{1/2}
    let k = 3.0;
    let period = 2.0 * PI / (k * (1.0 + eps * k * k).sqrt());
    let s = State::new(Field::from_fn(&g, |x, _| (k * x).cos()), vec![Field::zeros(&g)], 0.0).unwrap();
    let cfg = IntegratorConfig::new(Scheme::Rk4IntegratingFactor, period / 7.0, period).unwrap();
    let out = integrate(&cfg, &sys, s.to_modes()).unwrap();
    assert!(State::from_modes(&g, &out, period).sup_dist(&s) < 1e-10);
}

#[test]
fn mass_is_conserved_along_trajectories() {
    for dim in 1..=2 {
        let g = grid(dim, 32);
        let s = random_state(&g, 6, 0.2, 11);
        let s = State::new(s.eta.map(|x| x + 0.05), s.vel, 0.0).unwrap();
        for tag in [7, 10, 13] {
            let sys = Abcd::new(&g, registry(tag, 0.1)).unwrap();
            let m0 = mass(&s);
            let cfg = IntegratorConfig::new(Scheme::Rk4IntegratingFactor, 0.01, 0.5).unwrap();
            let mut worst: f64 = 0.0;
            evolve(&cfg, &sys, s.to_modes(), 0.0, |t, u: &Modes| {
                worst = worst.max((mass(&State::from_modes(&g, u, t)) - m0).abs());
                Ok(Flow::Continue)
            })
            .unwrap();
            assert!(worst < 1e-12, "dim {dim} case {tag}: {worst}");
        }
    }
}

#[test]
fn fourth_order_in_time() {
    let g = grid(1, 64);
    let s = random_state(&g, 8, 0.3, 5);
    let abcd = Abcd::new(&g, registry(7, 0.1)).unwrap();
    assert!(order(&abcd, &s, [0.04, 0.02, 0.01], 1.0) >= 3.5);
    let ev = EtaV::new(&g, 0.1).unwrap();
    let p = order(&ev, &s, [0.008, 0.004, 0.002], 1.0);
    assert!(p >= 3.5, "{p}");
}

#[test]
fn hamiltonian_drift_shrinks_with_dt() {
    let g = grid(1, 64);
    let p = registry(10, 0.1);
    let sys = Abcd::new(&g, p).unwrap();
    let s = random_state(&g, 6, 0.3, 9);
    let h0 = hamiltonian(&p, &s).unwrap();
    let drift = |dt: f64| (hamiltonian(&p, &run(&sys, &s, dt, 2.0)).unwrap() - h0).abs() / h0;
    let (a, b) = (drift(0.04), drift(0.02));
    assert!(a < 1e-6 && (a / b).log2() >= 3.5, "{a} {b}");
}

#[test]
fn cauchy_rate_is_linear_in_delta() {
    let g = grid(1, 256);
    let s = State::new(power_law_field(&g, 120, 0.05, 1.75, 0.3), vec![power_law_field(&g, 120, 0.05, 1.75, 0.7)], 0.0).unwrap();
    let integ = IntegratorConfig::new(Scheme::Rk4IntegratingFactor, 1e-3, 1.0).unwrap().report_every(100);
    let coarse = cauchy_study(&[0.2, 0.1, 0.05], 0.1, &integ, true, &s).unwrap();
    let slope = coarse.slope.unwrap();
    assert!((0.8..=1.2).contains(&slope), "{slope}");
    let proxy = limit_extract(&coarse).unwrap();
    assert!(proxy.within_bar(), "{proxy:?}");
    let fine = cauchy_study(&[0.1, 0.05, 0.025], 0.1, &integ, true, &s).unwrap();
    let ratio = limit_extract(&fine).unwrap().error_bar / proxy.error_bar;
    assert!((ratio - 0.5).abs() <= 0.15, "{ratio}");
}
