mod common;

use boussinesq::diagnostics::{energy_quasilinear, energy_symmetrized, hamiltonian, mass};
use boussinesq::solvers::{rhs_mollified, IntegratorConfig, MollifiedConfig, Scheme};
use boussinesq::spectral_ops::*;
use boussinesq::systems::{canonical_params, validate_params, Abcd, CaseParams, Evolution, State};
use boussinesq::transforms::*;
use boussinesq::Complex64;
use common::*;
use proptest::prelude::*;

fn registry(tag: u8, eps: f64) -> CaseParams {
    let (a, b, c, d, tau) = canonical_params(tag).unwrap();
    validate_params(CaseParams::abcd(a, b, c, d, eps, tau)).unwrap()
}

fn max_abs(s: &[Complex64]) -> f64 {
    s.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn modes_dist(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), dim in 1usize..=2) {
        let g = grid(dim, 32);
        let f = random_field(&g, 10, 1.0, seed);
        let back = g.real(&f.spectrum());
        let err = back.iter().zip(f.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12 * f.max_abs().max(1e-300));
    }

    #[test]
    fn real_multipliers_stay_real(seed in any::<u64>(), eps in 0.01f64..1.0) {
        let g = grid(1, 64);
        let f = random_field(&g, 20, 1.0, seed);
        let ops = [
            j_eps(eps).unwrap(), j_eps_inv(eps).unwrap(), helmholtz_inv(eps).unwrap(),
            r_eps(eps).unwrap(), hilbert(), t_eps(eps).unwrap(), p_eps(eps, 0.5).unwrap(),
            mollifier(0.1).unwrap(), lambda_s(1.6),
        ];
        for op in &ops {
            prop_assert!(op.is_real_to_real());
            let mut s = f.spectrum();
            apply_spectral(op, &g, &mut s).unwrap();
            let z = g.complex(&s);
            let re = z.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
            let im = z.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
            prop_assert!(im <= 1e-12 * re.max(1e-300), "{}: {im} vs {re}", op.name());
        }
    }

    #[test]
    fn inverse_pairs_are_exact(seed in any::<u64>(), eps in 0.001f64..2.0) {
        let g = grid(2, 32);
        let f = random_field(&g, 10, 1.0, seed);
        let a = apply_multiplier(&j_eps_inv(eps).unwrap(), &apply_multiplier(&j_eps(eps).unwrap(), &f).unwrap()).unwrap();
        prop_assert!(a.sup_dist(&f) < 1e-13);
        let j2 = j_eps(eps).unwrap().compose(&j_eps(eps).unwrap());
        let b = apply_multiplier(&helmholtz_inv(eps).unwrap(), &apply_multiplier(&j2, &f).unwrap()).unwrap();
        prop_assert!(b.sup_dist(&f) < 1e-12);
        let r1 = riesz(1).unwrap();
        let r2 = riesz(2).unwrap();
        let s = apply_multiplier(&r1.compose(&r1), &f).unwrap().axpy(1.0, &apply_multiplier(&r2.compose(&r2), &f).unwrap());
        prop_assert!(s.axpy(1.0, &f).max_abs() < 1e-13);
    }

    #[test]
    fn parseval(seed in any::<u64>()) {
        let g = grid(2, 32);
        let f = random_field(&g, 8, 1.0, seed);
        let quad = integral(&g, &f.values().iter().map(|x| x * x).collect::<Vec<_>>()).sqrt();
        prop_assert!((sobolev_norm(&f, 0.0).unwrap() - quad).abs() < 1e-10);
    }

    #[test]
    fn interpolation_inequality(seed in any::<u64>(), s in 0.0f64..3.0, eps in 0.001f64..1.0, pair in 0usize..6) {
        let (i, k) = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)][pair];
        let g = grid(1, 64);
        let f = random_field(&g, 21, 1.0, seed);
        let n = |r: f64| sobolev_norm(&f, r).unwrap();
        let (i, k) = (i as f64, k as f64);
        let lhs = eps.powf(i / 2.0) * n(s + i);
        let rhs = n(s).powf(1.0 - i / k) * (eps.powf(k / 2.0) * n(s + k)).powf(i / k);
        prop_assert!(lhs <= (1.0 + 1e-10) * rhs, "{lhs} > {rhs}");
    }

    #[test]
    fn eta_flux_has_no_mean(seed in any::<u64>(), tag in 1u8..=13, dim in 1usize..=2) {
        let g = grid(dim, 16);
        let s = random_state(&g, 5, 0.2, seed);
        let sys = Abcd::new(&g, registry(tag, 0.1)).unwrap();
        let d = sys.rhs(&s.to_modes()).unwrap();
        prop_assert!(d[0][0].norm() < 1e-12);
    }

    #[test]
    fn velocity_rhs_is_a_gradient_when_c_and_d_vanish(seed in any::<u64>(), tag in prop::sample::select(vec![7u8, 13])) {
        let g = grid(2, 32);
        let phi = random_field(&g, 6, 0.3, seed);
        let vel: Vec<Field> = (0..2).map(|i| Field::from_spectrum(&g, &g.diff(&phi.spectrum(), i))).collect();
        let s = State::new(random_field(&g, 6, 0.2, seed ^ 7), vel, 0.0).unwrap();
        let sys = Abcd::new(&g, registry(tag, 0.1)).unwrap();
        let d = State::from_modes(&g, &sys.rhs(&s.to_modes()).unwrap(), 0.0);
        prop_assert!(curl(&d.vel).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn nonlinear_part_is_quadratic(seed in any::<u64>(), tag in 1u8..=13, dim in 1usize..=2) {
        let g = grid(dim, 16);
        let u = random_state(&g, 5, 0.3, seed).to_modes();
        let sys = Abcd::new(&g, registry(tag, 0.1)).unwrap();
        let n1 = sys.nonlinear(&u).unwrap();
        let u2: Vec<Vec<Complex64>> = u.iter().map(|c| c.iter().map(|z| 2.0 * z).collect()).collect();
        let n2: Vec<Vec<Complex64>> = sys.nonlinear(&u2).unwrap().iter().map(|c| c.iter().map(|z| z / 4.0).collect()).collect();
        prop_assert!(modes_dist(&n1, &n2) < 1e-13);
    }

    #[test]
    fn diagonalization_1d_round_trip_and_push_forward(seed in any::<u64>(), neg_c in any::<bool>(), eps in 0.01f64..0.5) {
        let g = grid(1, 64);
        let case = if neg_c { Diag1dCase::CNeg } else { Diag1dCase::ANeg };
        let s = random_state(&g, 12, 0.3, seed);
        let d = Diag1d::new(&g, eps, case).unwrap();
        let u = s.to_modes();
        let w = d.forward(&u[0], &u[1]);
        let back = d.inverse(&w[0], &w[1]);
        prop_assert!(modes_dist(&back, &u) < 1e-12 * max_abs(&u[0]).max(max_abs(&u[1])));
        let p = if neg_c { CaseParams::abcd(0.0, 0.0, -1.0, 0.0, eps, 4.0 / 3.0) } else { CaseParams::abcd(-1.0, 0.0, 0.0, 0.0, eps, 4.0 / 3.0) };
        let orig = Abcd::new(&g, validate_params(p).unwrap()).unwrap();
        let r = orig.rhs(&u).unwrap();
        let pushed = d.forward(&r[0], &r[1]);
        let direct = d.rhs(&w).unwrap();
        prop_assert!(modes_dist(&pushed, &direct) < 1e-10 * (1.0 + max_abs(&pushed[0])));
    }

    #[test]
    fn diagonalization_2d_push_forward(seed in any::<u64>(), neg_c in any::<bool>()) {
        let g = grid(2, 16);
        let case = if neg_c { Diag2dCase::CNeg } else { Diag2dCase::ANeg };
        let s = random_state(&g, 4, 0.3, seed);
        let d = Diag2d::new(&g, 0.1, case).unwrap();
        let u = s.to_modes();
        let w = d.forward(&u);
        prop_assert!(modes_dist(&d.inverse(&w), &u) < 1e-12);
        let pushed = d.forward(&d.original().rhs(&u).unwrap());
        prop_assert!(modes_dist(&pushed, &d.rhs(&w).unwrap()) < 1e-10);
    }

    #[test]
    fn v_variable_round_trip(seed in any::<u64>(), dim in 1usize..=2) {
        let g = grid(dim, 16);
        let s = random_state(&g, 5, 0.5, seed);
        let back = from_v_variable(&to_v_variable(&s, 0.1).unwrap(), 0.1).unwrap();
        prop_assert!(back.sup_dist(&s) < 1e-15);
    }

    #[test]
    fn hamiltonian_is_translation_invariant(seed in any::<u64>(), shift in 0usize..32) {
        let g = grid(1, 32);
        let s = random_state(&g, 10, 0.4, seed);
        let p = registry(10, 0.1);
        let t = State::new(s.eta.shifted(shift, 0), vec![s.vel[0].shifted(shift, 0)], 0.0).unwrap();
        let (h0, h1) = (hamiltonian(&p, &s).unwrap(), hamiltonian(&p, &t).unwrap());
        prop_assert!((h0 - h1).abs() < 1e-12 * h0.abs().max(1.0));
        prop_assert!((mass(&s) - mass(&t)).abs() < 1e-15);
    }

    #[test]
    fn symmetrized_energy_is_nonnegative(seed in any::<u64>(), tag in prop::sample::select(vec![7u8, 13]), dim in 1usize..=2) {
        let g = grid(dim, 16);
        let s = random_state(&g, 5, 1.0, seed);
        let e = energy_symmetrized(&registry(tag, 0.1), &s, 1.6).unwrap();
        prop_assert!(e > 0.0);
    }

    #[test]
    fn quasilinear_energy_is_definite(seed in any::<u64>(), dim in 1usize..=2) {
        let g = grid(dim, 16);
        let s = random_state(&g, 4, 0.5, seed);
        let b = Bundle::from_state(&s, 0.1, if dim == 1 { 2 } else { 3 }).unwrap();
        let (e, total) = energy_quasilinear(&b).unwrap();
        prop_assert!(e > 0.0 && total > 0.0);
    }

    #[test]
    fn transparent_mollifier_is_the_identity(seed in any::<u64>()) {
        let g = grid(1, 32);
        let s = random_state(&g, 10, 0.5, seed);
        let integ = IntegratorConfig::new(Scheme::Rk4IntegratingFactor, 0.01, 0.1).unwrap();
        let c = MollifiedConfig::new(1.0 / 32.0, 0.1, integ).unwrap();
        let (a, b) = rhs_mollified(&c, &s.eta, &s.vel).unwrap();
        let (x, y) = rhs_eta_v_1d(&s.eta, &s.vel[0], 0.1).unwrap();
        prop_assert!(a.sup_dist(&x) < 1e-12 && b[0].sup_dist(&y) < 1e-12);
    }
}

#[test]
fn every_registry_case_fixes_the_rest_state() {
    for dim in 1..=2 {
        let g = grid(dim, 16);
        for tag in 1..=13 {
            let sys = Abcd::new(&g, registry(tag, 0.1)).unwrap();
            let d = sys.rhs(&State::rest(&g).to_modes()).unwrap();
            assert!(d.iter().flatten().all(|z| z.norm() == 0.0), "case {tag}");
        }
    }
}
