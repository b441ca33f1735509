use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use paircorr::cli::reference_rows;
use paircorr::correlation::{correlation_measure, is_uncorrelated, maxent_state, mutual_entropy};
use paircorr::fock_space::{counterparts, enumerate_pair_basis, ParticleType};
use paircorr::maxent::{solve_boson_fixed_point, solve_dual, solve_maxent, Route};
use paircorr::oracle::{random_mode_rotation, random_state, random_state_with, random_unitary};
use paircorr::rdm::{one_particle_rdm, spectral_decompose, von_neumann_entropy, Representation, TwoParticleState};
use paircorr::schmidt::{schmidt_coefficients, schmidt_number};
use paircorr::{Tolerances, C64};

fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn trace(m: &DMatrix<C64>) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// (type, number of modes) with M <= 5 and blocks of at most 3 modes.
fn shape() -> impl Strategy<Value = (ParticleType, usize)> {
    prop_oneof![
        (1usize..=5).prop_map(|m| (ParticleType::Boson, m)),
        (2usize..=5).prop_map(|m| (ParticleType::Fermion, m)),
        (1usize..=3, 1usize..=3).prop_map(|(a, b)| (
            ParticleType::Distinguishable { num_modes_a: a, num_modes_b: b },
            a + b
        )),
    ]
}

fn state() -> impl Strategy<Value = TwoParticleState> {
    (shape(), any::<u64>(), 0usize..4).prop_map(|((pt, m), seed, r)| {
        let d = enumerate_pair_basis(pt, m).unwrap().dim();
        random_state(pt, m, 1 + r % d, seed).unwrap()
    })
}

fn pure_state() -> impl Strategy<Value = TwoParticleState> {
    (shape(), any::<u64>()).prop_map(|((pt, m), seed)| random_state(pt, m, 1, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rdm_has_trace_two(s in state()) {
        let r = one_particle_rdm(&s).unwrap();
        prop_assert!((trace(r.matrix()) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rdm_rotates_covariantly(s in state(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_mode_rotation(&mut rng, s.particle_type(), s.num_modes());
        let before = one_particle_rdm(&s).unwrap();
        let after = one_particle_rdm(&s.rotated(&u).unwrap()).unwrap();
        let expected = &u * before.matrix() * u.adjoint();
        prop_assert!(max_abs_diff(after.matrix(), &expected) < 1e-9);
    }

    #[test]
    fn entropy_is_basis_independent(s in state(), seed in any::<u64>()) {
        let tol = Tolerances::default();
        let rho = s.density_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_unitary(&mut rng, rho.nrows());
        let turned = &v * &rho * v.adjoint();
        let a = von_neumann_entropy(&rho, &tol).unwrap();
        let b = von_neumann_entropy(&turned, &tol).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn correlation_is_nonnegative_and_rotation_invariant(s in state(), seed in any::<u64>()) {
        let c2 = correlation_measure(&s).unwrap().c2;
        prop_assert!(c2 >= -1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_mode_rotation(&mut rng, s.particle_type(), s.num_modes());
        let turned = correlation_measure(&s.rotated(&u).unwrap()).unwrap().c2;
        prop_assert!((turned - c2).abs() < 1e-9);
    }

    #[test]
    fn maxent_matches_occupations_and_normalizes(s in state()) {
        let r = one_particle_rdm(&s).unwrap();
        let sol = solve_maxent(&r).unwrap();
        for (model, lambda) in sol.model_occupations().iter().zip(&sol.occupations) {
            prop_assert!((model - lambda).abs() < 1e-10);
        }
        prop_assert!((sol.partition - 1.0).abs() < 1e-10);
    }

    #[test]
    fn maxent_is_idempotent(s in state()) {
        let tol = Tolerances::default();
        let once = maxent_state(&s, Route::Default, &tol).unwrap();
        let twice = maxent_state(&once, Route::Default, &tol).unwrap();
        prop_assert!(max_abs_diff(&once.density_matrix(), &twice.density_matrix()) < 1e-9);
        prop_assert!(correlation_measure(&once).unwrap().c2 < 1e-9);
    }

    /// Mixing a state with its own maxent state keeps the RDM, so the
    /// measures differ exactly by the entropy difference.
    #[test]
    fn shared_rdm_shift(s in state(), p in 0.05f64..0.95) {
        let tol = Tolerances::default();
        let m = maxent_state(&s, Route::Default, &tol).unwrap();
        let rho = s.density_matrix().scale(p) + m.density_matrix().scale(1.0 - p);
        let mixed = TwoParticleState::new(s.basis().clone(), Representation::Mixed(rho)).unwrap();
        let a = correlation_measure(&s).unwrap();
        let b = correlation_measure(&mixed).unwrap();
        prop_assert!(((a.c2 - b.c2) - (b.entropy_state - a.entropy_state)).abs() < 1e-10);
    }

    #[test]
    fn boson_solvers_agree(lambda in prop::collection::vec(0.05f64..1.0, 1..6)) {
        let total: f64 = lambda.iter().sum();
        let lambda: Vec<f64> = lambda.iter().map(|l| 2.0 * l / total).collect();
        let tol = Tolerances::default();
        let fp = solve_boson_fixed_point(&lambda, &tol).unwrap();
        let dual = solve_dual(ParticleType::Boson, &lambda, &tol).unwrap();
        for (x, g) in fp.weights.iter().zip(&dual.gamma) {
            prop_assert!((x - g.exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_coefficients_are_normalized(s in pure_state()) {
        let data = schmidt_coefficients(&s).unwrap();
        let total: f64 = data.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_correlation_is_maxent_entropy(s in pure_state()) {
        let r = correlation_measure(&s).unwrap();
        prop_assert!((r.c2 - r.entropy_maxent).abs() < 1e-12);
        prop_assert_eq!(schmidt_number(&s, 1e-8).unwrap() == 1, is_uncorrelated(&s, 1e-8).unwrap());
    }

    #[test]
    fn fermion_pure_spectra_pair_up(m in prop::sample::select(vec![2usize, 4, 6]), seed in any::<u64>()) {
        let s = random_state(ParticleType::Fermion, m, 1, seed).unwrap();
        let spectrum = spectral_decompose(&one_particle_rdm(&s).unwrap()).unwrap();
        for pair in spectrum.eigenvalues.chunks(2) {
            prop_assert!((pair[0] - pair[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn counterparts_preserve_normalization(a in 1usize..=3, b in 1usize..=3, seed in any::<u64>(), r in 1usize..4) {
        let pt = ParticleType::Distinguishable { num_modes_a: a, num_modes_b: b };
        let s = random_state(pt, a + b, r.min(a * b), seed).unwrap();
        let (f, bo) = counterparts(&s).unwrap();
        for c in [&f, &bo] {
            let rho = c.density_matrix();
            prop_assert!((trace(&rho) - 1.0).abs() < 1e-12);
            prop_assert!(max_abs_diff(&rho, &rho.adjoint()) < 1e-12);
        }
        prop_assert!((correlation_measure(&s).unwrap().c2 - mutual_entropy(&s).unwrap()).abs() < 1e-10);
    }
}

/// The reference pure states fill their feasible support uniformly:
/// `C2 = ln d`, with `d` the number of pair configurations on the occupied modes.
#[test]
fn pure_reference_states_follow_dimension_rule() {
    let rows = reference_rows().unwrap();
    for row in &rows[..2] {
        let (f, b) = counterparts(row).unwrap();
        for s in [row, &f, &b] {
            let spectrum = spectral_decompose(&one_particle_rdm(s).unwrap()).unwrap();
            let occupied = spectrum.eigenvalues.iter().filter(|&&l| l > 1e-12).count();
            let shrunk = match s.particle_type() {
                ParticleType::Distinguishable { .. } => {
                    let a = spectrum.eigenvalues[..spectrum.split.unwrap()].iter().filter(|&&l| l > 1e-12).count();
                    ParticleType::Distinguishable { num_modes_a: a, num_modes_b: occupied - a }
                }
                other => other,
            };
            let d = enumerate_pair_basis(shrunk, occupied).unwrap().dim() as f64;
            assert_close(correlation_measure(s).unwrap().c2, d.ln());
        }
    }
}

fn assert_close(a: f64, b: f64) {
    assert!((a - b).abs() < 1e-10, "{a} vs {b}");
}

#[test]
fn random_states_are_seed_deterministic() {
    let mut r1 = ChaCha8Rng::seed_from_u64(77);
    let mut r2 = ChaCha8Rng::seed_from_u64(77);
    let a = random_state_with(&mut r1, ParticleType::Boson, 3, 2).unwrap();
    let b = random_state_with(&mut r2, ParticleType::Boson, 3, 2).unwrap();
    assert_eq!(a, b);
}
