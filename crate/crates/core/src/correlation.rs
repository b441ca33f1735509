//! The correlation measure `C2 = S(sigma_maxent) - S(sigma)` and its
//! distinguishable-particle special case, the mutual entropy.

use nalgebra::DMatrix;

use crate::fock_space::{counterparts, ParticleType};
use crate::maxent::{build_maxent_state, solve_maxent_with, Method, Route};
use crate::rdm::{one_particle_rdm_with, von_neumann_entropy, Representation, TwoParticleState};
use crate::{C64, Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub particle_type: ParticleType,
    /// `C2` in nats, clamped at zero.
    pub c2: f64,
    /// `S(sigma)`.
    pub entropy_state: f64,
    /// `S(sigma_maxent)`.
    pub entropy_maxent: f64,
    /// Eigenvalues of `sigma1` (blockwise for distinguishable particles).
    pub rdm_spectrum: Vec<f64>,
    pub saturated_modes: Vec<usize>,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
}

pub fn correlation_measure(state: &TwoParticleState) -> Result<CorrelationReport> {
    correlation_measure_with(state, Route::Default, &Tolerances::default())
}

/// `one_particle_rdm -> spectral_decompose -> maxent -> entropies`.
pub fn correlation_measure_with(
    state: &TwoParticleState,
    route: Route,
    tol: &Tolerances,
) -> Result<CorrelationReport> {
    let rdm = one_particle_rdm_with(state, tol)?;
    let solution = solve_maxent_with(&rdm, route, tol)?;
    let entropy_state = state.entropy(tol)?;
    let raw = solution.entropy - entropy_state;
    if raw < -tol.negativity {
        return Err(Error::Scientific(format!(
            "negative correlation {raw:.3e}: maxent entropy {} below state entropy {}",
            solution.entropy, entropy_state
        )));
    }
    Ok(CorrelationReport {
        particle_type: state.particle_type(),
        c2: raw.max(0.0),
        entropy_state,
        entropy_maxent: solution.entropy,
        rdm_spectrum: solution.occupations.clone(),
        saturated_modes: solution.saturated_modes.clone(),
        method: solution.diagnostics.method,
        iterations: solution.diagnostics.iterations,
        residual: solution.diagnostics.residual,
    })
}

/// The maximum-entropy state sharing the 1-particle RDM of `state`.
pub fn maxent_state(state: &TwoParticleState, route: Route, tol: &Tolerances) -> Result<TwoParticleState> {
    let rdm = one_particle_rdm_with(state, tol)?;
    let solution = solve_maxent_with(&rdm, route, tol)?;
    build_maxent_state(&solution, state.basis())
}

/// Block marginals of a distinguishable state and their product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMaxEnt {
    pub sigma_a: DMatrix<C64>,
    pub sigma_b: DMatrix<C64>,
    pub entropy_a: f64,
    pub entropy_b: f64,
    /// `sigma_A (x) sigma_B` over the A x B pair basis.
    pub state: TwoParticleState,
}

impl ProductMaxEnt {
    pub fn entropy(&self) -> f64 {
        self.entropy_a + self.entropy_b
    }
}

pub fn distinguishable_maxent(state_d: &TwoParticleState, tol: &Tolerances) -> Result<ProductMaxEnt> {
    let ptype = state_d.particle_type();
    let Some(a) = ptype.split() else {
        return Err(Error::invariant(
            "distinguishable input",
            format!("expected a distinguishable state, got {ptype}"),
        ));
    };
    let rdm = one_particle_rdm_with(state_d, tol)?;
    let (sigma_a, sigma_b) = rdm.blocks().expect("distinguishable RDM has blocks");
    let entropy_a = von_neumann_entropy(&sigma_a, tol)?;
    let entropy_b = von_neumann_entropy(&sigma_b, tol)?;

    let basis = state_d.basis().clone();
    let dim = basis.dim();
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for (r, cr) in basis.configs().iter().enumerate() {
        for (c, cc) in basis.configs().iter().enumerate() {
            rho[(r, c)] = sigma_a[(cr.0, cc.0)] * sigma_b[(cr.1 - a, cc.1 - a)];
        }
    }
    let state = TwoParticleState::with_tolerances(basis, Representation::Mixed(rho), tol)?;
    Ok(ProductMaxEnt {
        sigma_a,
        sigma_b,
        entropy_a,
        entropy_b,
        state,
    })
}

/// `S(sigma_A) + S(sigma_B) - S(sigma)`.
pub fn mutual_entropy(state_d: &TwoParticleState) -> Result<f64> {
    let tol = Tolerances::default();
    let product = distinguishable_maxent(state_d, &tol)?;
    Ok(product.entropy() - state_d.entropy(&tol)?)
}

/// True iff `C2 <= tol`.
pub fn is_uncorrelated(state: &TwoParticleState, tol: f64) -> Result<bool> {
    Ok(correlation_measure(state)?.c2 <= tol)
}

/// `C2` of a distinguishable state and of its fermion and boson counterparts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeComparison {
    pub distinguishable: f64,
    pub fermion: f64,
    pub boson: f64,
}

impl TypeComparison {
    pub fn ordered(&self, slack: f64) -> bool {
        self.distinguishable <= self.fermion + slack && self.fermion <= self.boson + slack
    }
}

/// Evaluates the three measures and checks `C_D <= C_F <= C_B`.
pub fn compare_types(state_d: &TwoParticleState) -> Result<TypeComparison> {
    compare_types_with(state_d, &Tolerances::default())
}

pub fn compare_types_with(state_d: &TwoParticleState, tol: &Tolerances) -> Result<TypeComparison> {
    let (state_f, state_b) = counterparts(state_d)?;
    let rd = correlation_measure_with(state_d, Route::Default, tol)?;
    let rf = correlation_measure_with(&state_f, Route::Default, tol)?;
    let rb = correlation_measure_with(&state_b, Route::Default, tol)?;

    let spread = [rf.entropy_state, rb.entropy_state]
        .iter()
        .map(|s| (s - rd.entropy_state).abs())
        .fold(0.0, f64::max);
    if spread > tol.counterpart_entropy {
        return Err(Error::Scientific(format!(
            "counterpart entropies differ by {spread:.3e}"
        )));
    }
    let cmp = TypeComparison {
        distinguishable: rd.c2,
        fermion: rf.c2,
        boson: rb.c2,
    };
    if !cmp.ordered(tol.ordering) {
        return Err(Error::Scientific(format!(
            "ordering C_D <= C_F <= C_B violated: ({:.12}, {:.12}, {:.12})",
            cmp.distinguishable, cmp.fermion, cmp.boson
        )));
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    const D11: ParticleType = ParticleType::Distinguishable {
        num_modes_a: 1,
        num_modes_b: 1,
    };
    const D22: ParticleType = ParticleType::Distinguishable {
        num_modes_a: 2,
        num_modes_b: 2,
    };

    #[test]
    fn boson_bell_like_is_ln10() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = TwoParticleState::from_configs(ParticleType::Boson, 4, &[((0, 2), r(h)), ((1, 3), r(h))]).unwrap();
        let rep = correlation_measure(&s).unwrap();
        assert!((rep.c2 - 10f64.ln()).abs() < 1e-12);
        assert_eq!(rep.entropy_state, 0.0);
    }

    #[test]
    fn fermion_classical_mixture_is_ln3() {
        let s = TwoParticleState::from_mixture(
            ParticleType::Fermion,
            4,
            &[(0.5, vec![((0, 2), r(1.0))]), (0.5, vec![((1, 3), r(1.0))])],
        )
        .unwrap();
        let rep = correlation_measure(&s).unwrap();
        assert!((rep.c2 - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn boson_double_occupation_uncorrelated() {
        let s = TwoParticleState::from_configs(ParticleType::Boson, 1, &[((0, 0), r(1.0))]).unwrap();
        assert!(correlation_measure(&s).unwrap().c2.abs() < 1e-15);
        assert!(is_uncorrelated(&s, 1e-8).unwrap());
    }

    #[test]
    fn uncorrelated_examples() {
        let f = TwoParticleState::from_configs(ParticleType::Fermion, 2, &[((0, 1), r(1.0))]).unwrap();
        assert!(is_uncorrelated(&f, 1e-8).unwrap());
        let b = TwoParticleState::from_configs(ParticleType::Boson, 2, &[((0, 1), r(1.0))]).unwrap();
        assert!(!is_uncorrelated(&b, 1e-8).unwrap());
        assert!((correlation_measure(&b).unwrap().c2 - 3f64.ln()).abs() < 1e-14);
        let m = maxent_state(&b, Route::Default, &Tolerances::default()).unwrap();
        assert!(is_uncorrelated(&m, 1e-8).unwrap());
    }

    #[test]
    fn product_state_has_zero_mutual_entropy() {
        // (0.6|0> + 0.8|1>)_A (x) (|2> + i|3>)/sqrt(2)_B
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = [r(0.6), r(0.8)];
        let b = [r(h), C64::new(0.0, h)];
        let amps: Vec<_> = (0..2)
            .flat_map(|i| (0..2).map(move |j| ((i, 2 + j), a[i] * b[j])))
            .collect();
        let s = TwoParticleState::from_configs(D22, 4, &amps).unwrap();
        assert!(mutual_entropy(&s).unwrap().abs() < 1e-13);
    }

    #[test]
    fn distinguishable_table_rows() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let row1 = TwoParticleState::from_configs(D11, 2, &[((0, 1), r(1.0))]).unwrap();
        let row2 = TwoParticleState::from_configs(D22, 4, &[((0, 2), r(h)), ((1, 3), r(h))]).unwrap();
        let row3 =
            TwoParticleState::from_mixture(D22, 4, &[(0.5, vec![((0, 2), r(1.0))]), (0.5, vec![((1, 3), r(1.0))])])
                .unwrap();
        let tol = Tolerances::default();
        let p1 = distinguishable_maxent(&row1, &tol).unwrap();
        assert!(p1.entropy_a.abs() < 1e-15 && p1.entropy_b.abs() < 1e-15);
        let p2 = distinguishable_maxent(&row2, &tol).unwrap();
        assert!((p2.entropy_a - 2f64.ln()).abs() < 1e-14);
        assert!((p2.entropy_b - 2f64.ln()).abs() < 1e-14);
        assert!((mutual_entropy(&row2).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!((mutual_entropy(&row3).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(mutual_entropy(&row1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn compare_rows() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let row1 = TwoParticleState::from_configs(D11, 2, &[((0, 1), r(1.0))]).unwrap();
        let row2 = TwoParticleState::from_configs(D22, 4, &[((0, 2), r(h)), ((1, 3), r(h))]).unwrap();
        let c1 = compare_types(&row1).unwrap();
        assert!(c1.distinguishable.abs() < 1e-14 && c1.fermion.abs() < 1e-14);
        assert!((c1.boson - 3f64.ln()).abs() < 1e-14);
        let c2 = compare_types(&row2).unwrap();
        assert!((c2.distinguishable - 4f64.ln()).abs() < 1e-12);
        assert!((c2.fermion - 6f64.ln()).abs() < 1e-12);
        assert!((c2.boson - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn non_distinguishable_inputs_rejected() {
        let b = TwoParticleState::from_configs(ParticleType::Boson, 2, &[((0, 1), r(1.0))]).unwrap();
        assert!(compare_types(&b).is_err());
        assert!(mutual_entropy(&b).is_err());
    }

    #[test]
    fn generic_dual_agrees_with_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let row2 = TwoParticleState::from_configs(D22, 4, &[((0, 2), r(h)), ((1, 3), r(h))]).unwrap();
        let rep = correlation_measure_with(&row2, Route::Dual, &Tolerances::default()).unwrap();
        assert_eq!(rep.method, Method::Dual);
        assert!((rep.c2 - 4f64.ln()).abs() < 1e-12);
    }
}
