//! Schmidt analysis of pure two-particle states.
//!
//! Canonical forms, in the modes stored in [`SchmidtData::mode_basis`]:
//!
//! | type | form |
//! |------|------|
//! | boson | `sum_mu c_mu |2_mu>` |
//! | fermion | `sum_k c_k |1_{2k} 1_{2k+1}>` |
//! | distinguishable | `sum_mu c_mu |1_{A mu} 1_{B mu}>` |
//!
//! The coefficients come from the spectrum of `sigma1`: `sqrt(lambda/2)` for
//! bosons, `sqrt(lambda)` per degenerate pair for fermions and
//! `sqrt(lambda_A)` for distinguishable particles. The modes are eigenvectors
//! of `sigma1`, recombined inside degenerate eigenspaces so that the state
//! takes its canonical form.

use nalgebra::{DMatrix, DVector};

use crate::fock_space::{PairBasis, PairConfig, ParticleType};
use crate::linalg::{complete_unitary, orthogonal_residual};
use crate::rdm::{one_particle_rdm_with, spectral_decompose_with, Representation, TwoParticleState};
use crate::{C64, Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtData {
    pub particle_type: ParticleType,
    pub basis: PairBasis,
    /// Nonnegative, descending, squares summing to one.
    pub coefficients: Vec<f64>,
    /// Phase of each canonical amplitude in the analyzed state.
    pub phases: Vec<f64>,
    /// Unitary whose columns are the Schmidt modes.
    pub mode_basis: DMatrix<C64>,
    pub schmidt_number: usize,
}

impl SchmidtData {
    /// Canonical configuration carrying coefficient `k`.
    pub fn canonical_config(&self, k: usize) -> PairConfig {
        match self.particle_type {
            ParticleType::Boson => PairConfig(k, k),
            ParticleType::Fermion => PairConfig(2 * k, 2 * k + 1),
            ParticleType::Distinguishable { num_modes_a, .. } => PairConfig(k, num_modes_a + k),
        }
    }
}

pub fn schmidt_coefficients(state: &TwoParticleState) -> Result<SchmidtData> {
    schmidt_coefficients_with(state, &Tolerances::default())
}

pub fn schmidt_coefficients_with(state: &TwoParticleState, tol: &Tolerances) -> Result<SchmidtData> {
    let psi = state.pure_vector(tol)?;
    let basis = state.basis().clone();
    let ptype = basis.particle_type();
    let m = basis.num_modes();
    let rdm = one_particle_rdm_with(state, tol)?;
    let spectrum = spectral_decompose_with(&rdm, tol)?;
    let lambda: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|&l| if l <= tol.zero_occupation { 0.0 } else { l })
        .collect();
    let vectors: Vec<DVector<C64>> = (0..m).map(|k| spectrum.eigenvectors.column(k).into_owned()).collect();
    let t = basis.amplitude_matrix(&psi);

    let (coefficients, mode_basis) = match ptype {
        ParticleType::Boson => {
            let coefficients: Vec<f64> = lambda.iter().map(|l| (l / 2.0).sqrt()).collect();
            (coefficients, takagi_modes(&t, &lambda, &vectors))
        }
        ParticleType::Fermion => {
            let coefficients = pair_fermion_spectrum(&lambda, tol)?;
            (coefficients, fermion_modes(&t, &lambda, &vectors))
        }
        ParticleType::Distinguishable {
            num_modes_a,
            num_modes_b,
        } => {
            let (la, lb) = lambda.split_at(num_modes_a);
            let coefficients = match_block_spectra(la, lb, tol)?;
            let modes = distinguishable_modes(&t, num_modes_a, num_modes_b, &coefficients, &vectors);
            (coefficients, modes)
        }
    };
    let schmidt_number = coefficients.iter().filter(|&&c| c > tol.schmidt).count();
    let mut data = SchmidtData {
        particle_type: ptype,
        basis,
        phases: vec![0.0; coefficients.len()],
        coefficients,
        mode_basis,
        schmidt_number,
    };
    let canon = canonical_amplitudes(&data, &psi)?;
    data.phases = canon.iter().map(|z| if z.norm() > 0.0 { z.arg() } else { 0.0 }).collect();
    Ok(data)
}

/// Greedy pairing of adjacent sorted eigenvalues; one coefficient per pair.
fn pair_fermion_spectrum(lambda: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(lambda.len() / 2);
    for pair in lambda.chunks(2) {
        match *pair {
            [a, b] => {
                if (a - b).abs() > tol.pairing {
                    return Err(Error::Pairing(format!("eigenvalues {a:.12} and {b:.12} do not pair")));
                }
                out.push(((a + b) / 2.0).max(0.0).sqrt());
            }
            [a] => {
                if a > tol.pairing {
                    return Err(Error::Pairing(format!("unpaired eigenvalue {a:.12}")));
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

fn match_block_spectra(la: &[f64], lb: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let n = la.len().max(lb.len());
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    for k in 0..n {
        let (a, b) = (get(la, k), get(lb, k));
        if (a - b).abs() > tol.pairing {
            return Err(Error::Pairing(format!("A eigenvalue {a:.12} does not match B eigenvalue {b:.12}")));
        }
    }
    Ok(la.iter().take(la.len().min(lb.len())).map(|l| l.sqrt()).collect())
}

/// Picks, among `vectors`, the residual of largest norm after projecting out `chosen`.
fn best_residual(vectors: &[DVector<C64>], active: &[usize], chosen: &[DVector<C64>]) -> Option<(usize, DVector<C64>)> {
    active
        .iter()
        .filter_map(|&k| orthogonal_residual(&vectors[k], chosen).map(|r| (k, r)))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .filter(|(_, r)| r.norm() > 1e-6)
        .map(|(k, r)| {
            let n = r.norm();
            (k, r.unscale(n))
        })
}

/// Takagi vectors `T conj(q) = t q`, one per nonzero eigenvalue, sorted by
/// eigenvalue and completed to a unitary.
fn takagi_modes(t: &DMatrix<C64>, lambda: &[f64], vectors: &[DVector<C64>]) -> DMatrix<C64> {
    let m = lambda.len();
    let active: Vec<usize> = (0..m).filter(|&k| lambda[k] > 0.0).collect();
    let mut chosen: Vec<DVector<C64>> = Vec::new();
    let mut order: Vec<(f64, usize)> = Vec::new();
    while chosen.len() < active.len() {
        let Some((k, r)) = best_residual(vectors, &active, &chosen) else {
            break;
        };
        let scale = lambda[k].sqrt() / 2.0;
        let kr = (t * r.conjugate()).unscale(scale);
        let plus = &r + &kr;
        let q = if plus.norm() >= 1.0 {
            plus.unscale(plus.norm())
        } else {
            let minus = (&r - &kr) * C64::new(0.0, 1.0);
            minus.unscale(minus.norm())
        };
        order.push((lambda[k], chosen.len()));
        chosen.push(q);
    }
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let sorted: Vec<DVector<C64>> = order.iter().map(|&(_, i)| chosen[i].clone()).collect();
    complete_unitary(&sorted, m)
}

/// Canonical pairs `(u, v)` with `T conj(u) = -t v`, so that the pair
/// contributes `2 t c_u^dagger c_v^dagger |vac>`.
fn fermion_modes(t: &DMatrix<C64>, lambda: &[f64], vectors: &[DVector<C64>]) -> DMatrix<C64> {
    let m = lambda.len();
    let active: Vec<usize> = (0..m).filter(|&k| lambda[k] > 0.0).collect();
    let mut chosen: Vec<DVector<C64>> = Vec::new();
    let mut pairs: Vec<(f64, DVector<C64>, DVector<C64>)> = Vec::new();
    while chosen.len() + 1 < active.len() {
        let Some((k, u)) = best_residual(vectors, &active, &chosen) else {
            break;
        };
        let scale = lambda[k].sqrt() / 2.0;
        let v = -(t * u.conjugate()).unscale(scale);
        let v = orthogonal_residual(&v, std::slice::from_ref(&u)).unwrap_or(v);
        let v = v.unscale(v.norm());
        chosen.push(u.clone());
        chosen.push(v.clone());
        pairs.push((lambda[k], u, v));
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let cols: Vec<DVector<C64>> = pairs.into_iter().flat_map(|(_, u, v)| [u, v]).collect();
    complete_unitary(&cols, m)
}

/// A-modes from the A-block eigenvectors, B-partners `T^T conj(u) / c`.
fn distinguishable_modes(
    t: &DMatrix<C64>,
    a: usize,
    b: usize,
    coefficients: &[f64],
    vectors: &[DVector<C64>],
) -> DMatrix<C64> {
    let m = a + b;
    let block = t.view((0, a), (a, b)).into_owned();
    let us: Vec<DVector<C64>> = vectors[..a].iter().map(|v| v.rows(0, a).into_owned()).collect();
    let mut vs: Vec<DVector<C64>> = Vec::new();
    for (u, &c) in us.iter().zip(coefficients) {
        if c > 1e-7 {
            let v = block.transpose() * u.conjugate();
            vs.push(v.unscale(v.norm()));
        }
    }
    let ub = complete_unitary(&vs, b);
    let mut out = DMatrix::zeros(m, m);
    for (k, u) in us.iter().enumerate() {
        out.view_mut((0, k), (a, 1)).copy_from(u);
    }
    out.view_mut((a, a), (b, b)).copy_from(&ub);
    out
}

/// Amplitudes of `psi` on the canonical configurations of `data`.
fn canonical_amplitudes(data: &SchmidtData, psi: &DVector<C64>) -> Result<Vec<C64>> {
    let w = data.basis.induced_rotation(&data.mode_basis)?;
    let local = w.adjoint() * psi;
    Ok((0..data.coefficients.len())
        .map(|k| {
            let idx = data.basis.index_of(data.canonical_config(k)).expect("canonical config in basis");
            local[idx]
        })
        .collect())
}

/// Number of coefficients above `threshold`.
pub fn schmidt_number(state: &TwoParticleState, threshold: f64) -> Result<usize> {
    let data = schmidt_coefficients(state)?;
    Ok(data.coefficients.iter().filter(|&&c| c > threshold).count())
}

/// Builds the canonical form with the stored coefficients and phases.
pub fn reconstruct_from_schmidt(data: &SchmidtData) -> Result<TwoParticleState> {
    let mut local = DVector::<C64>::zeros(data.basis.dim());
    for (k, (&c, &phase)) in data.coefficients.iter().zip(&data.phases).enumerate() {
        let idx = data
            .basis
            .index_of(data.canonical_config(k))
            .ok_or_else(|| Error::Dimension(format!("coefficient {k} has no canonical configuration")))?;
        local[idx] = C64::from_polar(c, phase);
    }
    let w = data.basis.induced_rotation(&data.mode_basis)?;
    let psi = w * local;
    let norm = psi.norm();
    TwoParticleState::new(data.basis.clone(), Representation::Pure(psi.unscale(norm)))
}

/// Best fidelity `|<rec|psi>|^2` over per-mode phases of the canonical form,
/// `(sum_k c_k |a_k|)^2` with `a_k` the canonical amplitudes of `state`.
pub fn reconstruction_fidelity(data: &SchmidtData, state: &TwoParticleState) -> Result<f64> {
    let psi = state.pure_vector(&Tolerances::default())?;
    let canon = canonical_amplitudes(data, &psi)?;
    let overlap: f64 = data.coefficients.iter().zip(&canon).map(|(c, a)| c * a.norm()).sum();
    Ok(overlap * overlap)
}

/// Reconstructs and checks the fidelity against `state`.
pub fn verify_reconstruction(data: &SchmidtData, state: &TwoParticleState, min_fidelity: f64) -> Result<f64> {
    let rec = reconstruct_from_schmidt(data)?;
    let a = rec.pure_vector(&Tolerances::default())?;
    let b = state.pure_vector(&Tolerances::default())?;
    let fidelity = a.dotc(&b).norm_sqr();
    if fidelity < min_fidelity {
        return Err(Error::invariant(
            "reconstruction fidelity",
            format!("achieved {fidelity:.12}, required {min_fidelity}"),
        ));
    }
    Ok(fidelity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn boson_double_occupation() {
        let s = TwoParticleState::from_configs(ParticleType::Boson, 1, &[((0, 0), r(1.0))]).unwrap();
        let d = schmidt_coefficients(&s).unwrap();
        assert_eq!(d.coefficients.len(), 1);
        assert!((d.coefficients[0] - 1.0).abs() < 1e-15);
        assert_eq!(d.schmidt_number, 1);
    }

    #[test]
    fn fermion_bell_like() {
        let s = TwoParticleState::from_configs(ParticleType::Fermion, 4, &[((0, 2), r(H)), ((1, 3), r(H))]).unwrap();
        let d = schmidt_coefficients(&s).unwrap();
        assert_eq!(d.coefficients.len(), 2);
        for c in &d.coefficients {
            assert!((c - H).abs() < 1e-14);
        }
        assert_eq!(d.schmidt_number, 2);
        assert!(verify_reconstruction(&d, &s, 1.0 - 1e-8).unwrap() > 1.0 - 1e-12);
    }

    /// `|1_0 1_1> = (|2_+> - |2_->)/sqrt(2)` with modes `(0 +/- 1)/sqrt(2)`;
    /// Takagi of `T = [[0, 1/2], [1/2, 0]]` by hand.
    #[test]
    fn boson_pair_rotates_to_double_occupations() {
        let s = TwoParticleState::from_configs(ParticleType::Boson, 2, &[((0, 1), r(1.0))]).unwrap();
        let d = schmidt_coefficients(&s).unwrap();
        assert!((d.coefficients[0] - H).abs() < 1e-14 && (d.coefficients[1] - H).abs() < 1e-14);
        assert_eq!(d.schmidt_number, 2);
        // each mode is (e0 + z e1)/sqrt(2) up to phase with |z| = 1
        for k in 0..2 {
            assert!((d.mode_basis[(0, k)].norm() - H).abs() < 1e-12);
            assert!((d.mode_basis[(1, k)].norm() - H).abs() < 1e-12);
        }
        let fid = reconstruction_fidelity(&d, &s).unwrap();
        assert!(fid > 1.0 - 1e-12);
        let rec = reconstruct_from_schmidt(&d).unwrap();
        let (Representation::Pure(a), Representation::Pure(b)) = (rec.representation(), s.representation()) else {
            unreachable!()
        };
        assert!(a.dotc(b).norm() > 1.0 - 1e-12);
    }

    #[test]
    fn schmidt_number_examples() {
        let f = TwoParticleState::from_configs(ParticleType::Fermion, 2, &[((0, 1), r(1.0))]).unwrap();
        assert_eq!(schmidt_number(&f, 1e-8).unwrap(), 1);
        let b = TwoParticleState::from_configs(ParticleType::Boson, 3, &[((1, 1), r(1.0))]).unwrap();
        assert_eq!(schmidt_number(&b, 1e-8).unwrap(), 1);
        let d = ParticleType::Distinguishable {
            num_modes_a: 2,
            num_modes_b: 2,
        };
        let bell = TwoParticleState::from_configs(d, 4, &[((0, 2), r(H)), ((1, 3), r(H))]).unwrap();
        assert_eq!(schmidt_number(&bell, 1e-8).unwrap(), 2);
    }

    #[test]
    fn single_boson_mode_reconstruction() {
        let s = TwoParticleState::from_configs(ParticleType::Boson, 1, &[((0, 0), r(1.0))]).unwrap();
        let d = schmidt_coefficients(&s).unwrap();
        let rec = reconstruct_from_schmidt(&d).unwrap();
        assert!(max_abs_diff(&rec.density_matrix(), &s.density_matrix()) < 1e-15);
    }

    #[test]
    fn mixed_state_is_not_pure() {
        let s = TwoParticleState::from_mixture(
            ParticleType::Fermion,
            4,
            &[(0.5, vec![((0, 2), r(1.0))]), (0.5, vec![((1, 3), r(1.0))])],
        )
        .unwrap();
        assert!(matches!(schmidt_coefficients(&s), Err(Error::NotPure { .. })));
    }

    #[test]
    fn fermion_odd_modes() {
        let s = TwoParticleState::from_configs(
            ParticleType::Fermion,
            3,
            &[((0, 1), r(0.6)), ((0, 2), C64::new(0.0, 0.8))],
        )
        .unwrap();
        let d = schmidt_coefficients(&s).unwrap();
        assert_eq!(d.coefficients.len(), 1);
        assert!((d.coefficients[0] - 1.0).abs() < 1e-14);
        assert!(verify_reconstruction(&d, &s, 1.0 - 1e-8).is_ok());
    }

    #[test]
    fn pairing_errors() {
        let tol = Tolerances::default();
        assert!(matches!(pair_fermion_spectrum(&[0.7, 0.6, 0.4, 0.3], &tol), Err(Error::Pairing(_))));
        assert!(matches!(pair_fermion_spectrum(&[0.5, 0.5, 0.5], &tol), Err(Error::Pairing(_))));
        assert!(matches!(match_block_spectra(&[0.6, 0.4], &[0.5, 0.5], &tol), Err(Error::Pairing(_))));
    }
}
