//! Two-particle states, the 1-particle reduced density matrix, Hermitian
//! spectra and von Neumann entropy.

use nalgebra::{DMatrix, DVector};

use crate::fock_space::{annihilate, enumerate_pair_basis, PairBasis, PairConfig, ParticleType};
use crate::linalg::{self, hermitian_eigen, hermiticity_defect, trace_re};
use crate::{C64, Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Pure(DVector<C64>),
    Mixed(DMatrix<C64>),
}

/// A validated state of two particles over a canonical [`PairBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    basis: PairBasis,
    repr: Representation,
}

impl TwoParticleState {
    /// Validates with the default tolerances.
    pub fn new(basis: PairBasis, repr: Representation) -> Result<Self> {
        Self::with_tolerances(basis, repr, &Tolerances::default())
    }

    pub fn with_tolerances(basis: PairBasis, repr: Representation, tol: &Tolerances) -> Result<Self> {
        let dim = basis.dim();
        match &repr {
            Representation::Pure(psi) => {
                if psi.len() != dim {
                    return Err(Error::Dimension(format!(
                        "amplitude vector has length {}, basis has {dim}",
                        psi.len()
                    )));
                }
                let norm = psi.norm_squared();
                if !norm.is_finite() || (norm - 1.0).abs() > tol.trace {
                    return Err(Error::invariant(
                        "unit norm",
                        format!("|psi|^2 = {norm:.15} differs from 1 by more than {:.1e}", tol.trace),
                    ));
                }
            }
            Representation::Mixed(rho) => {
                if rho.nrows() != dim || rho.ncols() != dim {
                    return Err(Error::Dimension(format!(
                        "density matrix is {}x{}, basis has {dim}",
                        rho.nrows(),
                        rho.ncols()
                    )));
                }
                if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::invariant("finite entries", "density matrix has NaN or infinite entries"));
                }
                let herm = hermiticity_defect(rho);
                if herm > tol.hermitian {
                    return Err(Error::invariant(
                        "hermitian",
                        format!("density matrix Hermiticity defect {herm:.2e} exceeds {:.1e}", tol.hermitian),
                    ));
                }
                let tr = trace_re(rho);
                if (tr - 1.0).abs() > tol.trace {
                    return Err(Error::invariant(
                        "unit trace",
                        format!("Tr rho = {tr:.15} differs from 1 by more than {:.1e}", tol.trace),
                    ));
                }
                let (values, _) = hermitian_eigen(rho, tol.eigen_iterations)?;
                if let Some(&low) = values.last() {
                    if low < -tol.psd {
                        return Err(Error::invariant(
                            "positive semidefinite",
                            format!("density matrix eigenvalue {low:.3e} below -{:.1e}", tol.psd),
                        ));
                    }
                }
            }
        }
        Ok(TwoParticleState { basis, repr })
    }

    /// Pure state from `(mode pair, amplitude)` entries on a fresh basis.
    pub fn from_configs(
        ptype: ParticleType,
        num_modes: usize,
        amplitudes: &[((usize, usize), C64)],
    ) -> Result<Self> {
        let basis = enumerate_pair_basis(ptype, num_modes)?;
        let psi = config_vector(&basis, amplitudes)?;
        Self::new(basis, Representation::Pure(psi))
    }

    /// Mixture `sum_k w_k |psi_k><psi_k|` of pure components given as config lists.
    pub fn from_mixture(
        ptype: ParticleType,
        num_modes: usize,
        components: &[(f64, Vec<((usize, usize), C64)>)],
    ) -> Result<Self> {
        let basis = enumerate_pair_basis(ptype, num_modes)?;
        let dim = basis.dim();
        let mut rho = DMatrix::zeros(dim, dim);
        for (weight, amps) in components {
            if *weight < 0.0 {
                return Err(Error::invariant("nonnegative weights", format!("mixture weight {weight}")));
            }
            let psi = config_vector(&basis, amps)?;
            let norm = psi.norm_squared();
            if (norm - 1.0).abs() > Tolerances::default().trace {
                return Err(Error::invariant("unit norm", format!("mixture component has |psi|^2 = {norm}")));
            }
            rho += &psi * psi.adjoint() * C64::new(*weight, 0.0);
        }
        Self::new(basis, Representation::Mixed(rho))
    }

    pub fn basis(&self) -> &PairBasis {
        &self.basis
    }

    pub fn particle_type(&self) -> ParticleType {
        self.basis.particle_type()
    }

    pub fn num_modes(&self) -> usize {
        self.basis.num_modes()
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn density_matrix(&self) -> DMatrix<C64> {
        match &self.repr {
            Representation::Pure(psi) => psi * psi.adjoint(),
            Representation::Mixed(rho) => rho.clone(),
        }
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        match &self.repr {
            Representation::Pure(psi) => psi.norm_squared().powi(2),
            Representation::Mixed(rho) => rho.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// The amplitude vector, taken as the dominant eigenvector when the state
    /// is stored as a density matrix. Fails unless `Tr rho^2 >= 1 - tol.purity`.
    pub fn pure_vector(&self, tol: &Tolerances) -> Result<DVector<C64>> {
        let purity = self.purity();
        if purity < 1.0 - tol.purity {
            return Err(Error::NotPure {
                purity,
                tol: tol.purity,
            });
        }
        match &self.repr {
            Representation::Pure(psi) => Ok(psi.clone()),
            Representation::Mixed(rho) => {
                let (_, vecs) = hermitian_eigen(rho, tol.eigen_iterations)?;
                Ok(vecs.column(0).into_owned())
            }
        }
    }

    /// S(rho) in nats; exactly zero for the pure representation.
    pub fn entropy(&self, tol: &Tolerances) -> Result<f64> {
        match &self.repr {
            Representation::Pure(_) => Ok(0.0),
            Representation::Mixed(rho) => von_neumann_entropy(rho, tol),
        }
    }

    /// The state after the mode rotation `v` (`sigma1 -> v sigma1 v^dagger`).
    pub fn rotated(&self, v: &DMatrix<C64>) -> Result<Self> {
        let w = self.basis.induced_rotation(v)?;
        let repr = match &self.repr {
            Representation::Pure(psi) => Representation::Pure(&w * psi),
            Representation::Mixed(rho) => Representation::Mixed(&w * rho * w.adjoint()),
        };
        Self::new(self.basis.clone(), repr)
    }
}

pub(crate) fn config_vector(basis: &PairBasis, amplitudes: &[((usize, usize), C64)]) -> Result<DVector<C64>> {
    let mut psi = DVector::zeros(basis.dim());
    let mut seen = vec![false; basis.dim()];
    for &((i, j), a) in amplitudes {
        let cfg = PairConfig(i, j);
        let idx = basis.index_of(cfg).ok_or_else(|| {
            Error::invariant(
                "pair configuration",
                format!(
                    "{cfg} is not a {} configuration on {} modes",
                    basis.particle_type(),
                    basis.num_modes()
                ),
            )
        })?;
        if seen[idx] {
            return Err(Error::invariant("pair configuration", format!("{cfg} listed twice")));
        }
        seen[idx] = true;
        psi[idx] = a;
    }
    Ok(psi)
}

/// Validated M x M 1-particle reduced density matrix (trace 2).
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleRdm {
    matrix: DMatrix<C64>,
    particle_type: ParticleType,
}

impl OneParticleRdm {
    /// Checks Hermiticity, trace 2, positivity, the occupation bound of the
    /// type, and for distinguishable particles the two-block structure.
    pub fn from_matrix(ptype: ParticleType, matrix: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let m = matrix.nrows();
        if matrix.ncols() != m {
            return Err(Error::Dimension("RDM must be square".into()));
        }
        ptype.check_modes(m)?;
        let herm = hermiticity_defect(&matrix);
        if herm > tol.hermitian {
            return Err(Error::invariant("rdm hermitian", format!("defect {herm:.2e}")));
        }
        let tr = trace_re(&matrix);
        if (tr - 2.0).abs() > tol.rdm_trace {
            return Err(Error::invariant("rdm trace", format!("Tr sigma1 = {tr:.15}, expected 2")));
        }
        if let Some(a) = ptype.split() {
            let mut off = 0.0f64;
            for i in 0..a {
                for j in a..m {
                    off = off.max(matrix[(i, j)].norm()).max(matrix[(j, i)].norm());
                }
            }
            if off > tol.block {
                return Err(Error::invariant(
                    "two-block structure",
                    format!("off-block RDM entry {off:.2e} breaks n_A = n_B = 1"),
                ));
            }
            let tr_a: f64 = (0..a).map(|i| matrix[(i, i)].re).sum();
            if (tr_a - 1.0).abs() > tol.rdm_trace {
                return Err(Error::invariant("block trace", format!("Tr sigma_A = {tr_a:.15}, expected 1")));
            }
        }
        let (values, _) = hermitian_eigen(&matrix, tol.eigen_iterations)?;
        let upper = match ptype {
            ParticleType::Boson => 2.0,
            _ => 1.0,
        };
        if let (Some(&hi), Some(&lo)) = (values.first(), values.last()) {
            if lo < -tol.clamp {
                return Err(Error::invariant("rdm positive semidefinite", format!("eigenvalue {lo:.3e}")));
            }
            if hi > upper + tol.occupation_bound {
                return Err(Error::invariant(
                    "occupation bound",
                    format!("eigenvalue {hi:.15} exceeds {upper} for {}", ptype.name()),
                ));
            }
        }
        Ok(OneParticleRdm {
            matrix,
            particle_type: ptype,
        })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn particle_type(&self) -> ParticleType {
        self.particle_type
    }

    pub fn num_modes(&self) -> usize {
        self.matrix.nrows()
    }

    /// The A and B diagonal blocks of a distinguishable RDM.
    pub fn blocks(&self) -> Option<(DMatrix<C64>, DMatrix<C64>)> {
        let a = self.particle_type.split()?;
        let m = self.num_modes();
        Some((
            self.matrix.view((0, 0), (a, a)).into_owned(),
            self.matrix.view((a, a), (m - a, m - a)).into_owned(),
        ))
    }
}

/// One sparse contribution `coef * rho[row, col]` to `sigma1[eta, tau]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdmTerm {
    pub eta: usize,
    pub tau: usize,
    pub row: usize,
    pub col: usize,
    pub coef: f64,
}

/// All nonzero terms of the linear map `rho -> sigma1` for `basis`,
/// from `sigma1[eta, tau] = Tr(a_eta rho a_tau^dagger)`.
pub fn rdm_terms(basis: &PairBasis) -> Vec<RdmTerm> {
    let ptype = basis.particle_type();
    let m = basis.num_modes();
    // (config, eta) -> (k, coefficient)
    let actions: Vec<Vec<(usize, usize, f64)>> = basis
        .configs()
        .iter()
        .map(|&c| {
            (0..m)
                .filter_map(|eta| annihilate(ptype, eta, c).map(|(k, a)| (eta, k, a)))
                .collect()
        })
        .collect();
    let mut terms = Vec::new();
    for (row, left) in actions.iter().enumerate() {
        for (col, right) in actions.iter().enumerate() {
            for &(eta, k, a) in left {
                for &(tau, k2, b) in right {
                    if k == k2 {
                        terms.push(RdmTerm {
                            eta,
                            tau,
                            row,
                            col,
                            coef: a * b,
                        });
                    }
                }
            }
        }
    }
    terms
}

/// Applies the terms of [`rdm_terms`] to a density matrix.
pub fn apply_rdm_terms(terms: &[RdmTerm], rho: &DMatrix<C64>, num_modes: usize) -> DMatrix<C64> {
    let mut sigma = DMatrix::zeros(num_modes, num_modes);
    for t in terms {
        sigma[(t.eta, t.tau)] += rho[(t.row, t.col)] * t.coef;
    }
    sigma
}

/// `sigma1[eta, tau] = Tr(a_eta sigma2 a_tau^dagger)`, validated.
pub fn one_particle_rdm(state: &TwoParticleState) -> Result<OneParticleRdm> {
    one_particle_rdm_with(state, &Tolerances::default())
}

pub fn one_particle_rdm_with(state: &TwoParticleState, tol: &Tolerances) -> Result<OneParticleRdm> {
    let basis = state.basis();
    let ptype = basis.particle_type();
    let m = basis.num_modes();
    let sigma = match state.representation() {
        Representation::Pure(psi) => {
            // row eta holds a_eta |psi> in the one-particle basis
            let mut lowered = DMatrix::<C64>::zeros(m, m);
            for (c, &cfg) in basis.configs().iter().enumerate() {
                for eta in 0..m {
                    if let Some((k, a)) = annihilate(ptype, eta, cfg) {
                        lowered[(eta, k)] += psi[c] * a;
                    }
                }
            }
            &lowered * lowered.adjoint()
        }
        Representation::Mixed(rho) => apply_rdm_terms(&rdm_terms(basis), rho, m),
    };
    OneParticleRdm::from_matrix(ptype, sigma, tol)
}

/// Diagonal representation: descending eigenvalues, eigenvectors as columns.
///
/// For distinguishable particles the blocks are diagonalized separately; the
/// eigenvalues are then `[A block descending, B block descending]` and the
/// eigenvector matrix is block diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
    /// Number of A-modes when the spectrum is blockwise.
    pub split: Option<usize>,
}

impl Spectrum {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        linalg::reconstruct(&self.eigenvalues, &self.eigenvectors)
    }
}

pub fn spectral_decompose(rdm: &OneParticleRdm) -> Result<Spectrum> {
    spectral_decompose_with(rdm, &Tolerances::default())
}

pub fn spectral_decompose_with(rdm: &OneParticleRdm, tol: &Tolerances) -> Result<Spectrum> {
    match rdm.blocks() {
        None => {
            let (eigenvalues, eigenvectors) = hermitian_eigen(rdm.matrix(), tol.eigen_iterations)?;
            Ok(Spectrum {
                eigenvalues,
                eigenvectors,
                split: None,
            })
        }
        Some((block_a, block_b)) => {
            let a = block_a.nrows();
            let m = rdm.num_modes();
            let (va, ua) = hermitian_eigen(&block_a, tol.eigen_iterations)?;
            let (vb, ub) = hermitian_eigen(&block_b, tol.eigen_iterations)?;
            let mut u = DMatrix::zeros(m, m);
            u.view_mut((0, 0), (a, a)).copy_from(&ua);
            u.view_mut((a, a), (m - a, m - a)).copy_from(&ub);
            Ok(Spectrum {
                eigenvalues: va.into_iter().chain(vb).collect(),
                eigenvectors: u,
                split: Some(a),
            })
        }
    }
}

/// `S(rho) = -Tr rho ln rho` in nats for a unit-trace Hermitian PSD matrix.
pub fn von_neumann_entropy(rho: &DMatrix<C64>, tol: &Tolerances) -> Result<f64> {
    let tr = trace_re(rho);
    if (tr - 1.0).abs() > tol.rdm_trace {
        return Err(Error::Domain(format!("entropy needs unit trace, got {tr:.15}")));
    }
    let (values, _) = hermitian_eigen(rho, tol.eigen_iterations)?;
    entropy_of_spectrum(&values, tol)
}

/// Entropy of eigenvalues, clamping values in `[-entropy_domain, 0)` to zero.
pub fn entropy_of_spectrum(values: &[f64], tol: &Tolerances) -> Result<f64> {
    if let Some(&bad) = values.iter().find(|&&p| p < -tol.entropy_domain) {
        return Err(Error::Domain(format!("negative eigenvalue {bad:.3e} in entropy")));
    }
    let clamped: Vec<f64> = values.iter().map(|&p| p.max(0.0)).collect();
    Ok(linalg::shannon(&clamped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag(values: &[f64]) -> DMatrix<C64> {
        DMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&x| r(x))))
    }

    #[test]
    fn boson_double_occupation() {
        let s = TwoParticleState::from_configs(ParticleType::Boson, 1, &[((0, 0), r(1.0))]).unwrap();
        let rdm = one_particle_rdm(&s).unwrap();
        assert!(max_abs_diff(rdm.matrix(), &diag(&[2.0])) < 1e-15);
    }

    #[test]
    fn fermion_single_pair() {
        let s = TwoParticleState::from_configs(ParticleType::Fermion, 2, &[((0, 1), r(1.0))]).unwrap();
        let rdm = one_particle_rdm(&s).unwrap();
        assert!(max_abs_diff(rdm.matrix(), &diag(&[1.0, 1.0])) < 1e-15);
    }

    /// Brute force: build the 10-dim boson vector, apply `a_eta` by hand via
    /// the amplitude matrix (`a_eta psi = 2 sum_j T_eta,j |j>`), then sum.
    #[test]
    fn boson_bell_like_rdm_by_operator_algebra() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = TwoParticleState::from_configs(
            ParticleType::Boson,
            4,
            &[((0, 2), r(h)), ((1, 3), r(h))],
        )
        .unwrap();
        let Representation::Pure(psi) = s.representation() else {
            unreachable!()
        };
        let t = s.basis().amplitude_matrix(psi);
        let oracle = (&t * t.adjoint()) * r(4.0);
        assert!(max_abs_diff(&oracle, &diag(&[0.5; 4])) < 1e-15);
        let rdm = one_particle_rdm(&s).unwrap();
        assert!(max_abs_diff(rdm.matrix(), &oracle) < 1e-15);
    }

    #[test]
    fn pure_and_mixed_paths_agree() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for ptype in [ParticleType::Boson, ParticleType::Fermion] {
            let amps = [((0, 1), r(h)), ((1, 2), C64::new(0.0, h))];
            let pure = TwoParticleState::from_configs(ptype, 3, &amps).unwrap();
            let mixed = TwoParticleState::from_mixture(ptype, 3, &[(1.0, amps.to_vec())]).unwrap();
            let a = one_particle_rdm(&pure).unwrap();
            let b = one_particle_rdm(&mixed).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
        }
    }

    #[test]
    fn malformed_states_are_rejected() {
        let basis = enumerate_pair_basis(ParticleType::Boson, 2).unwrap();
        let not_normal = DVector::from_vec(vec![r(1.0), r(1.0), r(0.0)]);
        let err = TwoParticleState::new(basis.clone(), Representation::Pure(not_normal)).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "unit norm", .. }));

        let mut rho = diag(&[0.5, 0.5, 0.0]);
        rho[(0, 1)] = r(0.1);
        let err = TwoParticleState::new(basis.clone(), Representation::Mixed(rho)).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "hermitian", .. }));

        let rho = diag(&[1.2, -0.2, 0.0]);
        let err = TwoParticleState::new(basis.clone(), Representation::Mixed(rho)).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "positive semidefinite", .. }));

        let rho = diag(&[0.5, 0.4, 0.0]);
        let err = TwoParticleState::new(basis, Representation::Mixed(rho)).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "unit trace", .. }));

        let err = TwoParticleState::from_configs(ParticleType::Fermion, 2, &[((1, 1), r(1.0))]).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "pair configuration", .. }));
    }

    #[test]
    fn rdm_validation_errors() {
        let tol = Tolerances::default();
        let d = ParticleType::Distinguishable {
            num_modes_a: 1,
            num_modes_b: 1,
        };
        let mut m = diag(&[1.0, 1.0]);
        m[(0, 1)] = r(0.2);
        m[(1, 0)] = r(0.2);
        let err = OneParticleRdm::from_matrix(d, m, &tol).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "two-block structure", .. }));

        let err = OneParticleRdm::from_matrix(ParticleType::Fermion, diag(&[1.5, 0.5]), &tol).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "occupation bound", .. }));
        assert!(OneParticleRdm::from_matrix(ParticleType::Boson, diag(&[1.5, 0.5]), &tol).is_ok());
        assert!(OneParticleRdm::from_matrix(ParticleType::Boson, diag(&[1.5, 0.4]), &tol).is_err());
    }

    #[test]
    fn spectrum_of_identity_pair() {
        let rdm = OneParticleRdm::from_matrix(ParticleType::Fermion, diag(&[1.0, 1.0]), &Tolerances::default()).unwrap();
        let s = spectral_decompose(&rdm).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
        assert!(max_abs_diff(&s.eigenvectors, &DMatrix::identity(2, 2)) < 1e-15);
    }

    /// 2x2 real symmetric: eigenvalues from the characteristic polynomial,
    /// `(tr +/- sqrt(tr^2 - 4 det)) / 2` with tr = 2, det = 0.5.
    #[test]
    fn spectrum_two_by_two_characteristic_polynomial() {
        let m = DMatrix::from_row_slice(2, 2, &[r(1.5), r(0.5), r(0.5), r(0.5)]);
        let rdm = OneParticleRdm::from_matrix(ParticleType::Boson, m.clone(), &Tolerances::default()).unwrap();
        let s = spectral_decompose(&rdm).unwrap();
        let root = (4.0f64 - 2.0).sqrt();
        assert!((s.eigenvalues[0] - (2.0 + root) / 2.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - (2.0 - root) / 2.0).abs() < 1e-14);
        assert!(max_abs_diff(&s.reconstruct(), &m) < 1e-10);
    }

    #[test]
    fn entropy_examples() {
        let tol = Tolerances::default();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![r(h), C64::new(0.0, h)]);
        assert!(von_neumann_entropy(&(&v * v.adjoint()), &tol).unwrap().abs() < 1e-14);
        assert!((von_neumann_entropy(&diag(&[0.5, 0.5]), &tol).unwrap() - 2f64.ln()).abs() < 1e-15);
        let third = 1.0 / 3.0;
        let s = von_neumann_entropy(&diag(&[third, third, third]), &tol).unwrap();
        assert!((s - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn entropy_domain() {
        let tol = Tolerances::default();
        assert!(matches!(
            entropy_of_spectrum(&[1.0 + 1e-6, -1e-6], &tol),
            Err(Error::Domain(_))
        ));
        let s = entropy_of_spectrum(&[1.0 + 1e-9, -1e-9], &tol).unwrap();
        assert!(s.abs() < 1e-8);
        assert!(von_neumann_entropy(&diag(&[0.5, 0.4]), &tol).is_err());
    }

    #[test]
    fn distinguishable_spectrum_is_blockwise() {
        let d = ParticleType::Distinguishable {
            num_modes_a: 2,
            num_modes_b: 1,
        };
        let s = TwoParticleState::from_configs(d, 3, &[((0, 2), r(0.6)), ((1, 2), r(0.8))]).unwrap();
        let rdm = one_particle_rdm(&s).unwrap();
        let spectrum = spectral_decompose(&rdm).unwrap();
        assert_eq!(spectrum.split, Some(2));
        assert!((spectrum.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(spectrum.eigenvalues[1].abs() < 1e-14);
        assert!((spectrum.eigenvalues[2] - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&spectrum.reconstruct(), rdm.matrix()) < 1e-14);
    }
}
