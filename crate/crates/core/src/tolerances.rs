//! Numerical tolerances for validation and solving, kept in one record.

/// Every threshold used by validation and the solvers.
///
/// The defaults are the library-wide contract; the CLI `--tol` flag
/// overrides the state-validation entries through [`Tolerances::with_validation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max |rho - rho^dagger| entry for a two-particle density matrix.
    pub hermitian: f64,
    /// Most negative eigenvalue tolerated before a state is rejected.
    pub psd: f64,
    /// |Tr rho - 1| for density matrices, |<psi|psi> - 1| for pure vectors.
    pub trace: f64,
    /// |Tr sigma1 - 2| for the 1-particle RDM.
    pub rdm_trace: f64,
    /// Slack on the upper eigenvalue bound of the RDM (1 for fermions, 2 for bosons).
    pub occupation_bound: f64,
    /// Max off-block entry of a distinguishable RDM.
    pub block: f64,
    /// Eigenvalues in `[-clamp, 0)` are treated as zero.
    pub clamp: f64,
    /// Eigenvalues below `-entropy_domain` make the entropy undefined.
    pub entropy_domain: f64,
    /// Occupations below this are treated as empty modes by the solvers.
    pub zero_occupation: f64,
    /// Fermion modes with occupation at least `1 - saturation` are forced occupied.
    pub saturation: f64,
    /// Gradient infinity-norm at which the dual solver stops.
    pub dual_gradient: f64,
    /// Iteration cap for the dual solver.
    pub max_iterations: usize,
    /// |sum x - s| accepted from the boson scalar solve.
    pub boson_fixed_point: f64,
    /// Iteration cap for Hermitian eigensolves.
    pub eigen_iterations: usize,
    /// Purity Tr rho^2 must be at least `1 - purity` for Schmidt analysis.
    pub purity: f64,
    /// Schmidt coefficients above this are counted in the Schmidt number.
    pub schmidt: f64,
    /// Max mismatch inside a paired fermion (or matched A/B) eigenvalue.
    pub pairing: f64,
    /// Negative C2 in `[-negativity, 0)` is clamped to zero; below is an error.
    pub negativity: f64,
    /// Default threshold of `is_uncorrelated`.
    pub uncorrelated: f64,
    /// Slack of the boson/fermion/distinguishable ordering check.
    pub ordering: f64,
    /// Allowed spread of S(rho) across counterpart states.
    pub counterpart_entropy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-12,
            psd: 1e-10,
            trace: 1e-12,
            rdm_trace: 1e-10,
            occupation_bound: 1e-10,
            block: 1e-10,
            clamp: 1e-10,
            entropy_domain: 1e-8,
            zero_occupation: 1e-12,
            saturation: 1e-9,
            dual_gradient: 1e-11,
            max_iterations: 10_000,
            boson_fixed_point: 1e-13,
            eigen_iterations: 10_000,
            purity: 1e-10,
            schmidt: 1e-8,
            pairing: 1e-8,
            negativity: 1e-9,
            uncorrelated: 1e-8,
            ordering: 1e-9,
            counterpart_entropy: 1e-10,
        }
    }
}

impl Tolerances {
    /// Replaces the state-validation tolerances (Hermiticity, trace, norm).
    pub fn with_validation(mut self, tol: f64) -> Self {
        self.hermitian = tol;
        self.trace = tol;
        self
    }
}
