//! Maximum-entropy correlation measure for states of two identical particles.
//!
//! The correlation in a two-particle state is the information it carries
//! beyond its 1-particle reduced density matrix. Among all states sharing
//! that matrix, the one of largest von Neumann entropy is the uncorrelated
//! reference; the measure is the entropy gap
//!
//! ```text
//! C2(rho) = S(rho_maxent) - S(rho)        (nats)
//! ```
//!
//! The reference state has the product form `prod_mu x_mu^{n_mu}` in the
//! eigenmodes of the 1-particle matrix, with weights fixed by
//!
//! ```text
//! x_mu * sum_nu x_nu  +/-  x_mu^2  =  lambda_mu     (+ bosons, - fermions)
//! ```
//!
//! For effectively distinguishable particles (one particle in each of two
//! orthogonal mode subsets) the measure reduces to the mutual entropy.
//!
//! ## Modules
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`fock_space`] | pair configuration bases, annihilation matrix elements, mode rotations, counterpart states |
//! | [`rdm`] | two-particle states, 1-particle RDM, Hermitian spectra, von Neumann entropy |
//! | [`maxent`] | boson fixed point, convex dual solver, fermion saturation, maxent state construction |
//! | [`correlation`] | `C2`, mutual entropy, uncorrelated test, boson/fermion/distinguishable comparison |
//! | [`schmidt`] | Schmidt coefficients and canonical forms of pure states |
//! | [`oracle`] | brute-force entropy maximization and seeded random states |
//! | [`statefile`] | JSON state file schema |
//! | [`cli`] | command implementations behind the `paircorr` binary |
//!
//! ## Quick start
//!
//! ```
//! use paircorr::{correlation, fock_space::ParticleType, rdm::TwoParticleState};
//!
//! // Two bosons, one in each of two modes.
//! let state = TwoParticleState::from_configs(
//!     ParticleType::Boson,
//!     2,
//!     &[((0, 1), paircorr::C64::new(1.0, 0.0))],
//! )
//! .unwrap();
//! let report = correlation::correlation_measure(&state).unwrap();
//! assert!((report.c2 - 3f64.ln()).abs() < 1e-12);
//! ```

pub mod cli;
pub mod correlation;
pub mod error;
pub mod fock_space;
pub mod maxent;
pub mod oracle;
pub mod rdm;
pub mod schmidt;
pub mod statefile;
pub mod tolerances;

pub(crate) mod linalg;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

/// Complex scalar used for all amplitudes and matrix entries.
pub type C64 = num_complex::Complex64;
