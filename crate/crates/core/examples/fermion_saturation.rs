//! Fermion maxent states near and at a saturated mode.

use paircorr::fock_space::ParticleType;
use paircorr::maxent::{solve_maxent, MaxEntSolution};
use paircorr::rdm::OneParticleRdm;
use paircorr::{Tolerances, C64};

use nalgebra::{DMatrix, DVector};

fn diagonal(lambda: &[f64]) -> paircorr::Result<OneParticleRdm> {
    let d = DVector::from_iterator(lambda.len(), lambda.iter().map(|&l| C64::new(l, 0.0)));
    OneParticleRdm::from_matrix(ParticleType::Fermion, DMatrix::from_diagonal(&d), &Tolerances::default())
}

fn show(lambda: &[f64], sol: &MaxEntSolution) {
    println!("lambda {lambda:?}");
    println!("  method {}  saturated {:?}", sol.diagnostics.method.name(), sol.saturated_modes);
    println!("  x {:?}", sol.weights);
    println!("  S = {:.15}", sol.entropy);
}

fn main() -> paircorr::Result<()> {
    // A dominant mode: every x_mu needs the minus root except the first.
    let near = [0.99, 0.505, 0.505];
    show(&near, &solve_maxent(&diagonal(&near)?)?);
    let exact = -(2.0 * 0.495 * 0.495f64.ln() + 0.01 * 0.01f64.ln());
    println!("  closed form {exact:.15}");

    // Mode 0 always occupied; the partner spreads over modes 1 and 2.
    let full = [1.0, 0.5, 0.5];
    show(&full, &solve_maxent(&diagonal(&full)?)?);
    println!("  ln 2        {:.15}", 2f64.ln());

    // Two saturated modes leave a single configuration.
    let pure = [1.0, 1.0, 0.0];
    show(&pure, &solve_maxent(&diagonal(&pure)?)?);
    Ok(())
}
