//! Schmidt coefficients and canonical reconstruction for pure states of all
//! three particle types.

use paircorr::correlation::correlation_measure;
use paircorr::fock_space::ParticleType;
use paircorr::oracle::random_state;
use paircorr::schmidt::{reconstruct_from_schmidt, reconstruction_fidelity, schmidt_coefficients};

fn main() -> paircorr::Result<()> {
    let cases = [
        (ParticleType::Boson, 3),
        (ParticleType::Fermion, 4),
        (ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 3 }, 5),
    ];
    for (pt, m) in cases {
        let state = random_state(pt, m, 1, 17)?;
        let data = schmidt_coefficients(&state)?;
        let canonical = reconstruct_from_schmidt(&data)?;
        println!("{pt} on {m} modes");
        for (k, c) in data.coefficients.iter().enumerate() {
            println!("  {}  c = {c:.12}", data.canonical_config(k));
        }
        println!("  schmidt number {}", data.schmidt_number);
        println!("  fidelity {:.15}", reconstruction_fidelity(&data, &state)?);
        println!(
            "  C2 original {:.12}  canonical {:.12}",
            correlation_measure(&state)?.c2,
            correlation_measure(&canonical)?.c2
        );
    }
    Ok(())
}
