//! Brute-force entropy maximization over all states with a given RDM,
//! compared with the exponential-form solver.

use paircorr::fock_space::ParticleType;
use paircorr::maxent::solve_maxent;
use paircorr::oracle::{brute_force_max_entropy, random_state, OracleConfig};
use paircorr::rdm::one_particle_rdm;

fn main() -> paircorr::Result<()> {
    let shapes = [
        (ParticleType::Boson, 3),
        (ParticleType::Fermion, 4),
        (ParticleType::Fermion, 5),
        (ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 2 }, 4),
    ];
    for (k, (pt, m)) in shapes.into_iter().enumerate() {
        let target = one_particle_rdm(&random_state(pt, m, 1 + k % 2, k as u64)?)?;
        let solver = solve_maxent(&target)?;
        let oracle = brute_force_max_entropy(&target, &OracleConfig { seed: 7, ..OracleConfig::default() })?;
        println!(
            "{pt:<20} solver {:.12}  oracle {:.12}  residual {:.1e}  (restart {})",
            solver.entropy, oracle.best_entropy, oracle.constraint_residual, oracle.best_restart
        );
    }
    Ok(())
}
