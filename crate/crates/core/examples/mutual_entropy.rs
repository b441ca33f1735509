//! For distinguishable particles the measure is the mutual entropy. The
//! product of the marginals and the generic dual solve agree.

use paircorr::correlation::{correlation_measure_with, distinguishable_maxent, mutual_entropy};
use paircorr::fock_space::ParticleType;
use paircorr::maxent::Route;
use paircorr::oracle::random_state;
use paircorr::Tolerances;

fn main() -> paircorr::Result<()> {
    let tol = Tolerances::default();
    let pt = ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 3 };
    for seed in 0..5u64 {
        let state = random_state(pt, 5, 1 + seed as usize, seed)?;
        let product = distinguishable_maxent(&state, &tol)?;
        let dual = correlation_measure_with(&state, Route::Dual, &tol)?;
        println!(
            "rank {}  S_A {:.10}  S_B {:.10}  I {:.12}  dual C2 {:.12}",
            1 + seed,
            product.entropy_a,
            product.entropy_b,
            mutual_entropy(&state)?,
            dual.c2
        );
    }
    Ok(())
}
