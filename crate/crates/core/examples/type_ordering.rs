//! Random distinguishable states against their fermion and boson
//! counterparts: C_D <= C_F <= C_B.

use paircorr::correlation::compare_types;
use paircorr::fock_space::ParticleType;
use paircorr::oracle::random_state;

fn main() -> paircorr::Result<()> {
    let pt = ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 2 };
    let mut worst: f64 = f64::INFINITY;
    println!("{:>4} {:>4} {:>12} {:>12} {:>12}", "seed", "rank", "C_D", "C_F", "C_B");
    for seed in 0..200u64 {
        let rank = 1 + (seed % 4) as usize;
        let cmp = compare_types(&random_state(pt, 4, rank, seed)?)?;
        worst = worst.min((cmp.fermion - cmp.distinguishable).min(cmp.boson - cmp.fermion));
        if seed < 10 {
            println!(
                "{seed:>4} {rank:>4} {:>12.8} {:>12.8} {:>12.8}",
                cmp.distinguishable, cmp.fermion, cmp.boson
            );
        }
    }
    println!("200 states ordered; smallest step {worst:.3e}");
    Ok(())
}
