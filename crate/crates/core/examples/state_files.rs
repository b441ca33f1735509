//! Writing and reading JSON state files.

use paircorr::correlation::correlation_measure;
use paircorr::fock_space::ParticleType;
use paircorr::rdm::TwoParticleState;
use paircorr::statefile::StateFile;
use paircorr::C64;

fn main() -> paircorr::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = TwoParticleState::from_configs(
        ParticleType::Fermion,
        4,
        &[((0, 2), C64::new(h, 0.0)), ((1, 3), C64::new(0.0, h))],
    )?;
    let text = StateFile::from_state(&state).emit();
    print!("{text}");

    let back = StateFile::parse(&text)?.to_state()?;
    assert_eq!(StateFile::from_state(&back).emit(), text);
    println!("C2 = {:.15} (ln 6 = {:.15})", correlation_measure(&back)?.c2, 6f64.ln());

    let mut broken = StateFile::parse(&text)?;
    if let Some(amps) = broken.amplitudes.as_mut() {
        amps[1].modes = [3, 1];
    }
    match broken.to_state() {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
