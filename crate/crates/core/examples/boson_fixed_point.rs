//! Boson maxent weights from the scalar fixed point, checked against the
//! generic convex dual.

use paircorr::fock_space::ParticleType;
use paircorr::maxent::{solve_boson_fixed_point, solve_dual};
use paircorr::Tolerances;

fn main() -> paircorr::Result<()> {
    let tol = Tolerances::default();
    for lambda in [vec![2.0], vec![1.0, 1.0], vec![1.2, 0.5, 0.3], vec![0.5; 4]] {
        let fp = solve_boson_fixed_point(&lambda, &tol)?;
        let dual = solve_dual(ParticleType::Boson, &lambda, &tol)?;
        let gap = fp
            .weights
            .iter()
            .zip(&dual.gamma)
            .map(|(x, g)| (x - g.exp()).abs())
            .fold(0.0, f64::max);
        // x (s + x) = lambda with s = sum x, so s^2 + sum x^2 = 2
        let z = fp.s * fp.s + fp.weights.iter().map(|x| x * x).sum::<f64>();
        println!("lambda {lambda:?}");
        println!("  s = {:.15}  ({} bisection steps)", fp.s, fp.iterations);
        println!("  x = {:?}", fp.weights);
        println!("  2 Z = {z:.15}, dual agrees to {gap:.1e}");
    }
    Ok(())
}
