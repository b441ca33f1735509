//! Maximum-entropy state with a prescribed 1-particle RDM.
//!
//! In the eigenmodes `mu` of `sigma1` the maximizer is
//! `sigma_maxent = prod_mu x_mu^{n_mu} / Z` restricted to two particles, with
//! the weights fixed by `x_mu * s +/- x_mu^2 = lambda_mu` (`s = sum x`,
//! `+` bosons, `-` fermions). Three routes are provided:
//!
//! * bosons: scalar bisection on `s`, each `x_mu` being the unique positive
//!   root of `x^2 + s x = lambda_mu`;
//! * fermions (and, on request, every type): Newton descent on the convex
//!   dual `F(gamma) = ln Z(gamma) - gamma . lambda` with backtracking;
//! * distinguishable: the product of the two block marginals.
//!
//! Fermion modes with `lambda_mu = 1` are factored out before solving.

use nalgebra::{DMatrix, DVector};

use crate::fock_space::{enumerate_pair_basis, PairBasis, PairConfig, ParticleType};
use crate::linalg::{self, real_symmetric_eigen};
use crate::rdm::{spectral_decompose_with, OneParticleRdm, Representation, TwoParticleState};
use crate::{C64, Error, Result, Tolerances};

/// Which solver produced the weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BosonFixedPoint,
    Dual,
    Product,
    /// Every mode saturated or empty; nothing to solve.
    Saturated,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::BosonFixedPoint => "boson-fixed-point",
            Method::Dual => "convex-dual",
            Method::Product => "product",
            Method::Saturated => "saturated",
        }
    }
}

/// Solver selection for [`solve_maxent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Bisection for bosons, dual for fermions, product for distinguishable.
    #[default]
    Default,
    /// Convex dual for every type.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
}

/// Solved maximum-entropy state, described in the eigenmodes of `sigma1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntSolution {
    pub particle_type: ParticleType,
    /// Eigenmodes of `sigma1` as columns.
    pub modes: DMatrix<C64>,
    /// `lambda_mu`, one per column of `modes`.
    pub occupations: Vec<f64>,
    /// `x_mu = exp(gamma_mu)`; zero for empty modes, one for saturated modes.
    pub weights: Vec<f64>,
    /// `gamma_mu`; `-inf` for empty modes, `+inf` for saturated modes.
    pub gamma: Vec<f64>,
    /// Partition sum of the unsaturated part (1 after gauge fixing).
    pub partition: f64,
    pub entropy: f64,
    pub saturated_modes: Vec<usize>,
    pub diagnostics: Diagnostics,
}

impl MaxEntSolution {
    /// Probability of the eigenmode configuration `(i, j)` in the maxent state.
    pub fn config_weight(&self, config: PairConfig) -> f64 {
        let PairConfig(i, j) = config;
        let x = &self.weights;
        match self.saturated_modes.as_slice() {
            [] => {
                let raw = if i == j { x[i] * x[i] } else { x[i] * x[j] };
                raw / self.partition
            }
            &[f] => {
                if i == f && j != f {
                    x[j] / self.partition
                } else if j == f && i != f {
                    x[i] / self.partition
                } else {
                    0.0
                }
            }
            &[f, g] => {
                if (i == f && j == g) || (i == g && j == f) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    /// Mean occupation of each eigenmode in the maxent state, from the weights.
    pub fn model_occupations(&self) -> Vec<f64> {
        let m = self.weights.len();
        let mut n = vec![0.0; m];
        if let Ok(basis) = enumerate_pair_basis(self.particle_type, m) {
            for &c in basis.configs() {
                let w = self.config_weight(c);
                n[c.0] += w;
                n[c.1] += w;
            }
        }
        n
    }
}

/// Bisection result for the boson scalar equation.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonFixedPoint {
    pub s: f64,
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Positive root of `x^2 + s x = lambda`, written without cancellation.
fn boson_root(s: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    2.0 * lambda / (s + (s * s + 4.0 * lambda).sqrt())
}

/// Solves `x_mu (s + x_mu) = lambda_mu`, `sum x_mu = s` by bisection on
/// `g(s) = sum x_mu(s) - s`, which is strictly decreasing on `[0, sum sqrt(lambda)]`.
pub fn solve_boson_fixed_point(lambda: &[f64], tol: &Tolerances) -> Result<BosonFixedPoint> {
    if let Some(&bad) = lambda.iter().find(|&&l| !(-tol.clamp..=2.0 + tol.occupation_bound).contains(&l)) {
        return Err(Error::Domain(format!("boson occupation {bad} outside [0, 2]")));
    }
    let total: f64 = lambda.iter().sum();
    if (total - 2.0).abs() > tol.rdm_trace {
        return Err(Error::Domain(format!("occupations sum to {total:.15}, expected 2")));
    }
    let lambda: Vec<f64> = lambda.iter().map(|&l| l.max(0.0)).collect();
    let g = |s: f64| lambda.iter().map(|&l| boson_root(s, l)).sum::<f64>() - s;

    let mut lo = 0.0;
    let mut hi: f64 = lambda.iter().map(|l| l.sqrt()).sum();
    if !(g(lo) > 0.0 && g(hi) <= 0.0) {
        return Err(Error::invariant(
            "boson bracket",
            format!("g(0) = {:.3e}, g({hi:.3e}) = {:.3e}", g(lo), g(hi)),
        ));
    }
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let s = if g(lo).abs() < g(hi).abs() { lo } else { hi };
    let weights: Vec<f64> = lambda.iter().map(|&l| boson_root(s, l)).collect();
    let residual = (weights.iter().sum::<f64>() - s).abs();
    if residual > tol.boson_fixed_point {
        return Err(Error::Convergence {
            method: "boson bisection",
            iterations,
            residual,
        });
    }
    Ok(BosonFixedPoint {
        s,
        weights,
        iterations,
        residual,
    })
}

/// Minimizer of the convex dual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    /// Gauge-fixed so that `Z(gamma) = 1` (and, for distinguishable
    /// particles, `sum_A x = sum_B x = 1`).
    pub gamma: Vec<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
}

struct DualEval {
    value: f64,
    log_partition: f64,
    gradient: DVector<f64>,
    hessian: DMatrix<f64>,
}

fn dual_eval(configs: &[PairConfig], gamma: &[f64], lambda: &[f64]) -> DualEval {
    let m = gamma.len();
    let logs: Vec<f64> = configs.iter().map(|c| gamma[c.0] + gamma[c.1]).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    let log_partition = z.ln() + top;

    let mut n = DVector::<f64>::zeros(m);
    let mut second = DMatrix::<f64>::zeros(m, m);
    for (c, &wc) in configs.iter().zip(&w) {
        let p = wc / z;
        n[c.0] += p;
        n[c.1] += p;
        // n(c) n(c)^T for the occupation vector e_i + e_j
        for (a, b) in [(c.0, c.0), (c.0, c.1), (c.1, c.0), (c.1, c.1)] {
            second[(a, b)] += p;
        }
    }
    let hessian = second - &n * n.transpose();
    let lam = DVector::from_column_slice(lambda);
    let value = log_partition - DVector::from_column_slice(gamma).dot(&lam);
    DualEval {
        value,
        log_partition,
        gradient: n - lam,
        hessian,
    }
}

/// Newton step `-H^+ g` with the gauge null space of `H` projected out.
fn newton_direction(hessian: &DMatrix<f64>, gradient: &DVector<f64>) -> DVector<f64> {
    let (values, vectors) = real_symmetric_eigen(hessian.clone());
    let top = values.iter().copied().fold(0.0, f64::max);
    let cutoff = 1e-14 * top.max(1e-300);
    let mut d = DVector::zeros(gradient.len());
    for (k, &h) in values.iter().enumerate() {
        if h > cutoff {
            let u = vectors.column(k);
            d -= u * (u.dot(gradient) / h);
        }
    }
    d
}

/// Minimizes `F(gamma) = ln Z(gamma) - sum gamma_mu lambda_mu`, where `Z` sums
/// `prod x^n` over the pair configurations of `ptype` on `lambda.len()` modes.
///
/// All `lambda_mu` must be positive. For fermions they must lie strictly
/// below the saturation threshold (see [`handle_saturation`]).
pub fn solve_dual(ptype: ParticleType, lambda: &[f64], tol: &Tolerances) -> Result<DualSolution> {
    let m = lambda.len();
    let basis = enumerate_pair_basis(ptype, m)?;
    if let Some(&bad) = lambda.iter().find(|&&l| l <= 0.0) {
        return Err(Error::Domain(format!("dual solver needs positive occupations, got {bad}")));
    }
    if ptype == ParticleType::Fermion {
        if let Some(&bad) = lambda.iter().find(|&&l| l >= 1.0 - tol.saturation) {
            return Err(Error::Domain(format!(
                "fermion occupation {bad} is saturated; factor it out first"
            )));
        }
    }
    let configs = basis.configs();
    let mut gamma: Vec<f64> = lambda.iter().map(|&l| (l / 2.0 + 1e-12).ln()).collect();
    let mut eval = dual_eval(configs, &gamma, lambda);
    let mut iterations = 0;
    loop {
        let gnorm = eval.gradient.amax();
        if gnorm <= tol.dual_gradient {
            break;
        }
        if iterations >= tol.max_iterations {
            return Err(Error::Convergence {
                method: "convex dual",
                iterations,
                residual: gnorm,
            });
        }
        let mut d = newton_direction(&eval.hessian, &eval.gradient);
        let mut slope = d.dot(&eval.gradient);
        if !(slope < 0.0) {
            d = -eval.gradient.clone();
            slope = d.dot(&eval.gradient);
        }
        let slack = 4.0 * f64::EPSILON * (1.0 + eval.value.abs());
        let mut step = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = gamma.iter().zip(d.iter()).map(|(g, di)| g + step * di).collect();
            let next = dual_eval(configs, &trial, lambda);
            if next.value.is_finite() && next.value <= eval.value + 1e-4 * step * slope + slack {
                break Some((trial, next));
            }
            step *= 0.5;
            if step < 1e-20 {
                break None;
            }
        };
        match accepted {
            Some((trial, next)) => {
                gamma = trial;
                eval = next;
            }
            None => {
                return Err(Error::Convergence {
                    method: "convex dual line search",
                    iterations,
                    residual: gnorm,
                })
            }
        }
        iterations += 1;
    }

    let gradient_norm = eval.gradient.amax();
    match ptype.split() {
        None => {
            let shift = eval.log_partition / 2.0;
            gamma.iter_mut().for_each(|g| *g -= shift);
        }
        Some(a) => {
            for range in [0..a, a..m] {
                let top = gamma[range.clone()].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = top + gamma[range.clone()].iter().map(|g| (g - top).exp()).sum::<f64>().ln();
                gamma[range].iter_mut().for_each(|g| *g -= lse);
            }
        }
    }
    Ok(DualSolution {
        gamma,
        iterations,
        gradient_norm,
    })
}

/// Fermion modes forced occupied and the remaining problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Saturation {
    /// Modes with `lambda >= 1 - tol.saturation`.
    pub forced: Vec<usize>,
    /// Indices of the modes left free.
    pub free: Vec<usize>,
    /// Occupations of the free modes.
    pub reduced: Vec<f64>,
}

/// Splits off saturated fermion modes. With one forced mode the rest holds a
/// single particle whose maxent state has the occupations as its spectrum;
/// with two forced modes the maxent state is the pure pair on them.
pub fn handle_saturation(lambda: &[f64], tol: &Tolerances) -> Result<Saturation> {
    let mut forced = Vec::new();
    let mut free = Vec::new();
    let mut reduced = Vec::new();
    for (mu, &l) in lambda.iter().enumerate() {
        if l >= 1.0 - tol.saturation {
            forced.push(mu);
        } else {
            free.push(mu);
            reduced.push(l);
        }
    }
    if forced.len() > 2 {
        return Err(Error::invariant(
            "fermion saturation",
            format!("{} modes are fully occupied by two fermions", forced.len()),
        ));
    }
    if forced.len() == 2 {
        if let Some(&l) = reduced.iter().find(|&&l| l > tol.rdm_trace) {
            return Err(Error::invariant(
                "fermion saturation",
                format!("two saturated modes leave occupation {l:.3e} elsewhere"),
            ));
        }
    }
    Ok(Saturation { forced, free, reduced })
}

/// Solves for the maximum-entropy state of `rdm` with the default route.
pub fn solve_maxent(rdm: &OneParticleRdm) -> Result<MaxEntSolution> {
    solve_maxent_with(rdm, Route::Default, &Tolerances::default())
}

pub fn solve_maxent_with(rdm: &OneParticleRdm, route: Route, tol: &Tolerances) -> Result<MaxEntSolution> {
    let spectrum = spectral_decompose_with(rdm, tol)?;
    let ptype = rdm.particle_type();
    let lambda: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .map(|&l| if l <= tol.zero_occupation { 0.0 } else { l })
        .collect();
    let m = lambda.len();
    let mut weights = vec![0.0; m];
    let mut gamma = vec![f64::NEG_INFINITY; m];
    let mut saturated_modes = Vec::new();

    let diagnostics = match (ptype, route) {
        (ParticleType::Boson, Route::Default) => {
            let fp = solve_boson_fixed_point(&lambda, tol)?;
            for (mu, &x) in fp.weights.iter().enumerate() {
                weights[mu] = x;
                if x > 0.0 {
                    gamma[mu] = x.ln();
                }
            }
            Diagnostics {
                method: Method::BosonFixedPoint,
                iterations: fp.iterations,
                residual: fp.residual,
            }
        }
        (ParticleType::Distinguishable { .. }, Route::Default) => {
            for (mu, &l) in lambda.iter().enumerate() {
                weights[mu] = l;
                if l > 0.0 {
                    gamma[mu] = l.ln();
                }
            }
            Diagnostics {
                method: Method::Product,
                iterations: 0,
                residual: 0.0,
            }
        }
        (ParticleType::Fermion, _) => {
            let sat = handle_saturation(&lambda, tol)?;
            for &f in &sat.forced {
                weights[f] = 1.0;
                gamma[f] = f64::INFINITY;
            }
            saturated_modes = sat.forced.clone();
            match sat.forced.len() {
                0 => solve_free_modes(ptype, &lambda, &mut weights, &mut gamma, tol)?,
                1 => {
                    // one particle left over the free modes
                    for (&mu, &l) in sat.free.iter().zip(&sat.reduced) {
                        if l > 0.0 {
                            weights[mu] = l;
                            gamma[mu] = l.ln();
                        }
                    }
                    Diagnostics {
                        method: Method::Saturated,
                        iterations: 0,
                        residual: 0.0,
                    }
                }
                _ => Diagnostics {
                    method: Method::Saturated,
                    iterations: 0,
                    residual: 0.0,
                },
            }
        }
        _ => solve_free_modes(ptype, &lambda, &mut weights, &mut gamma, tol)?,
    };

    let mut solution = MaxEntSolution {
        particle_type: ptype,
        modes: spectrum.eigenvectors,
        occupations: spectrum.eigenvalues,
        weights,
        gamma,
        partition: 1.0,
        entropy: 0.0,
        saturated_modes,
        diagnostics,
    };
    solution.partition = partition_sum(&solution);
    solution.entropy = maxent_entropy(&solution);
    Ok(solution)
}

/// Runs the dual over the nonempty modes and scatters the result back.
fn solve_free_modes(
    ptype: ParticleType,
    lambda: &[f64],
    weights: &mut [f64],
    gamma: &mut [f64],
    tol: &Tolerances,
) -> Result<Diagnostics> {
    let active: Vec<usize> = (0..lambda.len()).filter(|&mu| lambda[mu] > 0.0).collect();
    let reduced_type = match ptype.split() {
        Some(a) => {
            let na = active.iter().filter(|&&mu| mu < a).count();
            ParticleType::Distinguishable {
                num_modes_a: na,
                num_modes_b: active.len() - na,
            }
        }
        None => ptype,
    };
    let sub: Vec<f64> = active.iter().map(|&mu| lambda[mu]).collect();
    let dual = solve_dual(reduced_type, &sub, tol)?;
    for (&mu, &g) in active.iter().zip(&dual.gamma) {
        gamma[mu] = g;
        weights[mu] = g.exp();
    }
    Ok(Diagnostics {
        method: Method::Dual,
        iterations: dual.iterations,
        residual: dual.gradient_norm,
    })
}

/// `Z` of the unsaturated part, summed over configurations.
fn partition_sum(solution: &MaxEntSolution) -> f64 {
    let x = &solution.weights;
    let m = x.len();
    match solution.saturated_modes.as_slice() {
        [] => {
            let Ok(basis) = enumerate_pair_basis(solution.particle_type, m) else {
                return f64::NAN;
            };
            basis
                .configs()
                .iter()
                .map(|c| if c.0 == c.1 { x[c.0] * x[c.0] } else { x[c.0] * x[c.1] })
                .sum()
        }
        [f] => (0..m).filter(|mu| mu != f).map(|mu| x[mu]).sum(),
        _ => 1.0,
    }
}

/// `Z = (s^2 + sum x^2) / 2` for bosons and `(s^2 - sum x^2) / 2` for fermions.
pub fn closed_form_partition(ptype: ParticleType, weights: &[f64]) -> Option<f64> {
    let s: f64 = weights.iter().sum();
    let sq: f64 = weights.iter().map(|x| x * x).sum();
    match ptype {
        ParticleType::Boson => Some((s * s + sq) / 2.0),
        ParticleType::Fermion => Some((s * s - sq) / 2.0),
        ParticleType::Distinguishable { .. } => None,
    }
}

/// `S(sigma_maxent) = ln Z - sum gamma_mu lambda_mu`, saturated and empty
/// modes contributing nothing.
pub fn maxent_entropy(solution: &MaxEntSolution) -> f64 {
    let dot: f64 = solution
        .gamma
        .iter()
        .zip(&solution.occupations)
        .filter(|(g, _)| g.is_finite())
        .map(|(g, &l)| g * l)
        .sum();
    let log_z = if solution.saturated_modes.len() >= 2 {
        0.0
    } else {
        solution.partition.ln()
    };
    log_z - dot
}

/// Diagonal weights over the eigenmode configurations, rotated back to the
/// original modes.
pub fn build_maxent_state(solution: &MaxEntSolution, basis: &PairBasis) -> Result<TwoParticleState> {
    if basis.particle_type() != solution.particle_type || basis.num_modes() != solution.weights.len() {
        return Err(Error::Dimension(format!(
            "solution for {} on {} modes does not match basis {} on {} modes",
            solution.particle_type,
            solution.weights.len(),
            basis.particle_type(),
            basis.num_modes()
        )));
    }
    let dim = basis.dim();
    let mut diag = DMatrix::<C64>::zeros(dim, dim);
    for (k, &c) in basis.configs().iter().enumerate() {
        diag[(k, k)] = C64::new(solution.config_weight(c), 0.0);
    }
    let w = basis.induced_rotation(&solution.modes)?;
    let rho = linalg::hermitian_part(&(&w * diag * w.adjoint()));
    TwoParticleState::new(basis.clone(), Representation::Mixed(rho))
}
