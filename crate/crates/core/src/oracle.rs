//! Brute-force verification: entropy maximization over every density matrix
//! with a given 1-particle RDM, and seeded random states.
//!
//! The search parametrizes `rho = G G^dagger / Tr(G G^dagger)` with a full
//! complex `G` and maximizes the augmented Lagrangian
//!
//! ```text
//! S(rho) - Re<mu, R> - (penalty / 2) |R|^2,     R = sigma1(rho) - target
//! ```
//!
//! with L-BFGS, raising the penalty through 10, 1e2, 1e3, 1e4 and updating
//! the multipliers `mu += penalty R` between inner solves. It never looks at
//! the exponential-family form, so it checks the solver independently.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::fock_space::{enumerate_pair_basis, PairBasis, ParticleType};
use crate::linalg::{hermitian_eigen, hermitian_part, xlogx};
use crate::rdm::{apply_rdm_terms, rdm_terms, OneParticleRdm, RdmTerm, Representation, TwoParticleState};
use crate::{C64, Error, Result};

/// Residual at or below which an oracle candidate counts as feasible.
pub const FEASIBLE_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    pub seed: u64,
    pub penalties: Vec<f64>,
    /// Multiplier updates per penalty stage.
    pub multiplier_rounds: usize,
    /// Multiplier updates at the largest penalty. Targets on the boundary
    /// (saturated or empty modes) need many: the residual there only decays
    /// like `1 / (penalty * rounds)`.
    pub final_rounds: usize,
    /// L-BFGS iterations per inner solve.
    pub inner_iterations: usize,
    /// Run restarts on separate threads.
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 16,
            seed: 0,
            penalties: vec![10.0, 1e2, 1e3, 1e4],
            multiplier_rounds: 12,
            final_rounds: 400,
            inner_iterations: 500,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_entropy: f64,
    pub best_state: DMatrix<C64>,
    /// Largest |sigma1(best_state) - target| entry.
    pub constraint_residual: f64,
    pub restarts_used: usize,
    /// Restart that produced the result.
    pub best_restart: usize,
}

/// Maximizes `S(rho)` over all two-particle states whose RDM is `target`.
pub fn brute_force_max_entropy(target: &OneParticleRdm, config: &OracleConfig) -> Result<OracleResult> {
    let ptype = target.particle_type();
    let m = target.num_modes();
    let basis = enumerate_pair_basis(ptype, m)?;
    if basis.dim() > 30 {
        return Err(Error::Dimension(format!("oracle limited to pair dimension 30, got {}", basis.dim())));
    }
    let problem = Problem::new(&basis, target.matrix().clone());
    if problem.support.ncols() == 0 {
        return Err(Error::Invariant {
            check: "oracle support",
            detail: "no pair state is compatible with the empty and full modes of the target".into(),
        });
    }

    let run = |restart: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64 + 1);
        problem.search(&mut rng, config)
    };
    let runs: Vec<(f64, DMatrix<C64>, f64)> = if config.parallel && config.restarts > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.restarts).map(|k| scope.spawn(move || run(k))).collect();
            handles.into_iter().map(|h| h.join().expect("oracle restart panicked")).collect()
        })
    } else {
        (0..config.restarts).map(run).collect()
    };

    let mut best: Option<(usize, &(f64, DMatrix<C64>, f64))> = None;
    let mut least_residual = f64::INFINITY;
    for (k, run) in runs.iter().enumerate() {
        least_residual = least_residual.min(run.2);
        if run.2 > FEASIBLE_RESIDUAL {
            continue;
        }
        if best.is_none_or(|(_, b)| run.0 > b.0) {
            best = Some((k, run));
        }
    }
    let Some((k, (entropy, state, residual))) = best else {
        return Err(Error::Convergence {
            method: "oracle augmented Lagrangian",
            iterations: config.restarts,
            residual: least_residual,
        });
    };
    Ok(OracleResult {
        best_entropy: *entropy,
        best_state: state.clone(),
        constraint_residual: *residual,
        restarts_used: config.restarts,
        best_restart: k,
    })
}

struct Problem {
    dim: usize,
    /// Orthonormal basis (columns) of the pair states compatible with the
    /// exactly empty and exactly full modes of the target; `G = support H`.
    support: DMatrix<C64>,
    modes: usize,
    terms: Vec<RdmTerm>,
    target: DMatrix<C64>,
}

struct Evaluation {
    value: f64,
    gradient: Vec<f64>,
    entropy: f64,
    residual: DMatrix<C64>,
    rho: DMatrix<C64>,
}

impl Problem {
    fn new(basis: &PairBasis, target: DMatrix<C64>) -> Self {
        let support = forced_support(basis, &target);
        Problem {
            dim: basis.dim(),
            support,
            modes: basis.num_modes(),
            terms: rdm_terms(basis),
            target,
        }
    }

    fn variables(&self) -> usize {
        2 * self.support.ncols() * self.dim
    }

    fn unpack(&self, x: &[f64]) -> DMatrix<C64> {
        let k = self.support.ncols();
        let n = k * self.dim;
        let h = DMatrix::from_iterator(k, self.dim, (0..n).map(|i| C64::new(x[i], x[n + i])));
        &self.support * h
    }

    /// Negative augmented Lagrangian and its gradient in `(Re G, Im G)`.
    fn evaluate(&self, x: &[f64], mu: &DMatrix<C64>, penalty: f64) -> Evaluation {
        let g = self.unpack(x);
        let gg = &g * g.adjoint();
        let t: f64 = gg.diagonal().iter().map(|z| z.re).sum();
        let rho = hermitian_part(&gg.unscale(t));
        let (p, v) = hermitian_eigen(&rho, 10_000).unwrap_or_else(|_| {
            (vec![1.0 / self.dim as f64; self.dim], DMatrix::identity(self.dim, self.dim))
        });
        let entropy = -p.iter().map(|&q| xlogx(q.max(0.0))).sum::<f64>();
        let log_p: Vec<f64> = p.iter().map(|&q| q.max(1e-300).ln()).collect();
        let log_rho = crate::linalg::reconstruct(&log_p, &v);

        let residual = apply_rdm_terms(&self.terms, &rho, self.modes) - &self.target;
        let norm2: f64 = residual.iter().map(|z| z.norm_sqr()).sum();
        let lin: f64 = mu.iter().zip(residual.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        let value = -entropy + lin + 0.5 * penalty * norm2;

        // Re Tr(phi d rho) = d value
        let mut phi = log_rho;
        for k in 0..self.dim {
            phi[(k, k)] += C64::new(1.0, 0.0);
        }
        let y = mu + residual.scale(penalty);
        for term in &self.terms {
            phi[(term.col, term.row)] += y[(term.eta, term.tau)].conj() * term.coef;
        }
        let phi = hermitian_part(&phi);
        let tr_phi_rho: f64 = (&phi * &rho).diagonal().iter().map(|z| z.re).sum();
        let grad = self.support.adjoint() * (&phi * &g - g.scale(tr_phi_rho)).scale(2.0 / t);
        let n = grad.len();
        let mut gradient = vec![0.0; 2 * n];
        for (k, z) in grad.iter().enumerate() {
            gradient[k] = z.re;
            gradient[n + k] = z.im;
        }
        Evaluation {
            value,
            gradient,
            entropy,
            residual,
            rho,
        }
    }

    /// One restart: returns `(entropy, rho, residual)`.
    fn search(&self, rng: &mut ChaCha8Rng, config: &OracleConfig) -> (f64, DMatrix<C64>, f64) {
        let n = self.variables();
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mut mu = DMatrix::<C64>::zeros(self.modes, self.modes);
        let mut last = self.evaluate(&x, &mu, config.penalties[0]);
        let stages = config.penalties.len();
        for (stage, &penalty) in config.penalties.iter().enumerate() {
            let rounds = if stage + 1 == stages { config.final_rounds } else { config.multiplier_rounds };
            for _ in 0..rounds {
                x = lbfgs(|z| {
                    let e = self.evaluate(z, &mu, penalty);
                    (e.value, e.gradient)
                }, x, config.inner_iterations);
                last = self.evaluate(&x, &mu, penalty);
                mu += last.residual.scale(penalty);
                if last.residual.iter().fold(0.0f64, |m, z| m.max(z.norm())) < 1e-11 {
                    break;
                }
            }
        }
        let residual = last.residual.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        (last.entropy, last.rho, residual)
    }
}

/// Limited-memory BFGS with Armijo backtracking; returns the final point.
fn lbfgs<F>(f: F, mut x: Vec<f64>, max_iterations: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    const MEMORY: usize = 8;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let (mut fx, mut g) = f(&x);
    let mut history: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    for _ in 0..max_iterations {
        let gnorm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gnorm < 1e-12 {
            break;
        }
        // two-loop recursion
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.last() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|qi| *qi *= gamma);
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&d, &g);
        if !(slope < 0.0) {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&d, &g);
        }
        let mut step = if history.is_empty() { 1.0 / gnorm.max(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let (ft, gt) = f(&trial);
            if ft.is_finite() && ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fxn, gn)) = accepted else {
            break;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if history.len() == MEMORY {
                history.remove(0);
            }
            history.push((s, y, 1.0 / sy));
        }
        let improvement = fx - fxn;
        x = xn;
        fx = fxn;
        g = gn;
        if improvement.abs() <= 1e-16 * (1.0 + fx.abs()) {
            break;
        }
    }
    x
}

/// A mode `v` with `<n_v> = 0` (or at its cap) pins every compatible state
/// to the kernel of `n_v` (or `cap - n_v`); both operators are PSD on the pair
/// space. Returns an orthonormal basis of the joint kernel.
fn forced_support(basis: &PairBasis, target: &DMatrix<C64>) -> DMatrix<C64> {
    const EXACT: f64 = 1e-12;
    let d = basis.dim();
    let m = basis.num_modes();
    let cap = match basis.particle_type() {
        ParticleType::Boson => 2.0,
        _ => 1.0,
    };
    let blocks: Vec<(usize, usize)> = match basis.particle_type().split() {
        Some(a) => vec![(0, a), (a, m - a)],
        None => vec![(0, m)],
    };
    let terms = rdm_terms(basis);
    let mut pinned = DMatrix::<C64>::zeros(d, d);
    for (start, len) in blocks {
        let block = target.view((start, start), (len, len)).into_owned();
        let Ok((values, vectors)) = hermitian_eigen(&block, 10_000) else {
            continue;
        };
        for (k, &lambda) in values.iter().enumerate() {
            let sign = if lambda <= EXACT {
                1.0
            } else if lambda >= cap - EXACT {
                -1.0
            } else {
                continue;
            };
            let mut v = DVector::<C64>::zeros(m);
            v.rows_mut(start, len).copy_from(&vectors.column(k));
            let mut number = DMatrix::<C64>::zeros(d, d);
            for term in &terms {
                number[(term.col, term.row)] += v[term.tau] * v[term.eta].conj() * term.coef;
            }
            if sign < 0.0 {
                number = DMatrix::<C64>::identity(d, d).scale(cap) - number;
            }
            pinned += hermitian_part(&number);
        }
    }
    let Ok((values, vectors)) = hermitian_eigen(&pinned, 10_000) else {
        return DMatrix::identity(d, d);
    };
    let kept: Vec<usize> = (0..d).filter(|&k| values[k].abs() <= 1e-9).collect();
    DMatrix::from_fn(d, kept.len(), |r, c| vectors[(r, kept[c])])
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Seeded random state: a mixture of `rank` Gaussian pure vectors over the
/// pair basis with flat-Dirichlet weights. `rank = 1` gives a pure state.
pub fn random_state(ptype: ParticleType, num_modes: usize, rank: usize, seed: u64) -> Result<TwoParticleState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(&mut rng, ptype, num_modes, rank)
}

pub fn random_state_with<R: Rng + ?Sized>(
    rng: &mut R,
    ptype: ParticleType,
    num_modes: usize,
    rank: usize,
) -> Result<TwoParticleState> {
    let basis = enumerate_pair_basis(ptype, num_modes)?;
    let dim = basis.dim();
    if rank == 0 || rank > dim {
        return Err(Error::Dimension(format!("rank {rank} outside 1..={dim}")));
    }
    if rank == 1 {
        let psi = random_unit_vector(rng, dim);
        return TwoParticleState::new(basis, Representation::Pure(psi));
    }
    let weights: Vec<f64> = (0..rank).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = DMatrix::<C64>::zeros(dim, dim);
    for w in weights {
        let psi = random_unit_vector(rng, dim);
        rho += (&psi * psi.adjoint()).scale(w / total);
    }
    let rho = hermitian_part(&rho);
    let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    TwoParticleState::new(basis, Representation::Mixed(rho.unscale(tr)))
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(k).scale_mut(1.0);
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Random mode rotation allowed for `ptype`: block diagonal for
/// distinguishable particles, Haar on all modes otherwise.
pub fn random_mode_rotation<R: Rng + ?Sized>(rng: &mut R, ptype: ParticleType, num_modes: usize) -> DMatrix<C64> {
    match ptype.split() {
        None => random_unitary(rng, num_modes),
        Some(a) => {
            let b = num_modes - a;
            let mut u = DMatrix::zeros(num_modes, num_modes);
            u.view_mut((0, 0), (a, a)).copy_from(&random_unitary(rng, a));
            u.view_mut((a, a), (b, b)).copy_from(&random_unitary(rng, b));
            u
        }
    }
}

/// Random pure state of Schmidt number one: both bosons in one random mode,
/// two fermions in two orthogonal random modes, or a product of random A and
/// B modes.
pub fn random_uncorrelated_pure<R: Rng + ?Sized>(
    rng: &mut R,
    ptype: ParticleType,
    num_modes: usize,
) -> Result<TwoParticleState> {
    let basis = enumerate_pair_basis(ptype, num_modes)?;
    let u = random_mode_rotation(rng, ptype, num_modes);
    let first = u.column(0).into_owned();
    let t = match ptype {
        ParticleType::Boson => (&first * first.transpose()).unscale(std::f64::consts::SQRT_2),
        ParticleType::Fermion => {
            let second = u.column(1).into_owned();
            (&first * second.transpose() - &second * first.transpose()).scale(0.5)
        }
        ParticleType::Distinguishable { num_modes_a, .. } => {
            let second = u.column(num_modes_a).into_owned();
            &first * second.transpose()
        }
    };
    let (psi, _) = basis.from_amplitude_matrix(&t);
    let norm = psi.norm();
    TwoParticleState::new(basis, Representation::Pure(psi.unscale(norm)))
}
