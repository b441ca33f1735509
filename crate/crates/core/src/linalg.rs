//! Dense Hermitian helpers shared by the modules.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{C64, Error, Result};

/// Magnitude above which a component counts as significant for phase fixing.
const SIGNIFICANT: f64 = 1e-8;

/// Eigenvalues closer than this (relative) are treated as one degenerate group.
const DEGENERATE: f64 = 1e-10;

/// Eigen-decomposition of a Hermitian matrix with descending eigenvalues.
///
/// Each eigenvector is phase-fixed so its first significant component is
/// real positive. Inside a degenerate group vectors are ordered by the index
/// of that component, then by its magnitude (largest first).
pub(crate) fn hermitian_eigen(
    matrix: &DMatrix<C64>,
    max_iterations: usize,
) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let n = matrix.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let sym = hermitian_part(matrix);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, max_iterations).ok_or(
        Error::Convergence {
            method: "hermitian eigensolver",
            iterations: max_iterations,
            residual: f64::NAN,
        },
    )?;

    let mut pairs: Vec<(f64, DVector<C64>)> = (0..n)
        .map(|k| (eig.eigenvalues[k], phase_fixed(eig.eigenvectors.column(k).into_owned())))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

    let scale = pairs.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[start].0 - pairs[end].0).abs() <= DEGENERATE * scale {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| tie_key(&a.1).cmp_key(&tie_key(&b.1)));
        start = end;
    }

    let values = pairs.iter().map(|p| p.0).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    Ok((values, vectors))
}

struct TieKey {
    index: usize,
    magnitude: f64,
}

impl TieKey {
    fn cmp_key(&self, other: &TieKey) -> Ordering {
        self.index
            .cmp(&other.index)
            .then(other.magnitude.partial_cmp(&self.magnitude).unwrap_or(Ordering::Equal))
    }
}

fn tie_key(v: &DVector<C64>) -> TieKey {
    v.iter()
        .enumerate()
        .find(|(_, z)| z.norm() > SIGNIFICANT)
        .map(|(index, z)| TieKey {
            index,
            magnitude: z.norm(),
        })
        .unwrap_or(TieKey {
            index: usize::MAX,
            magnitude: 0.0,
        })
}

/// Rotates `v` so its first significant component is real positive.
pub(crate) fn phase_fixed(mut v: DVector<C64>) -> DVector<C64> {
    if let Some(z) = v.iter().find(|z| z.norm() > SIGNIFICANT).copied() {
        let phase = z.conj() / z.norm();
        v *= phase;
    }
    v
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Largest |m_ij - conj(m_ji)|.
pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn trace_re(m: &DMatrix<C64>) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

#[cfg(test)]
pub(crate) fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `U diag(values) U^dagger`.
pub(crate) fn reconstruct(values: &[f64], vectors: &DMatrix<C64>) -> DMatrix<C64> {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(v);
    }
    let out = &scaled * vectors.adjoint();
    debug_assert_eq!(out.nrows(), n);
    out
}

/// `0 ln 0 = 0`, natural logarithm.
pub(crate) fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Shannon entropy in nats of nonnegative weights (already clamped).
pub(crate) fn shannon(weights: &[f64]) -> f64 {
    -weights.iter().map(|&p| xlogx(p)).sum::<f64>()
}

/// Symmetric real eigen-decomposition, ascending order not guaranteed.
pub(crate) fn real_symmetric_eigen(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    (eig.eigenvalues, eig.eigenvectors)
}

/// Orthonormal completion of `columns` into a unitary `n x n` matrix.
///
/// Candidates are taken from the standard basis in index order.
pub(crate) fn complete_unitary(columns: &[DVector<C64>], n: usize) -> DMatrix<C64> {
    let mut basis: Vec<DVector<C64>> = columns.to_vec();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = DVector::<C64>::zeros(n);
        e[k] = C64::new(1.0, 0.0);
        if let Some(v) = orthogonal_residual(&e, &basis) {
            if v.norm() > 1e-6 {
                basis.push(v.unscale(v.norm()));
            }
        }
    }
    let mut u = DMatrix::zeros(n, n);
    for (k, v) in basis.iter().enumerate().take(n) {
        u.set_column(k, v);
    }
    u
}

/// `v` minus its projection on the orthonormal set `basis` (twice, for stability).
pub(crate) fn orthogonal_residual(v: &DVector<C64>, basis: &[DVector<C64>]) -> Option<DVector<C64>> {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let overlap = b.dotc(&r);
            r -= b * overlap;
        }
    }
    Some(r)
}
