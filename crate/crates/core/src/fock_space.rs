//! Two-particle configuration bases and annihilation matrix elements.
//!
//! Modes are zero-based. For effectively distinguishable particles the
//! A-modes occupy `0..num_modes_a` and the B-modes follow.
//!
//! Phase conventions:
//! * boson `(i, i)` is `|2_i> = (a_i^dagger)^2 / sqrt(2) |vac>`, `(i, j)` with
//!   `i < j` is `a_i^dagger a_j^dagger |vac>`;
//! * fermion `(i, j)` with `i < j` is `c_i^dagger c_j^dagger |vac>`, so
//!   `c_i |1_i 1_j> = +|1_j>` and `c_j |1_i 1_j> = -|1_i>`;
//! * distinguishable `(i, j)` is `a_i^dagger b_j^dagger |vac>`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::rdm::{Representation, TwoParticleState};
use crate::{C64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParticleType {
    Boson,
    Fermion,
    /// Identical particles restricted to one particle in each of two
    /// orthogonal mode subsets.
    Distinguishable {
        num_modes_a: usize,
        num_modes_b: usize,
    },
}

impl ParticleType {
    pub fn name(&self) -> &'static str {
        match self {
            ParticleType::Boson => "boson",
            ParticleType::Fermion => "fermion",
            ParticleType::Distinguishable { .. } => "distinguishable",
        }
    }

    /// Checks `num_modes` against the minimum for this type.
    pub fn check_modes(&self, num_modes: usize) -> Result<()> {
        match *self {
            ParticleType::Boson if num_modes < 1 => {
                Err(Error::Dimension("bosons need at least 1 mode".into()))
            }
            ParticleType::Fermion if num_modes < 2 => Err(Error::Dimension(format!(
                "fermions need at least 2 modes, got {num_modes}"
            ))),
            ParticleType::Distinguishable {
                num_modes_a,
                num_modes_b,
            } => {
                if num_modes_a < 1 || num_modes_b < 1 {
                    return Err(Error::Dimension(format!(
                        "distinguishable particles need at least one mode per subset, got ({num_modes_a}, {num_modes_b})"
                    )));
                }
                if num_modes != num_modes_a + num_modes_b {
                    return Err(Error::Dimension(format!(
                        "distinguishable mode count {num_modes} != {num_modes_a} + {num_modes_b}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Number of A-modes for the distinguishable type.
    pub fn split(&self) -> Option<usize> {
        match self {
            ParticleType::Distinguishable { num_modes_a, .. } => Some(*num_modes_a),
            _ => None,
        }
    }
}

impl fmt::Display for ParticleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParticleType::Distinguishable {
                num_modes_a,
                num_modes_b,
            } => write!(f, "distinguishable({num_modes_a}+{num_modes_b})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Ordered mode pair `(i, j)` occupied by the two particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairConfig(pub usize, pub usize);

impl PairConfig {
    /// Occupation number of `mode` in this configuration.
    pub fn occupation(&self, mode: usize) -> u8 {
        (self.0 == mode) as u8 + (self.1 == mode) as u8
    }

    /// Whether the pair obeys the configuration rule of `ptype` on `num_modes` modes.
    pub fn is_valid_for(&self, ptype: ParticleType, num_modes: usize) -> bool {
        let PairConfig(i, j) = *self;
        if j >= num_modes {
            return false;
        }
        match ptype {
            ParticleType::Boson => i <= j,
            ParticleType::Fermion => i < j,
            ParticleType::Distinguishable { num_modes_a, .. } => i < num_modes_a && j >= num_modes_a,
        }
    }
}

impl fmt::Display for PairConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Canonical lexicographically ordered two-particle basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBasis {
    particle_type: ParticleType,
    num_modes: usize,
    configs: Vec<PairConfig>,
}

impl PairBasis {
    pub fn particle_type(&self) -> ParticleType {
        self.particle_type
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn configs(&self) -> &[PairConfig] {
        &self.configs
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn index_of(&self, config: PairConfig) -> Option<usize> {
        self.configs.binary_search(&config).ok()
    }

    /// Amplitude matrix `T` with `psi = sum_ij T_ij a_i^dagger a_j^dagger |vac>`.
    ///
    /// `T` is symmetric for bosons, antisymmetric for fermions and supported
    /// on the A x B block for distinguishable particles.
    pub fn amplitude_matrix(&self, psi: &DVector<C64>) -> DMatrix<C64> {
        let m = self.num_modes;
        let mut t = DMatrix::zeros(m, m);
        let half = C64::new(0.5, 0.0);
        for (c, &PairConfig(i, j)) in self.configs.iter().enumerate() {
            let a = psi[c];
            match self.particle_type {
                ParticleType::Boson if i == j => t[(i, i)] = a / std::f64::consts::SQRT_2,
                ParticleType::Boson => {
                    t[(i, j)] = a * half;
                    t[(j, i)] = a * half;
                }
                ParticleType::Fermion => {
                    t[(i, j)] = a * half;
                    t[(j, i)] = -a * half;
                }
                ParticleType::Distinguishable { .. } => t[(i, j)] = a,
            }
        }
        t
    }

    /// Inverse of [`PairBasis::amplitude_matrix`]; returns the largest weight
    /// left outside the basis alongside the vector.
    pub fn from_amplitude_matrix(&self, t: &DMatrix<C64>) -> (DVector<C64>, f64) {
        let m = self.num_modes;
        let mut psi = DVector::zeros(self.dim());
        for (c, &PairConfig(i, j)) in self.configs.iter().enumerate() {
            psi[c] = match self.particle_type {
                ParticleType::Boson if i == j => t[(i, i)] * std::f64::consts::SQRT_2,
                ParticleType::Boson => t[(i, j)] + t[(j, i)],
                ParticleType::Fermion => t[(i, j)] - t[(j, i)],
                ParticleType::Distinguishable { .. } => t[(i, j)],
            };
        }
        let mut leak = 0.0f64;
        if let ParticleType::Distinguishable { num_modes_a, .. } = self.particle_type {
            for i in 0..m {
                for j in 0..m {
                    let inside = i < num_modes_a && j >= num_modes_a;
                    if !inside {
                        leak = leak.max(t[(i, j)].norm());
                    }
                }
            }
        }
        (psi, leak)
    }

    /// Two-particle unitary induced by the one-particle mode rotation `v`
    /// (`a_k^dagger -> sum_n v_nk a_n^dagger`).
    ///
    /// For distinguishable particles `v` must be block diagonal.
    pub fn induced_rotation(&self, v: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        let m = self.num_modes;
        if v.nrows() != m || v.ncols() != m {
            return Err(Error::Dimension(format!(
                "mode rotation is {}x{}, expected {m}x{m}",
                v.nrows(),
                v.ncols()
            )));
        }
        let dim = self.dim();
        let mut w = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            let mut e = DVector::zeros(dim);
            e[c] = C64::new(1.0, 0.0);
            let t = self.amplitude_matrix(&e);
            let rotated = v * t * v.transpose();
            let (col, leak) = self.from_amplitude_matrix(&rotated);
            if leak > 1e-10 {
                return Err(Error::invariant(
                    "block-local rotation",
                    format!("rotation mixes A and B modes (leak {leak:.2e})"),
                ));
            }
            w.set_column(c, &col);
        }
        Ok(w)
    }
}

/// Enumerates the canonical pair basis for `ptype` on `num_modes` modes.
pub fn enumerate_pair_basis(ptype: ParticleType, num_modes: usize) -> Result<PairBasis> {
    ptype.check_modes(num_modes)?;
    let mut configs = Vec::new();
    match ptype {
        ParticleType::Boson => {
            for i in 0..num_modes {
                for j in i..num_modes {
                    configs.push(PairConfig(i, j));
                }
            }
        }
        ParticleType::Fermion => {
            for i in 0..num_modes {
                for j in i + 1..num_modes {
                    configs.push(PairConfig(i, j));
                }
            }
        }
        ParticleType::Distinguishable {
            num_modes_a,
            num_modes_b,
        } => {
            for i in 0..num_modes_a {
                for j in num_modes_a..num_modes_a + num_modes_b {
                    configs.push(PairConfig(i, j));
                }
            }
        }
    }
    Ok(PairBasis {
        particle_type: ptype,
        num_modes,
        configs,
    })
}

/// `a_mode` acting on `config`: the surviving one-particle mode and its
/// coefficient, or `None` when `mode` is empty.
pub fn apply_annihilation(
    ptype: ParticleType,
    num_modes: usize,
    mode: usize,
    config: PairConfig,
) -> Result<Option<(usize, f64)>> {
    if mode >= num_modes {
        return Err(Error::IndexOutOfRange {
            what: "mode",
            index: mode,
            limit: num_modes,
        });
    }
    if !config.is_valid_for(ptype, num_modes) {
        return Err(Error::invariant(
            "pair configuration",
            format!("{config} is not a {ptype} configuration on {num_modes} modes"),
        ));
    }
    Ok(annihilate(ptype, mode, config))
}

pub(crate) fn annihilate(ptype: ParticleType, mode: usize, config: PairConfig) -> Option<(usize, f64)> {
    let PairConfig(i, j) = config;
    match ptype {
        ParticleType::Boson if i == j => (mode == i).then_some((i, std::f64::consts::SQRT_2)),
        ParticleType::Fermion => {
            if mode == i {
                Some((j, 1.0))
            } else if mode == j {
                Some((i, -1.0))
            } else {
                None
            }
        }
        _ => {
            if mode == i {
                Some((j, 1.0))
            } else if mode == j {
                Some((i, 1.0))
            } else {
                None
            }
        }
    }
}

/// Fermion and boson states on `M_A + M_B` modes with the same entries as a
/// distinguishable state, A-modes indexed before B-modes.
pub fn counterparts(state_d: &TwoParticleState) -> Result<(TwoParticleState, TwoParticleState)> {
    let basis_d = state_d.basis();
    if basis_d.particle_type().split().is_none() {
        return Err(Error::invariant(
            "distinguishable input",
            format!("counterparts need a distinguishable state, got {}", basis_d.particle_type()),
        ));
    }
    let m = basis_d.num_modes();
    let embed = |ptype: ParticleType| -> Result<TwoParticleState> {
        let target = enumerate_pair_basis(ptype, m)?;
        let map: Vec<usize> = basis_d
            .configs()
            .iter()
            .map(|&c| target.index_of(c).expect("A x B pairs exist in every basis"))
            .collect();
        let repr = match state_d.representation() {
            Representation::Pure(psi) => {
                let mut out = DVector::zeros(target.dim());
                for (c, &k) in map.iter().enumerate() {
                    out[k] = psi[c];
                }
                Representation::Pure(out)
            }
            Representation::Mixed(rho) => {
                let mut out = DMatrix::zeros(target.dim(), target.dim());
                for (r, &kr) in map.iter().enumerate() {
                    for (c, &kc) in map.iter().enumerate() {
                        out[(kr, kc)] = rho[(r, c)];
                    }
                }
                Representation::Mixed(out)
            }
        };
        TwoParticleState::new(target, repr)
    };
    Ok((embed(ParticleType::Fermion)?, embed(ParticleType::Boson)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const D22: ParticleType = ParticleType::Distinguishable {
        num_modes_a: 2,
        num_modes_b: 2,
    };

    #[test]
    fn boson_two_modes() {
        let b = enumerate_pair_basis(ParticleType::Boson, 2).unwrap();
        assert_eq!(b.configs(), &[PairConfig(0, 0), PairConfig(0, 1), PairConfig(1, 1)]);
        assert_eq!(b.dim(), 3);
    }

    #[test]
    fn fermion_four_modes() {
        assert_eq!(enumerate_pair_basis(ParticleType::Fermion, 4).unwrap().dim(), 6);
    }

    #[test]
    fn distinguishable_product_basis() {
        let b = enumerate_pair_basis(D22, 4).unwrap();
        assert_eq!(
            b.configs(),
            &[PairConfig(0, 2), PairConfig(0, 3), PairConfig(1, 2), PairConfig(1, 3)]
        );
    }

    #[test]
    fn dimension_formulas() {
        for m in 1..8 {
            assert_eq!(enumerate_pair_basis(ParticleType::Boson, m).unwrap().dim(), m * (m + 1) / 2);
            if m >= 2 {
                assert_eq!(enumerate_pair_basis(ParticleType::Fermion, m).unwrap().dim(), m * (m - 1) / 2);
            }
        }
        let d = ParticleType::Distinguishable {
            num_modes_a: 3,
            num_modes_b: 2,
        };
        assert_eq!(enumerate_pair_basis(d, 5).unwrap().dim(), 6);
    }

    #[test]
    fn below_minimum_modes() {
        assert!(matches!(
            enumerate_pair_basis(ParticleType::Fermion, 1),
            Err(Error::Dimension(_))
        ));
        assert!(enumerate_pair_basis(ParticleType::Boson, 0).is_err());
        let d = ParticleType::Distinguishable {
            num_modes_a: 0,
            num_modes_b: 2,
        };
        assert!(enumerate_pair_basis(d, 2).is_err());
        assert!(enumerate_pair_basis(D22, 5).is_err());
    }

    #[test]
    fn annihilation_examples() {
        let r = apply_annihilation(ParticleType::Boson, 1, 0, PairConfig(0, 0)).unwrap();
        assert_eq!(r, Some((0, std::f64::consts::SQRT_2)));
        let r = apply_annihilation(ParticleType::Fermion, 3, 1, PairConfig(0, 1)).unwrap();
        assert_eq!(r, Some((0, -1.0)));
        let r = apply_annihilation(ParticleType::Fermion, 3, 2, PairConfig(0, 1)).unwrap();
        assert_eq!(r, None);
        let r = apply_annihilation(ParticleType::Boson, 3, 2, PairConfig(0, 2)).unwrap();
        assert_eq!(r, Some((0, 1.0)));
    }

    #[test]
    fn annihilation_errors() {
        assert!(matches!(
            apply_annihilation(ParticleType::Fermion, 3, 3, PairConfig(0, 1)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(apply_annihilation(ParticleType::Fermion, 3, 0, PairConfig(1, 1)).is_err());
        assert!(apply_annihilation(D22, 4, 0, PairConfig(0, 1)).is_err());
    }

    /// `a_eta^dagger a_eta` on a configuration returns its occupation of `eta`.
    #[test]
    fn number_operator_from_annihilation() {
        for ptype in [ParticleType::Boson, ParticleType::Fermion, D22] {
            let b = enumerate_pair_basis(ptype, 4).unwrap();
            for &c in b.configs() {
                for eta in 0..4 {
                    let weight = apply_annihilation(ptype, 4, eta, c)
                        .unwrap()
                        .map_or(0.0, |(_, a)| a * a);
                    assert!((weight - c.occupation(eta) as f64).abs() < 1e-14);
                }
            }
        }
    }

    /// Fermion operators built from the sign convention obey
    /// `a_i a_j^dagger + a_j^dagger a_i = delta_ij` on the two-particle sector.
    #[test]
    fn fermion_anticommutator_exhaustive() {
        for m in 2..=5 {
            let two = enumerate_pair_basis(ParticleType::Fermion, m).unwrap();
            // a_i: two -> one particle (m x dim)
            let lower = |i: usize| {
                let mut a = DMatrix::<f64>::zeros(m, two.dim());
                for (c, &cfg) in two.configs().iter().enumerate() {
                    if let Some((k, s)) = annihilate(ParticleType::Fermion, i, cfg) {
                        a[(k, c)] = s;
                    }
                }
                a
            };
            // on one-particle states a_j^dagger a_i = |j><i|, and on the
            // two-particle sector a_j^dagger a_i = (a_j)^T a_i
            for i in 0..m {
                for j in 0..m {
                    // a_i a_j^dagger on one particle: (a_i)(a_j)^T (m x m)
                    let ai_ajd = lower(i) * lower(j).transpose();
                    // a_j^dagger a_i on one particle: |j><i|
                    let mut ajd_ai = DMatrix::<f64>::zeros(m, m);
                    ajd_ai[(j, i)] = 1.0;
                    let anti = ai_ajd + ajd_ai;
                    let expected = if i == j {
                        DMatrix::<f64>::identity(m, m)
                    } else {
                        DMatrix::<f64>::zeros(m, m)
                    };
                    assert!((anti - expected).abs().max() < 1e-14, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn induced_rotation_is_unitary() {
        let theta: f64 = 0.37;
        let (c, s) = (C64::new(theta.cos(), 0.0), C64::new(0.0, theta.sin()));
        let mut v = DMatrix::<C64>::identity(4, 4);
        v[(0, 0)] = c;
        v[(0, 1)] = s;
        v[(1, 0)] = s;
        v[(1, 1)] = c;
        for ptype in [ParticleType::Boson, ParticleType::Fermion, D22] {
            let b = enumerate_pair_basis(ptype, 4).unwrap();
            let w = b.induced_rotation(&v).unwrap();
            let id = DMatrix::<C64>::identity(b.dim(), b.dim());
            assert!(crate::linalg::max_abs_diff(&(w.adjoint() * &w), &id) < 1e-14);
        }
        // mixing A and B is rejected
        let mut mix = DMatrix::<C64>::identity(4, 4);
        mix[(1, 1)] = c;
        mix[(1, 2)] = s;
        mix[(2, 1)] = s;
        mix[(2, 2)] = c;
        assert!(enumerate_pair_basis(D22, 4).unwrap().induced_rotation(&mix).is_err());
    }
}
