//! JSON state files.
//!
//! ```json
//! {
//!   "particle_type": "fermion",
//!   "num_modes": 4,
//!   "kind": "pure",
//!   "amplitudes": [
//!     { "modes": [0, 1], "re": 0.7071067811865476, "im": 0.0 },
//!     { "modes": [2, 3], "re": 0.7071067811865476, "im": 0.0 }
//!   ]
//! }
//! ```
//!
//! Distinguishable files give `num_modes_a` and `num_modes_b` instead of
//! `num_modes`; mode indices are global, A first, so `[i, j]` needs
//! `i < num_modes_a <= j`. Mixed files carry either `components`
//! (`[{"weight": w, "amplitudes": [...]}]`) or `matrix`, the density matrix
//! over the canonical basis order as a row-major list of `[re, im]` pairs.
//!
//! Syntax and schema problems are [`Error::Parse`]; physically invalid
//! content (bad mode pairs, norm, trace, positivity) fails state validation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::fock_space::{enumerate_pair_basis, PairBasis, ParticleType};
use crate::rdm::{config_vector, Representation, TwoParticleState};
use crate::{C64, Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeName {
    Boson,
    Fermion,
    Distinguishable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Amplitude {
    pub modes: [usize; 2],
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub weight: f64,
    pub amplitudes: Vec<Amplitude>,
}

/// On-disk schema, one-to-one with the JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub particle_type: TypeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_modes_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_modes_b: Option<usize>,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Component>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(e.to_string()))
    }

    /// JSON with one key per line and one amplitude, component or matrix
    /// row per line. Floats use the shortest representation that reads back
    /// to the same bits, so emit -> parse -> emit is byte-stable.
    pub fn emit(&self) -> String {
        fn compact<T: Serialize + ?Sized>(v: &T) -> String {
            serde_json::to_string(v).expect("state file serializes")
        }
        fn list(items: &[String]) -> String {
            format!("[\n    {}\n  ]", items.join(",\n    "))
        }
        let mut fields = vec![("particle_type", compact(&self.particle_type))];
        for (key, value) in [
            ("num_modes", self.num_modes),
            ("num_modes_a", self.num_modes_a),
            ("num_modes_b", self.num_modes_b),
        ] {
            if let Some(v) = value {
                fields.push((key, v.to_string()));
            }
        }
        fields.push(("kind", compact(&self.kind)));
        if let Some(a) = &self.amplitudes {
            fields.push(("amplitudes", list(&a.iter().map(compact).collect::<Vec<_>>())));
        }
        if let Some(c) = &self.components {
            fields.push(("components", list(&c.iter().map(compact).collect::<Vec<_>>())));
        }
        if let Some(m) = &self.matrix {
            let d = (m.len() as f64).sqrt().round() as usize;
            let rows: Vec<String> = m.chunks(d.max(1)).map(|row| {
                let c = compact(row);
                c[1..c.len() - 1].to_string()
            }).collect();
            fields.push(("matrix", list(&rows)));
        }
        let body: Vec<String> = fields.iter().map(|(k, v)| format!("  \"{k}\": {v}")).collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }

    pub fn particle_type(&self) -> Result<(ParticleType, usize)> {
        match self.particle_type {
            TypeName::Boson | TypeName::Fermion => {
                if self.num_modes_a.is_some() || self.num_modes_b.is_some() {
                    return Err(schema("`num_modes_a`/`num_modes_b` are only valid for distinguishable particles"));
                }
                let m = self.num_modes.ok_or_else(|| schema("missing key `num_modes`"))?;
                let ptype = if self.particle_type == TypeName::Boson {
                    ParticleType::Boson
                } else {
                    ParticleType::Fermion
                };
                Ok((ptype, m))
            }
            TypeName::Distinguishable => {
                let a = self.num_modes_a.ok_or_else(|| schema("missing key `num_modes_a`"))?;
                let b = self.num_modes_b.ok_or_else(|| schema("missing key `num_modes_b`"))?;
                if let Some(m) = self.num_modes {
                    if m != a + b {
                        return Err(schema(format!("`num_modes` = {m} but `num_modes_a` + `num_modes_b` = {}", a + b)));
                    }
                }
                Ok((ParticleType::Distinguishable { num_modes_a: a, num_modes_b: b }, a + b))
            }
        }
    }

    pub fn to_state(&self) -> Result<TwoParticleState> {
        self.to_state_with(&Tolerances::default())
    }

    pub fn to_state_with(&self, tol: &Tolerances) -> Result<TwoParticleState> {
        let (ptype, m) = self.particle_type()?;
        let basis = enumerate_pair_basis(ptype, m)?;
        let repr = match self.kind {
            Kind::Pure => {
                if self.components.is_some() || self.matrix.is_some() {
                    return Err(schema("pure state takes `amplitudes` only"));
                }
                let amps = self.amplitudes.as_ref().ok_or_else(|| schema("missing key `amplitudes`"))?;
                Representation::Pure(config_vector(&basis, &entries(amps))?)
            }
            Kind::Mixed => match (&self.components, &self.matrix, &self.amplitudes) {
                (_, _, Some(_)) => return Err(schema("mixed state takes `components` or `matrix`, not `amplitudes`")),
                (Some(components), None, None) => Representation::Mixed(mixture(&basis, components, tol)?),
                (None, Some(flat), None) => Representation::Mixed(dense(&basis, flat)?),
                (Some(_), Some(_), None) => return Err(schema("give either `components` or `matrix`, not both")),
                (None, None, None) => return Err(schema("missing key `components` or `matrix`")),
            },
        };
        TwoParticleState::with_tolerances(basis, repr, tol)
    }

    /// Canonical file for `state`: nonzero amplitudes in basis order for
    /// pure states, the full matrix for mixed ones.
    pub fn from_state(state: &TwoParticleState) -> Self {
        let basis = state.basis();
        let (particle_type, num_modes, num_modes_a, num_modes_b) = match state.particle_type() {
            ParticleType::Boson => (TypeName::Boson, Some(basis.num_modes()), None, None),
            ParticleType::Fermion => (TypeName::Fermion, Some(basis.num_modes()), None, None),
            ParticleType::Distinguishable { num_modes_a, num_modes_b } => {
                (TypeName::Distinguishable, None, Some(num_modes_a), Some(num_modes_b))
            }
        };
        let mut file = StateFile {
            particle_type,
            num_modes,
            num_modes_a,
            num_modes_b,
            kind: Kind::Pure,
            amplitudes: None,
            components: None,
            matrix: None,
        };
        match state.representation() {
            Representation::Pure(psi) => {
                file.amplitudes = Some(
                    basis
                        .configs()
                        .iter()
                        .zip(psi.iter())
                        .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                        .map(|(c, a)| Amplitude {
                            modes: [c.0, c.1],
                            re: a.re,
                            im: a.im,
                        })
                        .collect(),
                );
            }
            Representation::Mixed(rho) => {
                file.kind = Kind::Mixed;
                let d = rho.nrows();
                file.matrix = Some((0..d * d).map(|k| {
                    let z = rho[(k / d, k % d)];
                    [z.re, z.im]
                }).collect());
            }
        }
        file
    }
}

fn entries(amps: &[Amplitude]) -> Vec<((usize, usize), C64)> {
    amps.iter()
        .map(|a| ((a.modes[0], a.modes[1]), C64::new(a.re, a.im)))
        .collect()
}

fn mixture(basis: &PairBasis, components: &[Component], tol: &Tolerances) -> Result<DMatrix<C64>> {
    let d = basis.dim();
    let mut rho = DMatrix::zeros(d, d);
    for (k, c) in components.iter().enumerate() {
        if !(c.weight >= 0.0) {
            return Err(Error::invariant("nonnegative weights", format!("component {k} has weight {}", c.weight)));
        }
        let psi = config_vector(basis, &entries(&c.amplitudes))?;
        let norm = psi.norm_squared();
        if (norm - 1.0).abs() > tol.trace {
            return Err(Error::invariant("unit norm", format!("component {k} has |psi|^2 = {norm}")));
        }
        rho += &psi * psi.adjoint() * C64::new(c.weight, 0.0);
    }
    Ok(rho)
}

fn dense(basis: &PairBasis, flat: &[[f64; 2]]) -> Result<DMatrix<C64>> {
    let d = basis.dim();
    if flat.len() != d * d {
        return Err(Error::Dimension(format!(
            "`matrix` has {} entries, the {} basis on {} modes needs {d} x {d} = {}",
            flat.len(),
            basis.particle_type(),
            basis.num_modes(),
            d * d
        )));
    }
    Ok(DMatrix::from_fn(d, d, |r, c| {
        let [re, im] = flat[r * d + c];
        C64::new(re, im)
    }))
}

pub fn read_state_file(path: &std::path::Path, tol: &Tolerances) -> Result<TwoParticleState> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    StateFile::parse(&text)
        .and_then(|f| f.to_state_with(tol))
        .map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random_state;

    const ROW2_FERMION: &str = r#"{
  "particle_type": "fermion",
  "num_modes": 4,
  "kind": "pure",
  "amplitudes": [
    { "modes": [0, 1], "re": 0.7071067811865476, "im": 0.0 },
    { "modes": [2, 3], "re": 0.7071067811865476, "im": 0.0 }
  ]
}"#;

    #[test]
    fn parses_pure_file() {
        let s = StateFile::parse(ROW2_FERMION).unwrap().to_state().unwrap();
        assert_eq!(s.particle_type(), ParticleType::Fermion);
        assert!((s.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_is_byte_stable() {
        for (pt, m, rank) in [
            (ParticleType::Boson, 3, 1),
            (ParticleType::Fermion, 4, 3),
            (ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 3 }, 5, 2),
        ] {
            let state = random_state(pt, m, rank, 42).unwrap();
            let first = StateFile::from_state(&state).emit();
            let back = StateFile::parse(&first).unwrap().to_state().unwrap();
            assert_eq!(back, state);
            assert_eq!(StateFile::from_state(&back).emit(), first);
        }
    }

    #[test]
    fn components_and_matrix_agree() {
        let text = r#"{"particle_type":"boson","num_modes":2,"kind":"mixed",
            "components":[{"weight":0.25,"amplitudes":[{"modes":[0,0],"re":1.0,"im":0.0}]},
                          {"weight":0.75,"amplitudes":[{"modes":[1,1],"re":0.0,"im":1.0}]}]}"#;
        let a = StateFile::parse(text).unwrap().to_state().unwrap();
        let text = r#"{"particle_type":"boson","num_modes":2,"kind":"mixed",
            "matrix":[[0.25,0],[0,0],[0,0], [0,0],[0,0],[0,0], [0,0],[0,0],[0.75,0]]}"#;
        let b = StateFile::parse(text).unwrap().to_state().unwrap();
        assert_eq!(a.density_matrix(), b.density_matrix());
    }

    #[test]
    fn syntax_and_schema_errors_are_parse_errors() {
        assert!(matches!(StateFile::parse("{\"particle_type\": \"boson\",\n"), Err(Error::Parse(_))));
        let err = StateFile::parse(r#"{"particle_type":"anyon","num_modes":2,"kind":"pure","amplitudes":[]}"#);
        assert!(matches!(err, Err(Error::Parse(m)) if m.contains("line")));
        let missing = StateFile::parse(r#"{"particle_type":"boson","kind":"pure","amplitudes":[]}"#).unwrap();
        assert!(matches!(missing.to_state(), Err(Error::Parse(m)) if m.contains("num_modes")));
    }

    #[test]
    fn invalid_content_fails_validation() {
        let reversed = r#"{"particle_type":"fermion","num_modes":2,"kind":"pure",
            "amplitudes":[{"modes":[1,0],"re":1.0,"im":0.0}]}"#;
        let err = StateFile::parse(reversed).unwrap().to_state().unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "pair configuration", .. }));
        let unnormalized = r#"{"particle_type":"boson","num_modes":2,"kind":"pure",
            "amplitudes":[{"modes":[0,1],"re":2.0,"im":0.0}]}"#;
        let err = StateFile::parse(unnormalized).unwrap().to_state().unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "unit norm", .. }));
        let same_block = r#"{"particle_type":"distinguishable","num_modes_a":2,"num_modes_b":2,"kind":"pure",
            "amplitudes":[{"modes":[0,1],"re":1.0,"im":0.0}]}"#;
        assert!(StateFile::parse(same_block).unwrap().to_state().is_err());
    }
}
