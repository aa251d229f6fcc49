//! Bell states, the two- and three-qutrit singlets, their state operators and
//! preparation unitaries.
//!
//! Multi-particle vectors are flattened with the leftmost tensor factor most
//! significant: `index(i, j, k) = 9i + 3j + k` (0-based).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{complete_to_unitary, dyadic, ComplexMatrix, ComplexVector, NORM_TOLERANCE};

const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;
const FRAC_1_SQRT_6: f64 = 0.408_248_290_463_863_1;

/// States with a built-in constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    Bell1,
    Bell2,
    Bell3,
    Bell4,
    Qutrit2Singlet,
    Qutrit3Singlet,
}

impl NamedState {
    pub const ALL: [NamedState; 6] = [
        Self::Bell1,
        Self::Bell2,
        Self::Bell3,
        Self::Bell4,
        Self::Qutrit2Singlet,
        Self::Qutrit3Singlet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bell1 => "bell1",
            Self::Bell2 => "bell2",
            Self::Bell3 => "bell3",
            Self::Bell4 => "bell4",
            Self::Qutrit2Singlet => "qutrit2-singlet",
            Self::Qutrit3Singlet => "qutrit3-singlet",
        }
    }

    /// Single-particle dimension and particle count.
    pub fn layout(self) -> (usize, usize) {
        match self {
            Self::Bell1 | Self::Bell2 | Self::Bell3 | Self::Bell4 => (2, 2),
            Self::Qutrit2Singlet => (3, 2),
            Self::Qutrit3Singlet => (3, 3),
        }
    }

    pub fn vector(self) -> ComplexVector {
        match self {
            Self::Bell1 => bell_state(1),
            Self::Bell2 => bell_state(2),
            Self::Bell3 => bell_state(3),
            Self::Bell4 => bell_state(4),
            Self::Qutrit2Singlet => Ok(qutrit2_singlet()),
            Self::Qutrit3Singlet => Ok(qutrit3_singlet()),
        }
        .expect("valid index")
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|n| n.name() == key)
            .ok_or_else(|| Error::UnknownState(s.to_owned()))
    }
}

/// Bell basis state `k ∈ 1..=4`.
pub fn bell_state(k: usize) -> Result<ComplexVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = match k {
        1 => [h, 0.0, 0.0, h],
        2 => [h, 0.0, 0.0, -h],
        3 => [0.0, h, h, 0.0],
        4 => [0.0, h, -h, 0.0],
        _ => return Err(Error::BadIndex(k)),
    };
    ComplexVector::from_real(&v)
}

/// `(e₁⊗e₃ − e₂⊗e₂ + e₃⊗e₁)/√3`.
pub fn qutrit2_singlet() -> ComplexVector {
    let a = FRAC_1_SQRT_3;
    ComplexVector::from_real(&[0.0, 0.0, a, 0.0, -a, 0.0, a, 0.0, 0.0]).expect("finite")
}

/// Three-qutrit singlet: `−ε_{ijk}/√6`.
pub fn qutrit3_singlet() -> ComplexVector {
    let mut v = [0.0; 27];
    for (i, j, k, sign) in [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ] {
        v[9 * i + 3 * j + k] = -sign * FRAC_1_SQRT_6;
    }
    ComplexVector::from_real(&v).expect("finite")
}

/// `|ψ⟩⟨ψ|` for a unit vector.
pub fn state_operator(psi: &ComplexVector) -> Result<ComplexMatrix> {
    psi.ensure_normalized(NORM_TOLERANCE)?;
    dyadic(psi)
}

/// A unitary sending the 0-based `input_port` basis vector to `psi`.
pub fn preparation_unitary(psi: &ComplexVector, input_port: usize) -> Result<ComplexMatrix> {
    complete_to_unitary(psi, input_port)
}

/// Reference preparation matrix taking port 1 to the two-particle Bell singlet.
pub fn reference_preparation_bell4() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[
        &[0.0, -h, h, 0.0],
        &[h, 0.0, 0.0, h],
        &[-h, 0.0, 0.0, h],
        &[0.0, h, h, 0.0],
    ])
    .expect("4x4")
}

/// Reference preparation matrix taking port 1 to the two-qutrit singlet.
pub fn reference_preparation_qutrit2() -> ComplexMatrix {
    let a = FRAC_1_SQRT_3;
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, -a, 0.0, a, 0.0, -a, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[a, 0.0, 0.0, 0.0, -a, 0.0, -a, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[-a, 0.0, -a, 0.0, -a, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        &[a, 0.0, -a, 0.0, 0.0, 0.0, a, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ])
    .expect("9x9")
}

/// Resolves a state spec: a [`NamedState`] name or `@path` to a single-column matrix file.
pub fn resolve_state(spec: &str) -> std::result::Result<ComplexVector, StateSpecError> {
    if let Some(path) = spec.strip_prefix('@') {
        return load_state_file(Path::new(path));
    }
    Ok(spec.parse::<NamedState>()?.vector())
}

fn load_state_file(path: &Path) -> std::result::Result<ComplexVector, StateSpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| StateSpecError::Io(format!("{}: {e}", path.display())))?;
    let m: ComplexMatrix = serde_json::from_str(&text)
        .map_err(|e| StateSpecError::Invalid(Error::Parse(format!("{}: {e}", path.display()))))?;
    if m.cols() != 1 {
        return Err(StateSpecError::Invalid(Error::Parse(format!(
            "state file must have cols = 1, got {}",
            m.cols()
        ))));
    }
    Ok(m.column(0))
}

#[derive(Debug, thiserror::Error)]
pub enum StateSpecError {
    #[error("cannot read state file {0}")]
    Io(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{kron_vec, unitarity_deviation, C64};

    #[test]
    fn bell_states_as_printed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            bell_state(4).unwrap(),
            ComplexVector::from_real(&[0.0, h, -h, 0.0]).unwrap()
        );
        assert_eq!(
            bell_state(1).unwrap(),
            ComplexVector::from_real(&[h, 0.0, 0.0, h]).unwrap()
        );
        assert_eq!(bell_state(0), Err(Error::BadIndex(0)));
        assert_eq!(bell_state(5), Err(Error::BadIndex(5)));
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for a in 1..=4 {
            for b in 1..=4 {
                let ip = bell_state(a).unwrap().inner(&bell_state(b).unwrap()).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn qutrit2_singlet_entries() {
        let phi = qutrit2_singlet();
        assert!((phi.norm() - 1.0).abs() < 1e-15);
        assert_eq!(phi[2].re, FRAC_1_SQRT_3);
        assert_eq!(phi[4].re, -FRAC_1_SQRT_3);
        assert_eq!(phi[6].re, FRAC_1_SQRT_3);
        assert!((FRAC_1_SQRT_3 - 1.0 / 3f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn qutrit2_singlet_from_kron() {
        let e = |k| ComplexVector::basis(3, k).unwrap();
        let terms = [
            kron_vec(&e(0), &e(2)),
            kron_vec(&e(1), &e(1)).scale(C64::new(-1.0, 0.0)),
            kron_vec(&e(2), &e(0)),
        ];
        let sum: Vec<C64> = (0..9)
            .map(|i| terms.iter().map(|t| t[i]).sum::<C64>() * FRAC_1_SQRT_3)
            .collect();
        assert_eq!(ComplexVector::new(sum).unwrap(), qutrit2_singlet());
    }

    #[test]
    fn qutrit3_singlet_entries() {
        let d = qutrit3_singlet();
        assert!((d.norm() - 1.0).abs() < 1e-15);
        assert!((FRAC_1_SQRT_6 - 1.0 / 6f64.sqrt()).abs() < 1e-16);
        // 1-indexed positions 6, 8, 12, 16, 20, 22
        let expected = [(5, -1.0), (7, 1.0), (11, 1.0), (15, -1.0), (19, -1.0), (21, 1.0)];
        for i in 0..27 {
            let want = expected
                .iter()
                .find(|(p, _)| *p == i)
                .map_or(0.0, |(_, s)| s * FRAC_1_SQRT_6);
            assert_eq!(d[i], C64::new(want, 0.0), "entry {i}");
        }
    }

    #[test]
    fn qutrit3_singlet_is_antisymmetric() {
        let d = qutrit3_singlet();
        let at = |i: usize, j: usize, k: usize| d[9 * i + 3 * j + k];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(at(i, j, k), -at(j, i, k));
                    assert_eq!(at(i, j, k), -at(i, k, j));
                    assert_eq!(at(i, j, k), -at(k, j, i));
                }
            }
        }
    }

    #[test]
    fn state_operators_as_printed() {
        let p4 = state_operator(&bell_state(4).unwrap()).unwrap();
        let p3 = state_operator(&bell_state(3).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let inner = (1..3).contains(&i) && (1..3).contains(&j);
                let v4 = if !inner {
                    0.0
                } else if i == j {
                    0.5
                } else {
                    -0.5
                };
                let v3 = if inner { 0.5 } else { 0.0 };
                assert!((p4[(i, j)] - C64::new(v4, 0.0)).norm() < 1e-15);
                assert!((p3[(i, j)] - C64::new(v3, 0.0)).norm() < 1e-15);
            }
        }
        let e1 = ComplexVector::basis(2, 0).unwrap();
        assert_eq!(state_operator(&e1).unwrap(), ComplexMatrix::diag_real(&[1.0, 0.0]));
        let unnormalized = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(state_operator(&unnormalized), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn preparation_columns() {
        let psi = bell_state(4).unwrap();
        let u = preparation_unitary(&psi, 0).unwrap();
        assert!(unitarity_deviation(&u).unwrap() <= 1e-10);
        assert!(u.column(0).max_abs_diff(&psi) <= 1e-12);

        let phi = qutrit2_singlet();
        let u = preparation_unitary(&phi, 0).unwrap();
        assert!(unitarity_deviation(&u).unwrap() <= 1e-10);
        assert!(u.column(0).max_abs_diff(&phi) <= 1e-12);

        let e2 = ComplexVector::basis(3, 1).unwrap();
        assert_eq!(preparation_unitary(&e2, 1).unwrap(), ComplexMatrix::identity(3));
    }

    #[test]
    fn reference_preparations_are_valid() {
        let u = reference_preparation_bell4();
        assert!(unitarity_deviation(&u).unwrap() <= 1e-15);
        assert_eq!(u.column(0), bell_state(4).unwrap());
        let u = reference_preparation_qutrit2();
        assert!(unitarity_deviation(&u).unwrap() <= 1e-15);
        assert_eq!(u.column(0), qutrit2_singlet());
    }

    #[test]
    fn state_names() {
        for s in NamedState::ALL {
            assert_eq!(s.name().parse::<NamedState>().unwrap(), s);
            let (d, n) = s.layout();
            assert_eq!(s.vector().dim(), d.pow(n as u32));
        }
        assert_eq!(
            "qutrit2_singlet".parse::<NamedState>().unwrap(),
            NamedState::Qutrit2Singlet
        );
        assert!("bell5".parse::<NamedState>().is_err());
    }

    #[test]
    fn state_file_must_be_a_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, r#"{"rows":2,"cols":1,"entries":[[0,0],[1,0]]}"#).unwrap();
        let v = resolve_state(&format!("@{}", path.display())).unwrap();
        assert_eq!(v, ComplexVector::basis(2, 1).unwrap());
        std::fs::write(&path, r#"{"rows":1,"cols":2,"entries":[[0,0],[1,0]]}"#).unwrap();
        assert!(matches!(
            resolve_state(&format!("@{}", path.display())),
            Err(StateSpecError::Invalid(_))
        ));
        assert!(matches!(
            resolve_state("@/nonexistent/x.json"),
            Err(StateSpecError::Io(_))
        ));
    }
}
