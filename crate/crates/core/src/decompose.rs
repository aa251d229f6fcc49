//! Reck-style factorization of an `n x n` unitary into two-port `T(ω, φ)` factors and a
//! trailing diagonal phase layer.
//!
//! The working matrix is right-multiplied by embedded factors that null the
//! sub-diagonal of each row, from the last row upward and left to right within a row.
//! With `K` factors and diagonal `D` this gives `u·T₁·…·T_K·D = 𝕀`, hence
//! `u = D†·T_K†·…·T₁†`.

use serde::{Deserialize, Serialize};

use crate::devices::{canonical_angle, t_matrix, TParams};
use crate::error::{Error, Result};
use crate::numerics::{ensure_unitary, phase, ComplexMatrix, C64};

/// Entries at or below this modulus are already null and need no factor.
pub const SKIP_THRESHOLD: f64 = 1e-14;
/// Input tolerance for [`decompose`].
pub const UNITARITY_TOLERANCE: f64 = 1e-8;

/// One `T(ω, φ)` acting on ports `p < q` (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TFactor {
    pub p: usize,
    pub q: usize,
    pub params: TParams,
}

impl TFactor {
    /// The factor embedded into an `n`-port identity.
    pub fn embedded(&self, n: usize) -> ComplexMatrix {
        ComplexMatrix::embed(&t_matrix(self.params), self.p, self.q, n).expect("valid ports")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FactorizationFile", into = "FactorizationFile")]
pub struct Factorization {
    pub dim: usize,
    /// Factors in application order `T₁, T₂, …`.
    pub factors: Vec<TFactor>,
    /// Phases of `D`, so that `D = diag(e^{i·diagonal[k]})`.
    pub diagonal: Vec<f64>,
}

impl Factorization {
    pub fn max_factor_count(dim: usize) -> usize {
        dim * dim.saturating_sub(1) / 2
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if self.diagonal.len() != self.dim {
            return Err(Error::BadLength {
                expected: self.dim,
                got: self.diagonal.len(),
            });
        }
        for f in &self.factors {
            if f.p >= f.q || f.q >= self.dim {
                return Err(Error::PortOutOfRange {
                    port: f.q.max(f.p),
                    dim: self.dim,
                });
            }
            if !f.params.omega.is_finite() || !f.params.phi.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        if self.diagonal.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FactorFile {
    p: usize,
    q: usize,
    omega: f64,
    phi: f64,
}

/// On-disk layout, ports 1-indexed.
#[derive(Serialize, Deserialize)]
struct FactorizationFile {
    dim: usize,
    factors: Vec<FactorFile>,
    diagonal: Vec<f64>,
}

impl TryFrom<FactorizationFile> for Factorization {
    type Error = Error;
    fn try_from(f: FactorizationFile) -> Result<Self> {
        let factors = f
            .factors
            .into_iter()
            .map(|x| {
                if x.p == 0 || x.q == 0 {
                    return Err(Error::PortOutOfRange { port: 0, dim: f.dim });
                }
                Ok(TFactor {
                    p: x.p - 1,
                    q: x.q - 1,
                    params: TParams::new(x.omega, x.phi),
                })
            })
            .collect::<Result<_>>()?;
        let out = Factorization {
            dim: f.dim,
            factors,
            diagonal: f.diagonal,
        };
        out.validate()?;
        Ok(out)
    }
}

impl From<Factorization> for FactorizationFile {
    fn from(f: Factorization) -> Self {
        FactorizationFile {
            dim: f.dim,
            factors: f
                .factors
                .iter()
                .map(|x| FactorFile {
                    p: x.p + 1,
                    q: x.q + 1,
                    omega: x.params.omega,
                    phi: x.params.phi,
                })
                .collect(),
            diagonal: f.diagonal,
        }
    }
}

/// Parameters `(ω, φ)` with `sin ω·a + e^{-iφ} cos ω·b = 0`, or `None` when `a` is
/// already null.
pub fn solve_t_params(a: C64, b: C64) -> Option<TParams> {
    if a.norm() <= SKIP_THRESHOLD {
        return None;
    }
    if b.norm() == 0.0 {
        return Some(TParams::new(0.0, 0.0));
    }
    let omega = b.norm().atan2(a.norm());
    let phi = canonical_angle(b.arg() - a.arg() - std::f64::consts::PI);
    Some(TParams::new(omega, phi))
}

/// Right-multiplies `m` in place by `T(ω, φ)` embedded on ports `(p, q)`.
fn apply_factor(m: &mut ComplexMatrix, f: &TFactor) {
    let (c, s) = crate::numerics::cos_sin(f.params.omega);
    let e = phase(-f.params.phi);
    for r in 0..m.rows() {
        let x = m[(r, f.p)];
        let y = m[(r, f.q)];
        m.set(r, f.p, x * s + y * e * c);
        m.set(r, f.q, x * c - y * e * s);
    }
}

/// Factorizes a unitary. See the module docs for the ordering convention.
pub fn decompose(u: &ComplexMatrix) -> Result<Factorization> {
    decompose_observed(u, |_| {})
}

/// As [`decompose`], calling `observer` with the working matrix after every factor.
pub fn decompose_observed<F: FnMut(&ComplexMatrix)>(u: &ComplexMatrix, mut observer: F) -> Result<Factorization> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    ensure_unitary(u, UNITARITY_TOLERANCE)?;
    let n = u.rows();
    let mut m = u.clone();
    let mut factors = Vec::with_capacity(Factorization::max_factor_count(n));
    for i in (1..n).rev() {
        for j in 0..i {
            let Some(params) = solve_t_params(m[(i, j)], m[(i, i)]) else {
                continue;
            };
            let factor = TFactor { p: j, q: i, params };
            apply_factor(&mut m, &factor);
            // the nulling equation holds exactly in theory; pin it so later rows see a clean zero
            m.set(i, j, C64::new(0.0, 0.0));
            factors.push(factor);
            observer(&m);
        }
    }
    let diagonal = (0..n).map(|k| canonical_angle(-m[(k, k)].arg())).collect();
    Ok(Factorization {
        dim: n,
        factors,
        diagonal,
    })
}

/// `D† · T_K† · … · T₁†`.
pub fn reconstruct(f: &Factorization) -> ComplexMatrix {
    let n = f.dim;
    let d_adj = ComplexMatrix::diag(&f.diagonal.iter().map(|&x| phase(-x)).collect::<Vec<_>>());
    f.factors
        .iter()
        .rev()
        .fold(d_adj, |acc, factor| &acc * &factor.embedded(n).adjoint())
}
