//! Two-port interference cells: the two-parameter factor `T(ω, φ)`, the single
//! beam-splitter cell `T^bs`, the Mach-Zehnder cell `T^MZ`, and the parameter maps
//! between them.
//!
//! Beam-splitter bookkeeping: `√T = cos ω` and `√R = sin ω`, reflection contributes
//! a factor `i`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{cos_sin, ensure_unitary, phase, ComplexMatrix, C64, I, ONE};

/// Moduli below this are treated as zero when fitting cell phases.
const DEGENERATE_MODULUS: f64 = 1e-12;

/// Maps an angle into `(-π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    // rem_euclid can return exactly 2π for tiny negative inputs
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

/// Transmission `T = cos²ω` of a cell with mixing angle `ω`.
pub fn transmission(omega: f64) -> f64 {
    let (c, _) = cos_sin(omega);
    c * c
}

/// Mixing angle in `[0, π/2]` for transmission `T ∈ [0, 1]`.
pub fn omega_from_transmission(t: f64) -> f64 {
    t.clamp(0.0, 1.0).sqrt().acos()
}

/// Parameters of `T(ω, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TParams {
    pub omega: f64,
    pub phi: f64,
}

impl TParams {
    pub fn new(omega: f64, phi: f64) -> Self {
        Self { omega, phi }
    }
}

/// Parameters of the beam-splitter cell `T^bs(ω, α, β, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl BsParams {
    pub fn new(omega: f64, alpha: f64, beta: f64, phi: f64) -> Self {
        Self {
            omega,
            alpha,
            beta,
            phi,
        }
    }

    pub fn transmission(&self) -> f64 {
        transmission(self.omega)
    }
}

/// Parameters of the Mach-Zehnder cell. `omega` is the internal arm phase, so the
/// effective mixing angle is `omega / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzParams {
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    pub phi: f64,
}

/// `[[sin ω, cos ω], [e^{-iφ} cos ω, -e^{-iφ} sin ω]]`.
pub fn t_matrix(p: TParams) -> ComplexMatrix {
    let (c, s) = cos_sin(p.omega);
    let e = phase(-p.phi);
    ComplexMatrix::from_rows(&[vec![C64::new(s, 0.0), C64::new(c, 0.0)], vec![e * c, -e * s]]).expect("2x2")
}

/// Closed form of the beam-splitter cell.
pub fn t_bs(p: BsParams) -> ComplexMatrix {
    let (c, s) = cos_sin(p.omega);
    ComplexMatrix::from_rows(&[
        vec![I * phase(p.alpha + p.beta + p.phi) * s, phase(p.beta + p.phi) * c],
        vec![phase(p.alpha + p.beta) * c, I * phase(p.beta) * s],
    ])
    .expect("2x2")
}

/// Symmetric splitter `[[i sin ω, cos ω], [cos ω, i sin ω]]`.
pub fn splitter(omega: f64) -> ComplexMatrix {
    let (c, s) = cos_sin(omega);
    let cc = C64::new(c, 0.0);
    ComplexMatrix::from_rows(&[vec![I * s, cc], vec![cc, I * s]]).expect("2x2")
}

fn upper_shift(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[phase(theta), ONE])
}

fn lower_shift(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, phase(theta)])
}

/// The beam-splitter cell as the product of its elements, multiplied in reverse
/// passage order: `P3 · S · P1 · P2`.
pub fn t_bs_product(p: BsParams) -> ComplexMatrix {
    [
        upper_shift(p.phi),
        splitter(p.omega),
        upper_shift(p.alpha + p.beta),
        lower_shift(p.beta),
    ]
    .iter()
    .fold(ComplexMatrix::identity(2), |acc, m| &acc * m)
}

/// Closed form of the Mach-Zehnder cell.
pub fn t_mz(p: MzParams) -> ComplexMatrix {
    let (c, s) = cos_sin(p.omega / 2.0);
    let pre = I * phase(p.beta + p.omega / 2.0);
    ComplexMatrix::from_rows(&[
        vec![-pre * phase(p.alpha + p.phi) * s, pre * phase(p.phi) * c],
        vec![pre * phase(p.alpha) * c, pre * s],
    ])
    .expect("2x2")
}

/// The Mach-Zehnder cell as the product `P4 · S2 · P3 · S1 · P1 · P2` of two 50:50
/// splitters and four phase shifters.
pub fn t_mz_product(p: MzParams) -> ComplexMatrix {
    let half = splitter(std::f64::consts::FRAC_PI_4);
    [
        upper_shift(p.phi),
        half.clone(),
        upper_shift(p.omega),
        half,
        upper_shift(p.alpha + p.beta),
        lower_shift(p.beta),
    ]
    .iter()
    .fold(ComplexMatrix::identity(2), |acc, m| &acc * m)
}

/// Parameters of `T^bs` and `T^MZ` realizing `T(ω, φ)`.
pub fn bridge_params(p: TParams) -> (BsParams, MzParams) {
    let bs = BsParams::new(p.omega, -FRAC_PI_2, FRAC_PI_2 - p.phi, p.phi - FRAC_PI_2);
    let mz = MzParams {
        omega: 2.0 * p.omega,
        alpha: PI,
        beta: FRAC_PI_2 - p.omega - p.phi,
        phi: p.phi - PI,
    };
    (bs, mz)
}

/// Single-qubit gates with a known cell realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGate {
    Identity,
    Not,
    SqrtI2,
    SqrtNot,
}

impl NamedGate {
    pub const ALL: [NamedGate; 4] = [Self::Identity, Self::Not, Self::SqrtI2, Self::SqrtNot];

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Not => "not",
            Self::SqrtI2 => "sqrt_i2",
            Self::SqrtNot => "sqrt_not",
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Self::Identity => ComplexMatrix::identity(2),
            Self::Not => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2"),
            Self::SqrtI2 => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).expect("2x2")
            }
            Self::SqrtNot => {
                let a = C64::new(0.5, 0.5);
                let b = C64::new(0.5, -0.5);
                ComplexMatrix::from_rows(&[vec![a, b], vec![b, a]]).expect("2x2")
            }
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::UnknownGate(s.to_owned()))
    }
}

pub fn named_gate(name: &str) -> Result<ComplexMatrix> {
    Ok(name.parse::<NamedGate>()?.matrix())
}

fn arg(z: C64) -> f64 {
    z.im.atan2(z.re)
}

/// Solves `t_bs(p) = u` for a 2x2 unitary `u`.
///
/// When one of the moduli vanishes the phases are underdetermined; the free phase is
/// set to zero (`φ = 0` for a pure swap, `α = 0` for a pure reflection).
pub fn fit_bs(u: &ComplexMatrix) -> Result<BsParams> {
    if u.shape() != (2, 2) {
        return Err(Error::ShapeMismatch(u.shape(), (2, 2)));
    }
    ensure_unitary(u, 1e-8)?;
    let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let (omega, alpha, beta, phi) = if u11.norm() <= DEGENERATE_MODULUS {
        let beta = arg(u12);
        (0.0, arg(u21) - beta, beta, 0.0)
    } else if u12.norm() <= DEGENERATE_MODULUS {
        let beta = arg(u22) - FRAC_PI_2;
        (FRAC_PI_2, 0.0, beta, arg(u11) - FRAC_PI_2 - beta)
    } else {
        let beta = arg(u22) - FRAC_PI_2;
        (u11.norm().atan2(u12.norm()), arg(u21) - beta, beta, arg(u12) - beta)
    };
    Ok(BsParams::new(
        omega,
        canonical_angle(alpha),
        canonical_angle(beta),
        canonical_angle(phi),
    ))
}
