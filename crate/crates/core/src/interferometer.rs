//! Netlists of beam-splitter cells, phase shifters and a diagonal phase layer, with
//! single-particle amplitude propagation and schematic rendering.
//!
//! Elements are stored in passage order: the first element is the one a particle
//! meets first. The transfer matrix multiplies element matrices in reverse order.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decompose::Factorization;
use crate::devices::{canonical_angle, fit_bs, omega_from_transmission, t_bs, t_matrix, BsParams};
use crate::error::{Error, Result};
use crate::numerics::{format_significant, phase, ComplexMatrix, ComplexVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Beam-splitter cell on ports `p < q` (0-based).
    Bs { p: usize, q: usize, cell: BsParams },
    /// Phase shifter `e^{iφ}` on port `p`.
    Ps { p: usize, phase: f64 },
    /// One phase per port.
    Diag { phases: Vec<f64> },
}

impl Element {
    pub fn bs(p: usize, q: usize, cell: BsParams) -> Self {
        Self::Bs { p, q, cell }
    }

    /// A cell given by its transmission `T = cos²ω`.
    pub fn bs_with_transmission(p: usize, q: usize, t: f64, alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadTransmission(t));
        }
        Ok(Self::bs(
            p,
            q,
            BsParams::new(omega_from_transmission(t), alpha, beta, phi),
        ))
    }

    fn validate(&self, n: usize) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Self::Bs { p, q, cell } => {
                if p >= q || *q >= n {
                    return Err(Error::PortOutOfRange {
                        port: *p.max(q),
                        dim: n,
                    });
                }
                if !finite(&[cell.omega, cell.alpha, cell.beta, cell.phi]) {
                    return Err(Error::NonFinite);
                }
            }
            Self::Ps { p, phase } => {
                if *p >= n {
                    return Err(Error::PortOutOfRange { port: *p, dim: n });
                }
                if !phase.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            Self::Diag { phases } => {
                if phases.len() != n {
                    return Err(Error::BadLength {
                        expected: n,
                        got: phases.len(),
                    });
                }
                if !finite(phases) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(())
    }

    /// Applies the element in place to the amplitudes `v`.
    fn act(&self, v: &mut [C64]) {
        match self {
            Self::Bs { p, q, cell } => {
                let b = t_bs(*cell);
                let (x, y) = (v[*p], v[*q]);
                v[*p] = b[(0, 0)] * x + b[(0, 1)] * y;
                v[*q] = b[(1, 0)] * x + b[(1, 1)] * y;
            }
            Self::Ps { p, phase: f } => v[*p] *= phase(*f),
            Self::Diag { phases } => {
                for (z, f) in v.iter_mut().zip(phases) {
                    *z *= phase(*f);
                }
            }
        }
    }
}

/// The `n x n` matrix of one element.
pub fn element_matrix(e: &Element, n: usize) -> Result<ComplexMatrix> {
    e.validate(n)?;
    Ok(match e {
        Element::Bs { p, q, cell } => ComplexMatrix::embed(&t_bs(*cell), *p, *q, n)?,
        Element::Ps { p, phase: f } => {
            let mut phases = vec![C64::new(1.0, 0.0); n];
            phases[*p] = phase(*f);
            ComplexMatrix::diag(&phases)
        }
        Element::Diag { phases } => ComplexMatrix::diag(&phases.iter().map(|&f| phase(f)).collect::<Vec<_>>()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetlistFile", into = "NetlistFile")]
pub struct Netlist {
    dim: usize,
    elements: Vec<Element>,
}

impl Netlist {
    pub fn new(dim: usize, elements: Vec<Element>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        for e in &elements {
            e.validate(dim)?;
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn beam_splitter_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, Element::Bs { .. })).count()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("netlist serializes")
    }
}

/// On-disk element, ports 1-indexed. `omega` is optional and, when present, takes
/// precedence over `T` so that files round-trip without loss.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ElementFile {
    Bs {
        p: usize,
        q: usize,
        #[serde(rename = "T")]
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega: Option<f64>,
        alpha: f64,
        beta: f64,
        phi: f64,
    },
    Ps {
        p: usize,
        phase: f64,
    },
    Diag {
        phases: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct NetlistFile {
    dim: usize,
    elements: Vec<ElementFile>,
}

fn zero_based(port: usize, dim: usize) -> Result<usize> {
    port.checked_sub(1).ok_or(Error::PortOutOfRange { port, dim })
}

impl TryFrom<NetlistFile> for Netlist {
    type Error = Error;
    fn try_from(f: NetlistFile) -> Result<Self> {
        let n = f.dim;
        let elements = f
            .elements
            .into_iter()
            .map(|e| match e {
                ElementFile::Bs {
                    p,
                    q,
                    t,
                    omega,
                    alpha,
                    beta,
                    phi,
                } => {
                    let (p, q) = (zero_based(p, n)?, zero_based(q, n)?);
                    match omega {
                        Some(omega) => Ok(Element::bs(p, q, BsParams::new(omega, alpha, beta, phi))),
                        None => Element::bs_with_transmission(p, q, t, alpha, beta, phi),
                    }
                }
                ElementFile::Ps { p, phase } => Ok(Element::Ps {
                    p: zero_based(p, n)?,
                    phase,
                }),
                ElementFile::Diag { phases } => Ok(Element::Diag { phases }),
            })
            .collect::<Result<_>>()?;
        Netlist::new(n, elements)
    }
}

impl From<Netlist> for NetlistFile {
    fn from(nl: Netlist) -> Self {
        let elements = nl
            .elements
            .into_iter()
            .map(|e| match e {
                Element::Bs { p, q, cell } => ElementFile::Bs {
                    p: p + 1,
                    q: q + 1,
                    t: cell.transmission(),
                    omega: Some(cell.omega),
                    alpha: cell.alpha,
                    beta: cell.beta,
                    phi: cell.phi,
                },
                Element::Ps { p, phase } => ElementFile::Ps { p: p + 1, phase },
                Element::Diag { phases } => ElementFile::Diag { phases },
            })
            .collect();
        NetlistFile { dim: nl.dim, elements }
    }
}

/// Product of element matrices in reverse passage order.
pub fn transfer_matrix(nl: &Netlist) -> ComplexMatrix {
    let n = nl.dim;
    let columns: Vec<ComplexVector> = (0..n)
        .map(|k| {
            let mut v = ComplexVector::basis(n, k).expect("k < n").into_entries();
            for e in &nl.elements {
                e.act(&mut v);
            }
            ComplexVector::new(v).expect("finite amplitudes")
        })
        .collect();
    ComplexMatrix::from_columns(&columns).expect("square")
}

/// Lowers each factor `T_k†` to one fitted cell, then `D†` to a diagonal layer
/// (omitted when every phase is zero).
pub fn netlist_from_factorization(f: &Factorization) -> Result<Netlist> {
    let mut elements = Vec::with_capacity(f.factors.len() + 1);
    for factor in &f.factors {
        let block = t_matrix(factor.params).adjoint();
        let cell = fit_bs(&block).map_err(|e| Error::FitFailure(e.to_string()))?;
        elements.push(Element::bs(factor.p, factor.q, cell));
    }
    let phases: Vec<f64> = f.diagonal.iter().map(|&x| canonical_angle(-x)).collect();
    if phases.iter().any(|&x| x != 0.0) {
        elements.push(Element::Diag { phases });
    }
    Netlist::new(f.dim, elements)
}

/// Output amplitudes for `input` after passing every element.
pub fn simulate(nl: &Netlist, input: &ComplexVector) -> Result<ComplexVector> {
    if input.dim() != nl.dim {
        return Err(Error::DimMismatch(format!(
            "netlist has {} ports, input has {} amplitudes",
            nl.dim,
            input.dim()
        )));
    }
    let mut v = input.entries().to_vec();
    for e in &nl.elements {
        e.act(&mut v);
    }
    ComplexVector::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchematicFormat {
    Svg,
    Text,
}

impl FromStr for SchematicFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Self::Svg),
            "text" | "txt" => Ok(Self::Text),
            other => Err(Error::Parse(format!("unknown schematic format `{other}`"))),
        }
    }
}

/// `p/q` for the closest fraction with denominator at most 12, when within 1e-12.
fn small_fraction(x: f64) -> Option<(i64, i64)> {
    (1..=12).find_map(|den| {
        let num = (x * den as f64).round();
        ((x - num / den as f64).abs() <= 1e-12).then_some((num as i64, den))
    })
}

fn fraction_text(x: f64) -> String {
    match small_fraction(x) {
        Some((num, 1)) => num.to_string(),
        Some((num, den)) => format!("{num}/{den}"),
        None => format_significant(x),
    }
}

/// An angle as a multiple of π when it is a small fraction, otherwise in radians.
pub fn angle_text(theta: f64) -> String {
    match small_fraction(theta / PI) {
        Some((0, _)) => "0".into(),
        Some((num, den)) => {
            let sign = if num < 0 { "-" } else { "" };
            let num = num.abs();
            let head = if num == 1 { "π".to_string() } else { format!("{num}π") };
            if den == 1 {
                format!("{sign}{head}")
            } else {
                format!("{sign}{head}/{den}")
            }
        }
        None => format_significant(theta),
    }
}

pub fn render_schematic(nl: &Netlist, format: SchematicFormat) -> String {
    match format {
        SchematicFormat::Text => render_text(nl),
        SchematicFormat::Svg => render_svg(nl),
    }
}

fn render_text(nl: &Netlist) -> String {
    let mut out = format!("NETLIST ports={} elements={}\n", nl.dim, nl.elements.len());
    for e in &nl.elements {
        let line = match e {
            Element::Bs { p, q, cell } => format!(
                "BS {},{} T={} α={} β={} φ={}",
                p + 1,
                q + 1,
                fraction_text(cell.transmission()),
                angle_text(cell.alpha),
                angle_text(cell.beta),
                angle_text(cell.phi)
            ),
            Element::Ps { p, phase } => format!("PS {} φ={}", p + 1, angle_text(*phase)),
            Element::Diag { phases } => {
                let parts: Vec<String> = phases.iter().map(|&f| angle_text(f)).collect();
                format!("DIAG {}", parts.join(" "))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

const PORT_GAP: usize = 40;
const COLUMN: usize = 70;
const MARGIN: usize = 50;

fn render_svg(nl: &Netlist) -> String {
    let width = 2 * MARGIN + COLUMN * nl.elements.len().max(1);
    let height = 2 * MARGIN + PORT_GAP * nl.dim.saturating_sub(1);
    let y = |port: usize| MARGIN + PORT_GAP * port;
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    for port in 0..nl.dim {
        let _ = writeln!(
            w,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            MARGIN / 2,
            y(port),
            width - MARGIN / 2,
            y(port)
        );
        let _ = writeln!(w, r#"<text x="4" y="{}">{}</text>"#, y(port) + 4, port + 1);
    }
    for (k, e) in nl.elements.iter().enumerate() {
        let x = MARGIN + COLUMN * k + COLUMN / 2;
        match e {
            Element::Bs { p, q, cell } => {
                let (top, bottom) = (y(*p) - 12, y(*q) + 12);
                let _ = writeln!(
                    w,
                    r#"<rect class="bs" x="{}" y="{top}" width="36" height="{}" fill="lightsteelblue" stroke="black"/>"#,
                    x - 18,
                    bottom - top
                );
                let _ = writeln!(
                    w,
                    r#"<text x="{}" y="{}" text-anchor="middle">T={}</text>"#,
                    x,
                    top - 4,
                    fraction_text(cell.transmission())
                );
            }
            Element::Ps { p, phase } => ps_box(w, x, y(*p), *phase),
            Element::Diag { phases } => {
                for (port, f) in phases.iter().enumerate() {
                    ps_box(w, x, y(port), *f);
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn ps_box(w: &mut String, x: usize, y: usize, theta: f64) {
    let _ = writeln!(
        w,
        r#"<rect class="ps" x="{}" y="{}" width="24" height="12" fill="white" stroke="black"/>"#,
        x - 12,
        y - 6
    );
    let _ = writeln!(
        w,
        r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
        y - 9,
        angle_text(theta)
    );
}
