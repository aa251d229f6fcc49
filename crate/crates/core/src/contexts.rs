//! Contexts as labeled orthonormal bases, the rays they share, and Greechie
//! (orthogonality) diagrams.
//!
//! Representability is checked on concrete vectors: a configuration of labels that
//! no set of rays can realize shows up as two labels forced onto the same ray.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dyadic, equal_up_to_global_phase, ComplexMatrix, ComplexVector, C64, NORM_TOLERANCE};
use crate::observables::ObservableSpec;

/// Two rays are the same when they agree up to a global phase within this bound.
pub const RAY_TOLERANCE: f64 = 1e-8;
/// Bound on `|⟨a|b⟩|` for rays of one context.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub label: String,
    pub vector: ComplexVector,
}

impl Ray {
    pub fn new(label: impl Into<String>, vector: ComplexVector) -> Result<Self> {
        vector.ensure_normalized(NORM_TOLERANCE)?;
        Ok(Self {
            label: label.into(),
            vector,
        })
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    pub fn same_ray(&self, other: &Ray) -> bool {
        self.dim() == other.dim()
            && equal_up_to_global_phase(&self.vector, &other.vector, RAY_TOLERANCE).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub name: String,
    pub rays: Vec<Ray>,
}

impl Context {
    pub fn new(name: impl Into<String>, rays: Vec<Ray>) -> Self {
        Self {
            name: name.into(),
            rays,
        }
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Ray::dim)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.rays.iter().map(|r| r.label.as_str()).collect()
    }

    /// `Σ values[i] · |ray_i⟩⟨ray_i|`.
    pub fn spectral_sum(&self, values: &[f64]) -> Result<ComplexMatrix> {
        if values.len() != self.rays.len() {
            return Err(Error::BadLength {
                expected: self.rays.len(),
                got: values.len(),
            });
        }
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (ray, &v) in self.rays.iter().zip(values) {
            acc = acc.try_add(&dyadic(&ray.vector)?.scale(C64::new(v, 0.0)))?;
        }
        Ok(acc)
    }

    /// Same set of rays, ignoring order, labels and phases.
    pub fn same_rays(&self, other: &Context) -> bool {
        self.rays.len() == other.rays.len() && self.rays.iter().all(|a| other.rays.iter().any(|b| a.same_ray(b)))
    }
}

/// The eigenbasis of a single-particle observable, labeled in eigenvector order.
pub fn context_of(name: &str, spec: &ObservableSpec, labels: &[&str]) -> Result<Context> {
    if labels.len() != spec.dim() {
        return Err(Error::BadLabels(format!(
            "{} labels for dimension {}",
            labels.len(),
            spec.dim()
        )));
    }
    let rays = labels
        .iter()
        .enumerate()
        .map(|(i, l)| Ray::new(*l, spec.eigenvector(i)))
        .collect::<Result<_>>()?;
    Ok(Context::new(name, rays))
}

/// `Σ e_i · |ray_i⟩⟨ray_i|` for the spec's eigenvalues, which equals
/// [`rotated_observable`](crate::observables::rotated_observable) of the same spec.
pub fn reconstruct_observable(context: &Context, spec: &ObservableSpec) -> Result<ComplexMatrix> {
    context.spectral_sum(&spec.eigenvalues())
}

/// A ray present in two contexts, with its label in each.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedRay {
    pub first_label: String,
    pub second_label: String,
    pub vector: ComplexVector,
}

pub fn links_between(c1: &Context, c2: &Context) -> Vec<SharedRay> {
    c1.rays
        .iter()
        .flat_map(|a| {
            c2.rays.iter().filter(|b| a.same_ray(b)).map(move |b| SharedRay {
                first_label: a.label.clone(),
                second_label: b.label.clone(),
                vector: a.vector.clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextLink {
    pub first: usize,
    pub second: usize,
    pub shared: Vec<SharedRay>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ContextFile>", into = "Vec<ContextFile>")]
pub struct ContextGraph {
    pub contexts: Vec<Context>,
}

impl ContextGraph {
    pub fn new(contexts: Vec<Context>) -> Self {
        Self { contexts }
    }

    /// Every pair of contexts with at least one common ray.
    pub fn links(&self) -> Vec<ContextLink> {
        let mut out = Vec::new();
        for (i, a) in self.contexts.iter().enumerate() {
            for (j, b) in self.contexts.iter().enumerate().skip(i + 1) {
                let shared = links_between(a, b);
                if !shared.is_empty() {
                    out.push(ContextLink {
                        first: i,
                        second: j,
                        shared,
                    });
                }
            }
        }
        out
    }

    /// Distinct ray labels in sorted order.
    pub fn labels(&self) -> Vec<String> {
        self.contexts
            .iter()
            .flat_map(|c| c.rays.iter().map(|r| r.label.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct RayFile {
    label: String,
    vector: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ContextFile {
    name: String,
    rays: Vec<RayFile>,
}

impl TryFrom<Vec<ContextFile>> for ContextGraph {
    type Error = Error;
    fn try_from(files: Vec<ContextFile>) -> Result<Self> {
        let contexts = files
            .into_iter()
            .map(|c| {
                let rays = c
                    .rays
                    .into_iter()
                    .map(|r| {
                        let v = ComplexVector::new(r.vector.iter().map(|[re, im]| C64::new(*re, *im)).collect())?;
                        Ray::new(r.label, v)
                    })
                    .collect::<Result<_>>()?;
                Ok(Context::new(c.name, rays))
            })
            .collect::<Result<_>>()?;
        Ok(Self { contexts })
    }
}

impl From<ContextGraph> for Vec<ContextFile> {
    fn from(g: ContextGraph) -> Self {
        g.contexts
            .into_iter()
            .map(|c| ContextFile {
                name: c.name,
                rays: c
                    .rays
                    .into_iter()
                    .map(|r| RayFile {
                        label: r.label,
                        vector: r.vector.entries().iter().map(|z| [z.re, z.im]).collect(),
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyContext {
        context: String,
    },
    WrongRayCount {
        context: String,
        dim: usize,
        rays: usize,
    },
    DimensionMismatch {
        context: String,
        dim: usize,
        expected: usize,
    },
    NotOrthogonal {
        context: String,
        first: String,
        second: String,
        overlap: f64,
    },
    /// One label names two different rays.
    LabelSplit {
        label: String,
    },
    /// Two labels name the same ray.
    LabelCollision {
        first: String,
        second: String,
    },
    /// Distinct contexts sharing enough rays to force them equal.
    ForcedIdentical {
        first: String,
        second: String,
        shared: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyContext { context } => write!(f, "context {context} has no rays"),
            Self::WrongRayCount { context, dim, rays } => {
                write!(f, "context {context} has {rays} rays in dimension {dim}")
            }
            Self::DimensionMismatch { context, dim, expected } => {
                write!(f, "context {context} has dimension {dim}, expected {expected}")
            }
            Self::NotOrthogonal {
                context,
                first,
                second,
                overlap,
            } => {
                write!(
                    f,
                    "rays {first} and {second} of context {context} overlap by {overlap:e}"
                )
            }
            Self::LabelSplit { label } => write!(f, "label {label} names different rays"),
            Self::LabelCollision { first, second } => write!(f, "labels {first} and {second} name the same ray"),
            Self::ForcedIdentical { first, second, shared } => {
                write!(f, "contexts {first} and {second} share {shared} rays but differ")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_context_graph(g: &ContextGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let dim = g.contexts.first().map_or(0, Context::dim);
    for c in &g.contexts {
        if c.rays.is_empty() {
            violations.push(Violation::EmptyContext {
                context: c.name.clone(),
            });
            continue;
        }
        if c.dim() != dim || c.rays.iter().any(|r| r.dim() != c.dim()) {
            violations.push(Violation::DimensionMismatch {
                context: c.name.clone(),
                dim: c.dim(),
                expected: dim,
            });
            continue;
        }
        if c.rays.len() != dim {
            violations.push(Violation::WrongRayCount {
                context: c.name.clone(),
                dim,
                rays: c.rays.len(),
            });
        }
        for (i, a) in c.rays.iter().enumerate() {
            for b in &c.rays[i + 1..] {
                let overlap = a.vector.inner(&b.vector).map_or(f64::INFINITY, |z| z.norm());
                if overlap > ORTHOGONALITY_TOLERANCE {
                    violations.push(Violation::NotOrthogonal {
                        context: c.name.clone(),
                        first: a.label.clone(),
                        second: b.label.clone(),
                        overlap,
                    });
                }
            }
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let all: Vec<&Ray> = g.contexts.iter().flat_map(|c| &c.rays).collect();
    let mut splits = BTreeSet::new();
    let mut collisions = BTreeSet::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            match (a.label == b.label, a.same_ray(b)) {
                (true, false) => {
                    splits.insert(a.label.clone());
                }
                (false, true) => {
                    let pair = if a.label < b.label {
                        (a.label.clone(), b.label.clone())
                    } else {
                        (b.label.clone(), a.label.clone())
                    };
                    collisions.insert(pair);
                }
                _ => {}
            }
        }
    }
    violations.extend(splits.into_iter().map(|label| Violation::LabelSplit { label }));
    violations.extend(
        collisions
            .into_iter()
            .map(|(first, second)| Violation::LabelCollision { first, second }),
    );

    // an orthonormal basis is fixed by any dim − 1 of its rays
    if dim >= 2 {
        for (i, a) in g.contexts.iter().enumerate() {
            for b in &g.contexts[i + 1..] {
                let shared = links_between(a, b).len();
                if shared >= dim - 1 && !a.same_rays(b) {
                    violations.push(Violation::ForcedIdentical {
                        first: a.name.clone(),
                        second: b.name.clone(),
                        shared,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz text with one node per ray label (sorted) and each context drawn as a
/// chain of edges tagged with its name.
pub fn greechie_dot(g: &ContextGraph) -> Result<String> {
    let report = validate_context_graph(g);
    if !report.is_ok() {
        return Err(Error::InvalidGraph(report.to_string()));
    }
    let mut out = String::from("graph greechie {\n  node [shape=circle];\n");
    for label in g.labels() {
        writeln!(out, "  {};", quoted(&label)).expect("string write");
    }
    for c in &g.contexts {
        for pair in c.rays.windows(2) {
            writeln!(
                out,
                "  {} -- {} [context={}];",
                quoted(&pair[0].label),
                quoted(&pair[1].label),
                quoted(&c.name)
            )
            .expect("string write");
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Built-in context configurations in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Standard basis and its π/4 rotation in the 1-2 plane, linked at the third axis.
    TwoTripods,
    /// The two tripods plus a π/4 rotation in the 2-3 plane linked at the first axis.
    ThreeChain,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Self::TwoTripods, Self::ThreeChain];

    pub fn name(self) -> &'static str {
        match self {
            Self::TwoTripods => "two-tripods",
            Self::ThreeChain => "three-chain",
        }
    }

    pub fn graph(self) -> ContextGraph {
        let quarter = std::f64::consts::FRAC_PI_4;
        let e = context_of("E", &ObservableSpec::standard(3), &["x1", "x2", "x3"]);
        let f = ObservableSpec::in_plane(3, (1, 2), quarter).and_then(|s| context_of("F", &s, &["x1'", "x2'", "x3"]));
        let mut contexts = vec![e.expect("standard basis"), f.expect("rotated basis")];
        if self == Self::ThreeChain {
            let g =
                ObservableSpec::in_plane(3, (2, 3), quarter).and_then(|s| context_of("G", &s, &["x1", "x2''", "x3''"]));
            contexts.push(g.expect("rotated basis"));
        }
        ContextGraph::new(contexts)
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset `{s}`")))
    }
}
