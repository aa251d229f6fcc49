//! Context observables on one or more particles and the analyzer unitaries that sort
//! single-particle amplitudes into output ports.
//!
//! A single-particle observable is `Rᵀ · diag(labels) · R` for a real rotation `R`;
//! its eigenvectors are the rows of `R`. An analyzer stacks the (conjugated) tensor
//! products of those eigenvectors as rows, so output port `n` fires for the `n`-th
//! joint outcome.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{cos_sin, kron_all, kron_vec, ComplexMatrix, ComplexVector, C64, NORM_TOLERANCE};

/// Tolerance for orthogonality of rotation matrices.
const ROTATION_TOLERANCE: f64 = 1e-12;
/// Off-diagonal bound accepted by [`verify_eigenbasis`].
pub const DIAGONAL_TOLERANCE: f64 = 1e-10;
/// Allowed error on the total probability of a [`PortDistribution`].
pub const PROBABILITY_TOLERANCE: f64 = 1e-10;

/// Distinct eigenvalues `e₁₁, e₂₂, …` of a single-particle observable.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueLabels(Vec<f64>);

impl EigenvalueLabels {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadLabels("no labels".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadLabels("labels must be finite".into()));
        }
        for (i, a) in values.iter().enumerate() {
            if values[i + 1..].contains(a) {
                return Err(Error::BadLabels(format!("label {a} repeated")));
            }
        }
        Ok(Self(values))
    }

    /// `(1, 0)` for qubits, `(1, 0, −1)` for qutrits, descending integers otherwise.
    pub fn default_for(dim: usize) -> Self {
        match dim {
            2 => Self(vec![1.0, 0.0]),
            3 => Self(vec![1.0, 0.0, -1.0]),
            _ => Self((0..dim).rev().map(|k| k as f64).collect()),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Identity with the `(a, b)` block (1-based axes) replaced by `[[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn rotation_plane(dim: usize, axes: (usize, usize), theta: f64) -> Result<ComplexMatrix> {
    let (a, b) = axes;
    if a == 0 || a >= b || b > dim {
        return Err(Error::BadAxes { a, b, dim });
    }
    let (c, s) = cos_sin(theta);
    let mut m = ComplexMatrix::identity(dim);
    m.set(a - 1, a - 1, C64::new(c, 0.0));
    m.set(a - 1, b - 1, C64::new(s, 0.0));
    m.set(b - 1, a - 1, C64::new(-s, 0.0));
    m.set(b - 1, b - 1, C64::new(c, 0.0));
    Ok(m)
}

/// One particle's slot in a joint measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSpec {
    rotation: ComplexMatrix,
    /// `None` marks an identity slot: every eigenvalue is 1.
    labels: Option<EigenvalueLabels>,
}

impl ObservableSpec {
    pub fn new(rotation: ComplexMatrix, labels: EigenvalueLabels) -> Result<Self> {
        check_rotation(&rotation)?;
        if labels.values().len() != rotation.rows() {
            return Err(Error::BadLabels(format!(
                "{} labels for dimension {}",
                labels.values().len(),
                rotation.rows()
            )));
        }
        Ok(Self {
            rotation,
            labels: Some(labels),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            rotation: ComplexMatrix::identity(dim),
            labels: None,
        }
    }

    /// Observable measured along the standard basis rotated by `theta` in the `axes` plane.
    pub fn in_plane(dim: usize, axes: (usize, usize), theta: f64) -> Result<Self> {
        Self::new(rotation_plane(dim, axes, theta)?, EigenvalueLabels::default_for(dim))
    }

    /// The unrotated observable `diag(labels)` with default labels.
    pub fn standard(dim: usize) -> Self {
        Self {
            rotation: ComplexMatrix::identity(dim),
            labels: Some(EigenvalueLabels::default_for(dim)),
        }
    }

    pub fn with_labels(self, labels: EigenvalueLabels) -> Result<Self> {
        Self::new(self.rotation, labels)
    }

    pub fn dim(&self) -> usize {
        self.rotation.rows()
    }

    pub fn rotation(&self) -> &ComplexMatrix {
        &self.rotation
    }

    pub fn is_identity(&self) -> bool {
        self.labels.is_none()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        match &self.labels {
            Some(l) => l.values().to_vec(),
            None => vec![1.0; self.dim()],
        }
    }

    /// Eigenvector `i`: row `i` of the rotation, i.e. `Rᵀ·e_i`.
    pub fn eigenvector(&self, i: usize) -> ComplexVector {
        self.rotation.row(i)
    }
}

fn check_rotation(r: &ComplexMatrix) -> Result<()> {
    if !r.is_square() {
        return Err(Error::NotSquare {
            rows: r.rows(),
            cols: r.cols(),
        });
    }
    if r.entries().iter().any(|z| z.im != 0.0) {
        return Err(Error::BadLabels("rotation must be real".into()));
    }
    let dev = (r * &r.transpose()).max_abs_diff(&ComplexMatrix::identity(r.rows()));
    if dev > ROTATION_TOLERANCE {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// `Rᵀ · diag(labels) · R`.
pub fn rotated_observable(spec: &ObservableSpec) -> ComplexMatrix {
    let r = spec.rotation();
    &(&r.transpose() * &ComplexMatrix::diag_real(&spec.eigenvalues())) * r
}

/// Joint observable on several particles: the Kronecker product of per-particle matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorObservable {
    pub parts: Vec<ObservableSpec>,
    pub matrix: ComplexMatrix,
}

impl TensorObservable {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn ensure_parts(parts: &[ObservableSpec]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::DimMismatch("at least one particle required".into()));
    }
    Ok(())
}

pub fn tensor_observable(parts: &[ObservableSpec]) -> Result<TensorObservable> {
    ensure_parts(parts)?;
    let matrices: Vec<ComplexMatrix> = parts.iter().map(rotated_observable).collect();
    Ok(TensorObservable {
        parts: parts.to_vec(),
        matrix: kron_all(&matrices),
    })
}

/// The observable of particle `k` alone, identity on every other slot.
pub fn single_sided(parts: &[ObservableSpec], k: usize) -> Result<ComplexMatrix> {
    ensure_parts(parts)?;
    if k >= parts.len() {
        return Err(Error::BadIndex(k));
    }
    let matrices: Vec<ComplexMatrix> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if i == k {
                rotated_observable(p)
            } else {
                ComplexMatrix::identity(p.dim())
            }
        })
        .collect();
    Ok(kron_all(&matrices))
}

/// Row order of an analyzer over joint eigenvector multi-indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RowOrdering {
    /// Highest multi-index first: `(d−1, …, d−1)` down to `(0, …, 0)`.
    #[default]
    ReversedLex,
    ForwardLex,
}

impl FromStr for RowOrdering {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reversed" | "reversed_lex" | "reversed-lex" => Ok(Self::ReversedLex),
            "forward" | "forward_lex" | "forward-lex" => Ok(Self::ForwardLex),
            other => Err(Error::Parse(format!("unknown ordering `{other}`"))),
        }
    }
}

impl fmt::Display for RowOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ReversedLex => "reversed_lex",
            Self::ForwardLex => "forward_lex",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerUnitary {
    pub matrix: ComplexMatrix,
    /// Per-particle eigenvector index for each row.
    pub outcome_indices: Vec<Vec<usize>>,
    /// Per-particle eigenvalue for each row.
    pub outcome_labels: Vec<Vec<f64>>,
    pub ordering: RowOrdering,
}

impl AnalyzerUnitary {
    /// Product of the per-particle eigenvalues for each row.
    pub fn joint_eigenvalues(&self) -> Vec<f64> {
        self.outcome_labels.iter().map(|l| l.iter().product()).collect()
    }
}

/// Mixed-radix digits of `index`, most significant first.
fn digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

pub fn analyzer_unitary(parts: &[ObservableSpec], ordering: RowOrdering) -> Result<AnalyzerUnitary> {
    ensure_parts(parts)?;
    let radices: Vec<usize> = parts.iter().map(ObservableSpec::dim).collect();
    let total: usize = radices.iter().product();
    let order: Vec<usize> = match ordering {
        RowOrdering::ReversedLex => (0..total).rev().collect(),
        RowOrdering::ForwardLex => (0..total).collect(),
    };
    let eigenvalues: Vec<Vec<f64>> = parts.iter().map(ObservableSpec::eigenvalues).collect();
    let mut rows = Vec::with_capacity(total);
    let mut outcome_indices = Vec::with_capacity(total);
    let mut outcome_labels = Vec::with_capacity(total);
    for index in order {
        let multi = digits(index, &radices);
        let joint = multi
            .iter()
            .zip(parts)
            .map(|(&i, p)| p.eigenvector(i))
            .reduce(|acc, v| kron_vec(&acc, &v))
            .expect("non-empty parts");
        rows.push(joint.conj().into_entries());
        outcome_labels.push(multi.iter().zip(&eigenvalues).map(|(&i, ev)| ev[i]).collect());
        outcome_indices.push(multi);
    }
    Ok(AnalyzerUnitary {
        matrix: ComplexMatrix::from_rows(&rows)?,
        outcome_indices,
        outcome_labels,
        ordering,
    })
}

/// Detection probabilities over output ports.
#[derive(Debug, Clone, PartialEq)]
pub struct PortDistribution {
    pub probabilities: Vec<f64>,
}

impl PortDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// `p_n = |(A·ψ)_n|²`.
pub fn port_distribution(amplitudes: &ComplexVector) -> PortDistribution {
    PortDistribution {
        probabilities: amplitudes.entries().iter().map(|z| z.norm_sqr().max(0.0)).collect(),
    }
}

pub fn predict_ports(analyzer: &AnalyzerUnitary, psi: &ComplexVector) -> Result<PortDistribution> {
    if analyzer.matrix.cols() != psi.dim() {
        return Err(Error::DimMismatch(format!(
            "analyzer of dimension {} given a {}-dimensional state",
            analyzer.matrix.cols(),
            psi.dim()
        )));
    }
    psi.ensure_normalized(NORM_TOLERANCE)?;
    Ok(port_distribution(&analyzer.matrix.apply(psi)?))
}

/// Checks that `A·O·A†` is diagonal with the analyzer's joint eigenvalues on the
/// diagonal, and returns that diagonal.
pub fn verify_eigenbasis(obs: &TensorObservable, analyzer: &AnalyzerUnitary) -> Result<Vec<f64>> {
    if obs.dim() != analyzer.matrix.rows() {
        return Err(Error::DimMismatch(format!(
            "{} vs {}",
            obs.dim(),
            analyzer.matrix.rows()
        )));
    }
    let a = &analyzer.matrix;
    let d = &(a * &obs.matrix) * &a.adjoint();
    let off = d.max_off_diagonal();
    if off > DIAGONAL_TOLERANCE {
        return Err(Error::NotDiagonalized(off));
    }
    let diagonal: Vec<f64> = d.diagonal().iter().map(|z| z.re).collect();
    for (row, (got, expected)) in diagonal.iter().zip(analyzer.joint_eigenvalues()).enumerate() {
        if (got - expected).abs() > DIAGONAL_TOLERANCE {
            return Err(Error::LabelMismatch {
                row,
                got: *got,
                expected,
            });
        }
    }
    Ok(diagonal)
}

/// Parses one particle's observable: `id`, or `;`-separated `plane=a,b`, `theta=X`,
/// `labels=v1,v2[,v3]`. A missing plane defaults to `1,2`.
pub fn parse_observable(text: &str, dim: usize) -> Result<ObservableSpec> {
    let text = text.trim();
    if text == "id" || text == "identity" {
        return Ok(ObservableSpec::identity(dim));
    }
    let mut axes = None;
    let mut theta = None;
    let mut labels = None;
    for field in text.split(';').map(str::trim).filter(|f| !f.is_empty()) {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{field}`")))?;
        match key.trim() {
            "plane" => {
                let nums = parse_list::<usize>(value)?;
                let [a, b] = nums[..] else {
                    return Err(Error::Parse(format!("plane needs two axes, got `{value}`")));
                };
                axes = Some((a, b));
            }
            "theta" => {
                theta = Some(
                    value
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("theta `{value}`: {e}")))?,
                )
            }
            "labels" => labels = Some(EigenvalueLabels::new(parse_list::<f64>(value)?)?),
            other => return Err(Error::Parse(format!("unknown observable key `{other}`"))),
        }
    }
    let rotation = match (axes, theta) {
        (None, None) => ComplexMatrix::identity(dim),
        (axes, theta) => rotation_plane(dim, axes.unwrap_or((1, 2)), theta.unwrap_or(0.0))?,
    };
    ObservableSpec::new(rotation, labels.unwrap_or_else(|| EigenvalueLabels::default_for(dim)))
}

/// Parses `|`-separated per-particle observables.
pub fn parse_observables(text: &str, dim: usize) -> Result<Vec<ObservableSpec>> {
    text.split('|').map(|part| parse_observable(part, dim)).collect()
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
        .collect()
}

/// Single-particle dimension `d` with `d^particles = total`.
pub fn particle_dim(total: usize, particles: usize) -> Result<usize> {
    if particles == 0 {
        return Err(Error::DimMismatch("no particles".into()));
    }
    (1..=total)
        .find(|d| d.checked_pow(particles as u32) == Some(total))
        .ok_or_else(|| Error::DimMismatch(format!("dimension {total} is not a power of {particles} equal factors")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::commutator;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn labelled(dim: usize, axes: (usize, usize), theta: f64, labels: &[f64]) -> ObservableSpec {
        ObservableSpec::in_plane(dim, axes, theta)
            .unwrap()
            .with_labels(EigenvalueLabels::new(labels.to_vec()).unwrap())
            .unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation_plane(2, (1, 2), 0.0).unwrap(), ComplexMatrix::identity(2));
        let h = FRAC_1_SQRT_2;
        let r12 = ComplexMatrix::from_real_rows(&[&[h, h, 0.0], &[-h, h, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(rotation_plane(3, (1, 2), FRAC_PI_4).unwrap(), r12);
        let prod = &rotation_plane(3, (2, 3), 0.7).unwrap() * &rotation_plane(3, (2, 3), -0.7).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        assert_eq!(
            rotation_plane(3, (2, 2), 0.1),
            Err(Error::BadAxes { a: 2, b: 2, dim: 3 })
        );
        assert_eq!(
            rotation_plane(2, (1, 3), 0.1),
            Err(Error::BadAxes { a: 1, b: 3, dim: 2 })
        );
    }

    #[test]
    fn rotated_observable_2d() {
        let (e11, e22) = (2.0, -3.0);
        let f = rotated_observable(&labelled(2, (1, 2), FRAC_PI_4, &[e11, e22]));
        let s = (e11 + e22) / 2.0;
        let d = (e11 - e22) / 2.0;
        let expected = ComplexMatrix::from_real_rows(&[&[s, d], &[d, s]]).unwrap();
        assert!(f.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn rotated_observable_3d() {
        let (e11, e22, e33) = (2.0, -3.0, 5.0);
        let f = rotated_observable(&labelled(3, (1, 2), FRAC_PI_4, &[e11, e22, e33]));
        let s = (e11 + e22) / 2.0;
        let d = (e11 - e22) / 2.0;
        let expected = ComplexMatrix::from_real_rows(&[&[s, d, 0.0], &[d, s, 0.0], &[0.0, 0.0, e33]]).unwrap();
        assert!(f.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn unrotated_is_diagonal() {
        let spec = labelled(3, (1, 2), 0.0, &[4.0, 5.0, 6.0]);
        assert_eq!(rotated_observable(&spec), ComplexMatrix::diag_real(&[4.0, 5.0, 6.0]));
    }

    #[test]
    fn tensor_with_identity() {
        let (e11, e22) = (2.0, -3.0);
        let e = labelled(2, (1, 2), 0.0, &[e11, e22]);
        let o1 = tensor_observable(&[e, ObservableSpec::identity(2)]).unwrap();
        assert_eq!(o1.matrix, ComplexMatrix::diag_real(&[e11, e11, e22, e22]));
    }

    #[test]
    fn tensor_block_form() {
        let (e11, e22) = (2.0, -3.0);
        let e = labelled(2, (1, 2), 0.0, &[e11, e22]);
        let f = labelled(2, (1, 2), FRAC_PI_4, &[e11, e22]);
        let o12 = tensor_observable(&[e, f]).unwrap().matrix;
        let (s, d) = ((e11 + e22) / 2.0, (e11 - e22) / 2.0);
        let expected = ComplexMatrix::from_real_rows(&[
            &[e11 * s, e11 * d, 0.0, 0.0],
            &[e11 * d, e11 * s, 0.0, 0.0],
            &[0.0, 0.0, e22 * s, e22 * d],
            &[0.0, 0.0, e22 * d, e22 * s],
        ])
        .unwrap();
        assert!(o12.max_abs_diff(&expected) < 1e-14, "{}", o12.max_abs_diff(&expected));
    }

    #[test]
    fn three_particle_observable_is_hermitian() {
        let parts = [
            ObservableSpec::standard(3),
            ObservableSpec::in_plane(3, (1, 2), FRAC_PI_4).unwrap(),
            ObservableSpec::in_plane(3, (2, 3), FRAC_PI_4).unwrap(),
        ];
        let o = tensor_observable(&parts).unwrap();
        assert_eq!(o.dim(), 27);
        assert!(o.matrix.max_abs_diff(&o.matrix.adjoint()) < 1e-15);
    }

    #[test]
    fn counterdiagonal_analyzer() {
        let a = analyzer_unitary(
            &[ObservableSpec::standard(2), ObservableSpec::identity(2)],
            RowOrdering::ReversedLex,
        )
        .unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(a.matrix, expected);
        assert_eq!(a.outcome_indices[0], vec![1, 1]);
    }

    #[test]
    fn forward_lex_theta_analyzer() {
        let theta = 0.3;
        let parts = [
            ObservableSpec::standard(2),
            ObservableSpec::in_plane(2, (1, 2), theta).unwrap(),
        ];
        let a = analyzer_unitary(&parts, RowOrdering::ForwardLex).unwrap();
        let r = rotation_plane(2, (1, 2), theta).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (off, (i, j)) in [
            (0, (0, 0)),
            (0, (0, 1)),
            (0, (1, 0)),
            (0, (1, 1)),
            (2, (0, 0)),
            (2, (0, 1)),
            (2, (1, 0)),
            (2, (1, 1)),
        ] {
            expected.set(off + i, off + j, r[(i, j)]);
        }
        assert_eq!(a.matrix, expected);
    }

    #[test]
    fn orderings_differ_by_row_permutation() {
        let parts = [
            ObservableSpec::standard(3),
            ObservableSpec::in_plane(3, (2, 3), 0.4).unwrap(),
        ];
        let fwd = analyzer_unitary(&parts, RowOrdering::ForwardLex).unwrap();
        let rev = analyzer_unitary(&parts, RowOrdering::ReversedLex).unwrap();
        for i in 0..9 {
            assert_eq!(fwd.matrix.row(i), rev.matrix.row(8 - i));
        }
    }

    #[test]
    fn verify_diag_with_identity_analyzer() {
        let spec = labelled(3, (1, 2), 0.0, &[4.0, 5.0, 6.0]);
        let obs = tensor_observable(std::slice::from_ref(&spec)).unwrap();
        let a = analyzer_unitary(&[spec], RowOrdering::ForwardLex).unwrap();
        assert_eq!(a.matrix, ComplexMatrix::identity(3));
        assert_eq!(verify_eigenbasis(&obs, &a).unwrap(), vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn verify_flags_wrong_analyzer() {
        let obs = tensor_observable(&[ObservableSpec::in_plane(2, (1, 2), FRAC_PI_4).unwrap()]).unwrap();
        let a = analyzer_unitary(&[ObservableSpec::standard(2)], RowOrdering::ReversedLex).unwrap();
        assert!(matches!(verify_eigenbasis(&obs, &a), Err(Error::NotDiagonalized(_))));
    }

    #[test]
    fn verify_flags_label_mismatch() {
        let parts = [labelled(2, (1, 2), 0.0, &[2.0, 3.0])];
        let obs = tensor_observable(&parts).unwrap();
        let other = analyzer_unitary(&[labelled(2, (1, 2), 0.0, &[7.0, 3.0])], RowOrdering::ForwardLex).unwrap();
        assert!(matches!(
            verify_eigenbasis(&obs, &other),
            Err(Error::LabelMismatch { row: 0, .. })
        ));
    }

    #[test]
    fn predict_checks_inputs() {
        let a = analyzer_unitary(&[ObservableSpec::standard(2)], RowOrdering::ForwardLex).unwrap();
        let long = ComplexVector::basis(3, 0).unwrap();
        assert!(matches!(predict_ports(&a, &long), Err(Error::DimMismatch(_))));
        let unnormalized = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(predict_ports(&a, &unnormalized), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn single_sided_observables_commute() {
        let parts = [
            ObservableSpec::standard(3),
            ObservableSpec::in_plane(3, (1, 2), 0.9).unwrap(),
            ObservableSpec::in_plane(3, (2, 3), -0.4).unwrap(),
        ];
        let ops: Vec<_> = (0..3).map(|k| single_sided(&parts, k).unwrap()).collect();
        for a in &ops {
            for b in &ops {
                assert!(commutator(a, b).unwrap().max_abs() <= 1e-13);
            }
        }
        assert_eq!(single_sided(&parts, 3), Err(Error::BadIndex(3)));
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(EigenvalueLabels::new(vec![1.0, 1.0]).is_err());
        assert!(EigenvalueLabels::new(vec![1.0, f64::NAN]).is_err());
        let spec = ObservableSpec::in_plane(2, (1, 2), 0.0).unwrap();
        assert!(spec
            .with_labels(EigenvalueLabels::new(vec![1.0, 2.0, 3.0]).unwrap())
            .is_err());
    }

    #[test]
    fn parse_observable_strings() {
        let parts = parse_observables("plane=1,2;theta=0|plane=1,2;theta=0.7853981634", 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].rotation(), &ComplexMatrix::identity(2));
        assert!((parts[1].rotation()[(0, 1)].re - FRAC_1_SQRT_2).abs() < 1e-10);

        let parts = parse_observables("id|plane=2,3;theta=0.5;labels=3,2,1", 3).unwrap();
        assert!(parts[0].is_identity());
        assert_eq!(parts[1].eigenvalues(), vec![3.0, 2.0, 1.0]);

        assert!(parse_observable("plane=1;theta=0", 2).is_err());
        assert!(parse_observable("color=red", 2).is_err());
        assert!(parse_observable("theta=abc", 2).is_err());
        assert!(parse_observable("plane=2,3;theta=0", 2).is_err());
    }

    #[test]
    fn particle_dims() {
        assert_eq!(particle_dim(4, 2).unwrap(), 2);
        assert_eq!(particle_dim(9, 2).unwrap(), 3);
        assert_eq!(particle_dim(27, 3).unwrap(), 3);
        assert!(particle_dim(8, 2).is_err());
    }
}
