//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;

use multiport::contexts::{links_between, validate_context_graph, Context, ContextGraph, Preset, Ray, Violation};
use multiport::decompose::{decompose, reconstruct, Factorization};
use multiport::devices::{bridge_params, t_bs, t_matrix, t_mz, t_mz_product, MzParams, NamedGate, TParams};
use multiport::interferometer::{netlist_from_factorization, simulate};
use multiport::numerics::{
    commutator, equal_up_to_global_phase, kron, kron_all, random_unitary, unitarity_deviation, ComplexMatrix,
    ComplexVector, C64,
};
use multiport::observables::{
    analyzer_unitary, predict_ports, single_sided, tensor_observable, verify_eigenbasis, EigenvalueLabels,
    ObservableSpec, RowOrdering,
};
use multiport::states::{
    bell_state, qutrit2_singlet, qutrit3_singlet, reference_preparation_bell4, reference_preparation_qutrit2,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const H: f64 = FRAC_1_SQRT_2;
const S3: f64 = 0.577_350_269_189_625_8;
const S6: f64 = 0.408_248_290_463_863_1;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap()
}

fn psi4() -> ComplexVector {
    bell_state(4).unwrap()
}

fn e_2() -> ObservableSpec {
    ObservableSpec::standard(2)
}

fn f_2(theta: f64) -> ObservableSpec {
    ObservableSpec::in_plane(2, (1, 2), theta).unwrap()
}

fn printed_u1() -> ComplexMatrix {
    real(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ])
}

fn printed_u2() -> ComplexMatrix {
    real(&[
        &[0.0, 0.0, -H, H],
        &[0.0, 0.0, H, H],
        &[-H, H, 0.0, 0.0],
        &[H, H, 0.0, 0.0],
    ])
}

fn printed_u2_qutrit() -> ComplexMatrix {
    let z = 0.0;
    real(&[
        &[z, z, z, z, z, z, z, z, 1.0],
        &[z, z, z, z, z, z, -H, H, z],
        &[z, z, z, z, z, z, H, H, z],
        &[z, z, z, z, z, 1.0, z, z, z],
        &[z, z, z, -H, H, z, z, z, z],
        &[z, z, z, H, H, z, z, z, z],
        &[z, z, 1.0, z, z, z, z, z, z],
        &[-H, H, z, z, z, z, z, z, z],
        &[H, H, z, z, z, z, z, z, z],
    ])
}

fn printed_up_bell() -> ComplexMatrix {
    real(&[
        &[0.0, -H, H, 0.0],
        &[H, 0.0, 0.0, H],
        &[-H, 0.0, 0.0, H],
        &[0.0, H, H, 0.0],
    ])
}

fn printed_up_qutrit() -> ComplexMatrix {
    let (z, a) = (0.0, S3);
    real(&[
        &[z, z, -a, z, a, z, -a, z, z],
        &[z, 1.0, z, z, z, z, z, z, z],
        &[a, z, z, z, -a, z, -a, z, z],
        &[z, z, z, 1.0, z, z, z, z, z],
        &[-a, z, -a, z, -a, z, z, z, z],
        &[z, z, z, z, z, 1.0, z, z, z],
        &[a, z, -a, z, z, z, a, z, z],
        &[z, z, z, z, z, z, z, 1.0, z],
        &[z, z, z, z, z, z, z, z, 1.0],
    ])
}

fn qutrit_analyzer() -> ComplexMatrix {
    let parts = [
        ObservableSpec::identity(3),
        ObservableSpec::in_plane(3, (1, 2), FRAC_PI_4).unwrap(),
    ];
    analyzer_unitary(&parts, RowOrdering::ReversedLex).unwrap().matrix
}

fn parallel_singlet() -> Outcome {
    let u1 = analyzer_unitary(&[e_2(), ObservableSpec::identity(2)], RowOrdering::ReversedLex).unwrap();
    let p = predict_ports(&u1, &psi4()).map_err(|e| e.to_string())?.probabilities;
    let dev = max_diff(&p, &[0.0, 0.5, 0.5, 0.0]);
    ensure(dev <= 1e-12, || format!("{p:?}"))?;
    Ok(format!("ports {p:?}, max deviation {dev:e}"))
}

fn rotated_analyzer() -> Outcome {
    let u12 = analyzer_unitary(&[e_2(), f_2(FRAC_PI_4)], RowOrdering::ForwardLex).unwrap();
    let p = predict_ports(&u12, &psi4()).map_err(|e| e.to_string())?.probabilities;
    let dev = max_diff(&p, &[0.25; 4]);
    ensure(dev <= 1e-12, || format!("{p:?}"))?;
    let u2 = printed_u2();
    let same_rows = (0..4).all(|i| (0..4).any(|j| u12.matrix.row(i) == u2.row(j)))
        && (0..4).all(|j| (0..4).any(|i| u12.matrix.row(i) == u2.row(j)));
    ensure(same_rows, || "row sets of U12 and U2 differ".into())?;
    Ok(format!("ports uniform within {dev:e}; row sets equal"))
}

fn theta_sweep() -> Outcome {
    let mut worst = 0.0_f64;
    for k in 0..32 {
        let theta = PI * k as f64 / 31.0;
        let a = analyzer_unitary(&[e_2(), f_2(theta)], RowOrdering::ForwardLex).unwrap();
        let p = predict_ports(&a, &psi4()).map_err(|e| e.to_string())?.probabilities;
        let (s2, c2) = (theta.sin().powi(2) / 2.0, theta.cos().powi(2) / 2.0);
        worst = worst.max(max_diff(&p, &[s2, c2, c2, s2]));
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("32 angles, max deviation {worst:e}"))
}

fn qutrit_prediction() -> Outcome {
    let parts = [
        ObservableSpec::identity(3),
        ObservableSpec::in_plane(3, (1, 2), FRAC_PI_4).unwrap(),
    ];
    let a = analyzer_unitary(&parts, RowOrdering::ReversedLex).unwrap();
    let phi = qutrit2_singlet();
    let p = predict_ports(&a, &phi).map_err(|e| e.to_string())?.probabilities;
    let (t, s) = (1.0 / 3.0, 1.0 / 6.0);
    let dev = max_diff(&p, &[0.0, s, s, 0.0, s, s, t, 0.0, 0.0]);
    ensure(dev <= 1e-12, || format!("{p:?}"))?;
    let amps = a.matrix.apply(&phi).unwrap();
    let printed = ComplexVector::from_real(&[0.0, -S6, S6, 0.0, -S6, -S6, S3, 0.0, 0.0]).unwrap();
    let adev = amps.max_abs_diff(&printed);
    ensure(adev <= 1e-12, || format!("amplitudes {amps:?}"))?;
    Ok(format!(
        "port 7 = {}, distribution deviation {dev:e}, amplitude deviation {adev:e}",
        p[6]
    ))
}

fn printed_matrices() -> Outcome {
    let u1 = analyzer_unitary(&[e_2(), ObservableSpec::identity(2)], RowOrdering::ReversedLex)
        .unwrap()
        .matrix;
    let u2 = analyzer_unitary(&[ObservableSpec::identity(2), f_2(FRAC_PI_4)], RowOrdering::ReversedLex)
        .unwrap()
        .matrix;
    let checks = [
        ("U1", u1.max_abs_diff(&printed_u1())),
        ("U2", u2.max_abs_diff(&printed_u2())),
        ("U2(9x9)", qutrit_analyzer().max_abs_diff(&printed_u2_qutrit())),
        (
            "Up(4x4)",
            reference_preparation_bell4().max_abs_diff(&printed_up_bell()),
        ),
        (
            "Up(9x9)",
            reference_preparation_qutrit2().max_abs_diff(&printed_up_qutrit()),
        ),
        (
            "Up(4x4) e1",
            reference_preparation_bell4().column(0).max_abs_diff(&psi4()),
        ),
        (
            "Up(9x9) e1",
            reference_preparation_qutrit2()
                .column(0)
                .max_abs_diff(&qutrit2_singlet()),
        ),
    ];
    for (name, dev) in checks {
        ensure(dev == 0.0, || format!("{name} deviates by {dev:e}"))?;
    }
    let udev = unitarity_deviation(&printed_up_bell())
        .unwrap()
        .max(unitarity_deviation(&printed_up_qutrit()).unwrap());
    ensure(udev <= 1e-15, || format!("preparation unitarity {udev:e}"))?;
    Ok(format!("5 matrices exact, preparation unitarity {udev:e}"))
}

fn decomposition_round_trip() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [2, 3, 4, 9, 27] {
        let u = random_unitary(n, 1000 + n as u64);
        let f = decompose(&u).map_err(|e| e.to_string())?;
        ensure(f.factors.len() <= Factorization::max_factor_count(n), || {
            format!("n={n}: {} factors", f.factors.len())
        })?;
        let dev = reconstruct(&f).max_abs_diff(&u);
        ensure(dev <= 1e-10, || format!("n={n}: reconstruction error {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("n in {{2,3,4,9,27}}, max error {worst:e}"))
}

fn netlist_equivalence() -> Outcome {
    let mut detail = Vec::new();
    for (name, up, target) in [
        ("4-dim", reference_preparation_bell4(), psi4()),
        ("9-dim", reference_preparation_qutrit2(), qutrit2_singlet()),
    ] {
        let nl = netlist_from_factorization(&decompose(&up).unwrap()).map_err(|e| e.to_string())?;
        let out = simulate(&nl, &ComplexVector::basis(up.rows(), 0).unwrap()).unwrap();
        ensure(equal_up_to_global_phase(&out, &target, 1e-10).unwrap(), || {
            format!("{name}: output {out:?}")
        })?;
        detail.push(format!("{name} {} cells", nl.beam_splitter_count()));
    }
    Ok(detail.join(", "))
}

fn device_identities() -> Outcome {
    let (mut bs, mut mz, mut product) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..16 {
        for j in 0..16 {
            let omega = FRAC_PI_2 * i as f64 / 15.0;
            let phi = -PI + 2.0 * PI * j as f64 / 15.0;
            let t = t_matrix(TParams::new(omega, phi));
            let (b, m) = bridge_params(TParams::new(omega, phi));
            bs = bs.max(t_bs(b).max_abs_diff(&t));
            mz = mz.max(t_mz(m).max_abs_diff(&t));
            let p = MzParams {
                alpha: phi - 0.3,
                beta: 0.7 * phi,
                omega: 2.0 * omega - 0.1,
                phi: 1.1 - phi,
            };
            product = product.max(t_mz(p).max_abs_diff(&t_mz_product(p)));
        }
    }
    ensure(bs <= 1e-13 && mz <= 1e-13, || {
        format!("bridge errors bs {bs:e}, mz {mz:e}")
    })?;
    ensure(product <= 1e-14, || format!("MZ product form error {product:e}"))?;
    let root_i = NamedGate::SqrtI2.matrix();
    let root_not = NamedGate::SqrtNot.matrix();
    let ei = (&root_i * &root_i).max_abs_diff(&ComplexMatrix::identity(2));
    let en = (&root_not * &root_not).max_abs_diff(&NamedGate::Not.matrix());
    ensure(ei <= 1e-14 && en <= 1e-14, || format!("roots: {ei:e}, {en:e}"))?;
    Ok(format!(
        "bridge {:e}, MZ product {product:e}, roots {:e}",
        bs.max(mz),
        ei.max(en)
    ))
}

fn commutation() -> Outcome {
    let two = [e_2(), f_2(FRAC_PI_4)];
    let three = [
        ObservableSpec::standard(3),
        ObservableSpec::in_plane(3, (1, 2), FRAC_PI_4).unwrap(),
        ObservableSpec::in_plane(3, (2, 3), FRAC_PI_4).unwrap(),
    ];
    let mut worst = 0.0_f64;
    for parts in [&two[..], &three[..]] {
        let ops: Vec<_> = (0..parts.len()).map(|k| single_sided(parts, k).unwrap()).collect();
        for (i, a) in ops.iter().enumerate() {
            for b in &ops[i + 1..] {
                worst = worst.max(commutator(a, b).unwrap().max_abs());
            }
        }
    }
    ensure(worst <= 1e-13, || format!("max commutator {worst:e}"))?;
    Ok(format!("2- and 3-particle, max commutator {worst:e}"))
}

fn antisymmetry() -> Outcome {
    let (psi, delta) = (psi4(), qutrit3_singlet());
    let mut worst = 0.0_f64;
    for seed in 0..50 {
        let u = random_unitary(2, seed);
        let lhs = kron(&u, &u).apply(&psi).unwrap();
        worst = worst.max(lhs.max_abs_diff(&psi.scale(u.determinant().unwrap())));
        let v = random_unitary(3, 500 + seed);
        let lhs = kron_all(&[v.clone(), v.clone(), v.clone()]).apply(&delta).unwrap();
        worst = worst.max(lhs.max_abs_diff(&delta.scale(v.determinant().unwrap())));
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("50 unitaries each, max deviation {worst:e}"))
}

/// The ray orthogonal to both `a` and `b` in three dimensions.
fn orthogonal_to(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let v = ComplexVector::new(cross.iter().map(|z| z.conj()).collect()).unwrap();
    v.scale(C64::new(1.0 / v.norm(), 0.0))
}

fn context(name: &str, rays: [(&str, &ComplexVector); 3]) -> Context {
    Context::new(
        name,
        rays.iter().map(|(l, v)| Ray::new(*l, (*v).clone()).unwrap()).collect(),
    )
}

fn context_structure() -> Outcome {
    let g = Preset::TwoTripods.graph();
    let shared = links_between(&g.contexts[0], &g.contexts[1]);
    let axis = ComplexVector::basis(3, 2).unwrap();
    ensure(
        shared.len() == 1 && equal_up_to_global_phase(&shared[0].vector, &axis, 1e-8).unwrap(),
        || format!("{} shared rays", shared.len()),
    )?;
    let report = validate_context_graph(&Preset::ThreeChain.graph());
    ensure(report.is_ok(), || format!("chain rejected: {report}"))?;

    for seed in 0..20 {
        let u = random_unitary(3, 7000 + seed);
        let (a, b, c) = (u.column(0), u.column(1), u.column(2));
        // K orthogonal to A and C is forced onto B
        let k = orthogonal_to(&a, &c);
        let d = orthogonal_to(&a, &k);
        let l = orthogonal_to(&k, &c);
        let forced = ContextGraph::new(vec![
            context("1", [("A", &a), ("B", &b), ("C", &c)]),
            context("2", [("A", &a), ("D", &d), ("K", &k)]),
            context("3", [("K", &k), ("L", &l), ("C", &c)]),
        ]);
        let report = validate_context_graph(&forced);
        let collision = Violation::LabelCollision {
            first: "B".into(),
            second: "K".into(),
        };
        ensure(report.violations.contains(&collision), || {
            format!("seed {seed}: accepted ({report})")
        })?;

        // K orthogonal to A only leaves the third context non-orthogonal
        let k = ComplexVector::new(
            b.entries()
                .iter()
                .zip(c.entries())
                .map(|(x, y)| x * 0.6 + y * 0.8)
                .collect(),
        )
        .unwrap();
        let d = orthogonal_to(&a, &k);
        let l = orthogonal_to(&k, &c);
        let skew = ContextGraph::new(vec![
            context("1", [("A", &a), ("B", &b), ("C", &c)]),
            context("2", [("A", &a), ("D", &d), ("K", &k)]),
            context("3", [("K", &k), ("L", &l), ("C", &c)]),
        ]);
        ensure(!validate_context_graph(&skew).is_ok(), || {
            format!("seed {seed}: skew attempt accepted")
        })?;
    }
    Ok("link is (0,0,1); chain valid; 40 footnote realizations rejected".into())
}

fn labelled(spec: ObservableSpec, labels: &[f64]) -> ObservableSpec {
    spec.with_labels(EigenvalueLabels::new(labels.to_vec()).unwrap())
        .unwrap()
}

fn eigenbasis() -> Outcome {
    let (e11, e22) = (2.0, -3.0);
    let e = labelled(e_2(), &[e11, e22]);
    let f = labelled(f_2(FRAC_PI_4), &[e11, e22]);

    let o2_parts = [ObservableSpec::identity(2), f.clone()];
    let a = analyzer_unitary(&o2_parts, RowOrdering::ReversedLex).unwrap();
    let d = verify_eigenbasis(&tensor_observable(&o2_parts).unwrap(), &a).map_err(|e| e.to_string())?;
    ensure(max_diff(&d, &[e22, e11, e22, e11]) <= 1e-10, || {
        format!("O2 diagonal {d:?}")
    })?;

    let o12_parts = [e, f];
    let a = analyzer_unitary(&o12_parts, RowOrdering::ReversedLex).unwrap();
    let d = verify_eigenbasis(&tensor_observable(&o12_parts).unwrap(), &a).map_err(|e| e.to_string())?;
    ensure(
        max_diff(&d, &[e22 * e22, e22 * e11, e11 * e22, e11 * e11]) <= 1e-10,
        || format!("O12 diagonal {d:?}"),
    )?;

    let l3 = [2.0, -3.0, 5.0];
    let parts = [
        labelled(ObservableSpec::standard(3), &l3),
        labelled(ObservableSpec::in_plane(3, (1, 2), FRAC_PI_4).unwrap(), &l3),
        labelled(ObservableSpec::in_plane(3, (2, 3), FRAC_PI_4).unwrap(), &l3),
    ];
    let a = analyzer_unitary(&parts, RowOrdering::ReversedLex).unwrap();
    let d = verify_eigenbasis(&tensor_observable(&parts).unwrap(), &a).map_err(|e| e.to_string())?;
    let expected: Vec<f64> = (0..27)
        .rev()
        .map(|n: usize| l3[n / 9] * l3[(n / 3) % 3] * l3[n % 3])
        .collect();
    ensure(max_diff(&d, &expected) <= 1e-10, || format!("O123 diagonal {d:?}"))?;
    Ok("O2, O12 and 27-dim O123 diagonalized with matching eigenvalues".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("parallel-analyzer singlet", parallel_singlet),
        ("rotated analyzer", rotated_analyzer),
        ("theta sweep", theta_sweep),
        ("two-qutrit prediction", qutrit_prediction),
        ("printed-matrix fidelity", printed_matrices),
        ("decomposition round trip", decomposition_round_trip),
        ("netlist equivalence", netlist_equivalence),
        ("two-port cell identities", device_identities),
        ("commutation", commutation),
        ("antisymmetry invariance", antisymmetry),
        ("context structure", context_structure),
        ("eigenbasis verification", eigenbasis),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
