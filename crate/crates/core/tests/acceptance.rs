//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qsep::frames::{reflect_octant, Superoperator};
use qsep::operator::pauli;
use qsep::repr::{
    add_hosh, pauli_coefficients, reconstruct_continuous, reconstruct_discrete, sph_coefficients,
    wcan_discrete, HoshTerm, Quadrature,
};
use qsep::separability::{
    ppt_min_eigenvalue, witness_ghz, witness_werner, WitnessReport, WitnessVerdict,
};
use qsep::states::{ensemble_to_table, ghz_ensemble, werner_ensemble};
use qsep::{build_state, DenseOperator, Frame, FrameKind, StateSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{nelder_mead, random_density, random_pure, random_unit};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn qsep_bin(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qsep"))
        .args(args)
        .output()
        .expect("run qsep");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "qsep {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (String::from_utf8(out.stdout).unwrap(), elapsed)
}

fn dual_basis_regression() -> Outcome {
    let start = Instant::now();
    let frame = Frame::cardinal6();
    let elapsed = start.elapsed();
    let id = pauli(0).unwrap();
    let mut worst: f64 = 0.0;
    for j in 1..=3 {
        for mu in 0..2 {
            let sign = if mu == 0 { 3.0 } else { -3.0 };
            let mut expected = id.scaled(1.0 / 6.0);
            expected.add_scaled(sign / 6.0, &pauli(j).unwrap()).unwrap();
            worst = worst.max(
                frame.duals()[2 * (j - 1) + mu]
                    .max_abs_diff(&expected)
                    .unwrap(),
            );
        }
    }
    check(
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("max entry error {worst:.2e}, {elapsed:?}"),
    )
}

fn resolution_of_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut frames = vec![
        Frame::cardinal6(),
        Frame::polyhedron(FrameKind::Tetrahedron).unwrap(),
        Frame::polyhedron(FrameKind::Icosahedron).unwrap(),
    ];
    for _ in 0..10 {
        let s = rng.gen_range(1..=3);
        let seed: Vec<_> = (0..s)
            .map(|_| {
                let v = random_unit(&mut rng);
                qsep::BlochVector::new(
                    v.x.abs().max(1e-3),
                    v.y.abs().max(1e-3),
                    v.z.abs().max(1e-3),
                )
                .normalized()
            })
            .collect();
        assert_eq!(reflect_octant(&seed).unwrap().len(), 8 * s);
        frames.push(Frame::reflected(&seed).unwrap());
    }
    let id = Superoperator::identity(2);
    let worst = frames
        .iter()
        .map(|f| {
            f.resolution_pq()
                .frobenius_distance(&id)
                .max(f.resolution_qp().frobenius_distance(&id))
        })
        .fold(0.0, f64::max);
    check(
        worst < 1e-10,
        format!("{} frames, max residual {worst:.2e}", frames.len()),
    )
}

fn reconstruction_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let oct = Quadrature::octahedron();
    let (mut discrete, mut continuous): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let n = 1 + i % 3;
        let rho = random_density(&mut rng, n);
        let table = wcan_discrete(&rho, &vec![Frame::cardinal6(); n]).unwrap();
        discrete = discrete.max(reconstruct_discrete(&table).max_abs_diff(&rho).unwrap());
        let back = reconstruct_continuous(&pauli_coefficients(&rho).unwrap(), &oct).unwrap();
        continuous = continuous.max(back.max_abs_diff(&rho).unwrap());
    }
    check(
        discrete < 1e-10 && continuous < 1e-12,
        format!("discrete {discrete:.2e}, octahedron quadrature {continuous:.2e}"),
    )
}

fn min_cardinal_entry(rho: &DenseOperator) -> f64 {
    wcan_discrete(rho, &[Frame::cardinal6(), Frame::cardinal6()])
        .unwrap()
        .min()
}

fn pure_from_params(p: &[f64]) -> DenseOperator {
    let psi: Vec<Complex64> = p.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
    DenseOperator::projector_onto(&psi).unwrap()
}

fn eigenvalue_bound() -> Outcome {
    let bound = -2.0 / 9.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sampled = f64::INFINITY;
    for i in 0..500 {
        let rho = if i % 2 == 0 {
            random_density(&mut rng, 2)
        } else {
            random_pure(&mut rng, 2)
        };
        sampled = sampled.min(min_cardinal_entry(&rho));
    }
    let mut found = f64::INFINITY;
    for _ in 0..8 {
        let start: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (mut x, mut v) = nelder_mead(
            |p| min_cardinal_entry(&pure_from_params(p)),
            &start,
            0.3,
            4000,
        );
        for _ in 0..3 {
            (x, v) = nelder_mead(|p| min_cardinal_entry(&pure_from_params(p)), &x, 1e-3, 4000);
        }
        found = found.min(v);
    }
    check(
        sampled >= bound - 1e-12 && found >= bound - 1e-12 && (found - bound).abs() < 1e-9,
        format!("sampled min {sampled:.6}, searched min {found:.12} vs -2/9"),
    )
}

fn bound_table() -> Outcome {
    let (exact, _) = qsep_bin(&["bounds", "--n-min", "1", "--n-max", "6", "--exact"]);
    let expected = "N,general,cat,duer\n1,1/3,,1\n2,1/9,1/9,1/3\n3,1/33,1/27,1/5\n4,1/129,1/81,1/9\n5,1/513,1/243,1/17\n6,1/2049,1/1089,1/33\n";
    let (decimal, _) = qsep_bin(&["bounds", "--n-min", "1", "--n-max", "6"]);
    let mut worst: f64 = 0.0;
    for (row_e, row_d) in exact.lines().zip(decimal.lines()).skip(1) {
        for (e, d) in row_e.split(',').zip(row_d.split(',')).skip(1) {
            if e.is_empty() {
                continue;
            }
            let (num, den) = e.split_once('/').unwrap_or((e, "1"));
            let exact_value = num.parse::<f64>().unwrap() / den.parse::<f64>().unwrap();
            worst = worst.max((d.parse::<f64>().unwrap() - exact_value).abs());
        }
    }
    check(
        exact == expected && worst < 1e-15,
        format!(
            "exact rows match: {}, decimal error {worst:.1e}",
            exact == expected
        ),
    )
}

fn cat_thresholds() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let state = format!(r#"{{"family":"eps_cat","n":{n},"epsilon":0.5}}"#);
        let (out, elapsed) = qsep_bin(&[
            "min-wcan",
            "--state",
            &state,
            "--grid",
            "48",
            "--refine",
            "3",
            "--threshold-search",
            "--format",
            "json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let eps = v["threshold"]["epsilon"].as_f64().unwrap();
        let err = (eps - 3f64.powi(-n)).abs();
        ok &= err < 1e-6 && elapsed < Duration::from_secs(60);
        details.push(format!(
            "N={n}: {eps:.9} (err {err:.1e}, {:.1}s)",
            elapsed.as_secs_f64()
        ));
    }
    check(ok, details.join("; "))
}

fn ensemble_verification() -> Outcome {
    let ghz = ghz_ensemble()
        .mixture()
        .max_abs_diff(&build_state(&StateSpec::eps_ghz(0.2)).unwrap())
        .unwrap();
    let werner = werner_ensemble()
        .mixture()
        .max_abs_diff(&build_state(&StateSpec::werner(1.0 / 3.0)).unwrap())
        .unwrap();
    check(
        ghz < 1e-14 && werner < 1e-14,
        format!("ghz {ghz:.1e}, werner {werner:.1e}"),
    )
}

fn flip_point(report: impl Fn(f64) -> WitnessReport) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    assert_eq!(report(lo).verdict, WitnessVerdict::Inconclusive);
    assert_eq!(report(hi).verdict, WitnessVerdict::Nonseparable);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if report(mid).verdict == WitnessVerdict::Nonseparable {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn witness_thresholds() -> Outcome {
    let coeffs = |s: StateSpec| pauli_coefficients(&build_state(&s).unwrap()).unwrap();
    let ghz = flip_point(|e| witness_ghz(&coeffs(StateSpec::eps_ghz(e))).unwrap());
    let werner = flip_point(|e| witness_werner(&coeffs(StateSpec::werner(e))).unwrap());
    let ppt = (0..=10)
        .map(|k| {
            let e = k as f64 / 10.0;
            let rho = build_state(&StateSpec::werner(e)).unwrap();
            (ppt_min_eigenvalue(&rho, 1).unwrap() - (1.0 - 3.0 * e) / 4.0).abs()
        })
        .fold(0.0, f64::max);
    let (eg, ew) = ((ghz - 0.2).abs(), (werner - 1.0 / 3.0).abs());
    check(
        eg < 1e-9 && ew < 1e-9 && ppt < 1e-12,
        format!("ghz flip {ghz:.12}, werner flip {werner:.12}, ppt error {ppt:.1e}"),
    )
}

fn canonical_vs_optimal() -> Outcome {
    let oct = vec![Frame::polyhedron(FrameKind::Octahedron).unwrap(); 3];
    let canonical = wcan_discrete(&build_state(&StateSpec::eps_ghz(0.2)).unwrap(), &oct)
        .unwrap()
        .min();
    let optimal = ensemble_to_table(&ghz_ensemble(), &oct).unwrap().min();
    check(
        canonical < -1e-6 && optimal >= 0.0,
        format!("canonical min {canonical:.6}, ensemble table min {optimal}"),
    )
}

/// `count` random real terms, each a harmonic product with at least one
/// `l in {2, 3}` factor plus its conjugate partner.
fn random_hosh_terms<R: Rng>(rng: &mut R, qubits: usize, count: usize) -> Vec<HoshTerm> {
    (0..count)
        .flat_map(|_| {
            let high = rng.gen_range(0..qubits);
            let harmonics: Vec<(usize, i64)> = (0..qubits)
                .map(|q| {
                    let l = if q == high {
                        rng.gen_range(2..=3)
                    } else {
                        rng.gen_range(0..=3)
                    };
                    (l, rng.gen_range(-(l as i64)..=l as i64))
                })
                .collect();
            let coeff = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            HoshTerm::real_pair(harmonics, coeff)
        })
        .collect()
}

fn hosh_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ico = Quadrature::icosahedron();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = 1 + i % 2;
        let rho = random_density(&mut rng, n);
        let base = sph_coefficients(&pauli_coefficients(&rho).unwrap());
        let before = base.reconstruct(&ico).unwrap();
        let h = add_hosh(&base, random_hosh_terms(&mut rng, n, 20)).unwrap();
        let after = h.reconstruct(&ico).unwrap();
        worst = worst.max(after.max_abs_diff(&before).unwrap());
        worst = worst.max(after.max_abs_diff(&rho).unwrap());
    }
    check(
        worst < 1e-10,
        format!("max reconstruction change {worst:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("dual basis regression", dual_basis_regression),
        ("resolution of identity", resolution_of_identity),
        ("reconstruction roundtrip", reconstruction_roundtrip),
        ("eigenvalue bound", eigenvalue_bound),
        ("bound table", bound_table),
        ("eps-cat thresholds by search", cat_thresholds),
        ("ensemble verification", ensemble_verification),
        ("witness thresholds", witness_thresholds),
        ("canonical vs optimal gap", canonical_vs_optimal),
        ("hosh invariance", hosh_invariance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match std::panic::catch_unwind(f) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(_) => ("FAIL", "panicked".to_owned()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {tag}: {name} ({detail})", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
