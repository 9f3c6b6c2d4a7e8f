//! Separability certificates from nonnegative product representations, and
//! nonseparability witnesses from correlation inequalities.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::operator::{min_eigenvalue, DenseOperator};
use crate::repr::{reconstruct_discrete, CoefficientTable, PauliCoefficients};
use crate::states::ProductEnsemble;

pub const RECONSTRUCTION_TOL: f64 = 1e-10;
pub const COEFFICIENT_TOL: f64 = 1e-12;
pub const WITNESS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    Separable,
    /// The representation has negative weights, which proves nothing.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityCertificate {
    pub verdict: CertificateVerdict,
    pub min_coefficient: f64,
    /// Max entrywise deviation of the reconstruction from the target.
    pub deviation: f64,
    pub terms: usize,
}

fn finish(
    rho: &DenseOperator,
    back: &DenseOperator,
    min: f64,
    terms: usize,
) -> Result<SeparabilityCertificate> {
    let deviation = back.max_abs_diff(rho)?;
    if deviation.is_nan() || deviation > RECONSTRUCTION_TOL {
        return Err(Error::CertificateInvalid { deviation });
    }
    let verdict = if min >= -COEFFICIENT_TOL {
        CertificateVerdict::Separable
    } else {
        CertificateVerdict::Undetermined
    };
    Ok(SeparabilityCertificate {
        verdict,
        min_coefficient: min,
        deviation,
        terms,
    })
}

/// Checks that a discrete table reconstructs `rho` and reports whether its
/// weights form a probability distribution. Continuous tables are rejected:
/// finitely many evaluations cannot bound their minimum.
pub fn certify(rho: &DenseOperator, table: &CoefficientTable) -> Result<SeparabilityCertificate> {
    let t = table
        .as_discrete()
        .ok_or_else(|| domain("only discrete tables and explicit ensembles can be certified"))?;
    if t.qubits() != rho.qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.qubits(),
            found: t.qubits(),
        });
    }
    finish(rho, &reconstruct_discrete(t), t.min(), t.len())
}

pub fn certify_ensemble(
    rho: &DenseOperator,
    e: &ProductEnsemble,
) -> Result<SeparabilityCertificate> {
    e.validate()?;
    if e.qubits() != rho.qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.qubits(),
            found: e.qubits(),
        });
    }
    let min = e
        .terms()
        .iter()
        .map(|t| t.probability)
        .fold(f64::INFINITY, f64::min);
    finish(rho, &e.mixture(), min, e.terms().len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessVerdict {
    Nonseparable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub witness: String,
    pub value: f64,
    pub threshold: f64,
    pub verdict: WitnessVerdict,
    /// Pauli correlations entering the value.
    pub detail: BTreeMap<String, f64>,
}

impl WitnessReport {
    fn new(witness: &str, value: f64, threshold: f64, detail: BTreeMap<String, f64>) -> Self {
        let verdict = if value > threshold + WITNESS_TOL {
            WitnessVerdict::Nonseparable
        } else {
            WitnessVerdict::Inconclusive
        };
        Self {
            witness: witness.into(),
            value,
            threshold,
            verdict,
            detail,
        }
    }
}

fn require_qubits(c: &PauliCoefficients, n: usize, name: &str) -> Result<()> {
    if c.qubits() != n {
        return Err(domain(format!(
            "{name} witness needs {n} qubits, got {}",
            c.qubits()
        )));
    }
    Ok(())
}

/// `|c_11| + |c_22| + |c_33|`, at most 1 for any two-qubit separable state.
pub fn witness_werner(c: &PauliCoefficients) -> Result<WitnessReport> {
    require_qubits(c, 2, "werner")?;
    let mut detail = BTreeMap::new();
    let mut value = 0.0;
    for label in ["11", "22", "33"] {
        let v = c.get_label(label)?;
        value += v.abs();
        detail.insert(label.to_owned(), v);
    }
    Ok(WitnessReport::new("werner", value, 1.0, detail))
}

/// `|c_111 - c_122 - c_212 - c_221 + c_330|`: the expectation of
/// `n_A . N(n_B, n_C)` with `|N| <= 1` on product states, so at most 1 for
/// any three-qubit separable state.
pub fn witness_ghz(c: &PauliCoefficients) -> Result<WitnessReport> {
    require_qubits(c, 3, "ghz")?;
    let mut detail = BTreeMap::new();
    let mut value = 0.0;
    for (label, sign) in [
        ("111", 1.0),
        ("122", -1.0),
        ("212", -1.0),
        ("221", -1.0),
        ("330", 1.0),
    ] {
        let v = c.get_label(label)?;
        value += sign * v;
        detail.insert(label.to_owned(), v);
    }
    Ok(WitnessReport::new("ghz", value.abs(), 1.0, detail))
}

/// Smallest eigenvalue of the two-qubit partial transpose on `side`.
pub fn ppt_min_eigenvalue(rho: &DenseOperator, side: usize) -> Result<f64> {
    if rho.qubits() != 2 {
        return Err(domain(format!(
            "partial transpose test needs 2 qubits, got {}",
            rho.qubits()
        )));
    }
    if side > 1 {
        return Err(domain(format!(
            "transposed side must be 0 or 1, got {side}"
        )));
    }
    min_eigenvalue(&rho.partial_transpose(side)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::Frame;
    use crate::operator::BlochVector;
    use crate::repr::{pauli_coefficients, wcan_discrete, DiscreteTable};
    use crate::states::{build_state, ghz_ensemble, StateSpec};

    fn coeffs(spec: StateSpec) -> PauliCoefficients {
        pauli_coefficients(&build_state(&spec).unwrap()).unwrap()
    }

    #[test]
    fn witness_examples() {
        let r = witness_werner(&coeffs(StateSpec::werner(0.5))).unwrap();
        assert!((r.value - 1.5).abs() < 1e-14 && r.verdict == WitnessVerdict::Nonseparable);
        let r = witness_werner(&coeffs(StateSpec::werner(1.0 / 3.0))).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14 && r.verdict == WitnessVerdict::Inconclusive);
        assert_eq!(
            witness_werner(&PauliCoefficients::maximally_mixed(2))
                .unwrap()
                .value,
            0.0
        );
        let r = witness_ghz(&coeffs(StateSpec::eps_ghz(0.3))).unwrap();
        assert!((r.value - 1.5).abs() < 1e-14 && r.verdict == WitnessVerdict::Nonseparable);
        let r = witness_ghz(&coeffs(StateSpec::eps_ghz(0.2))).unwrap();
        assert_eq!(r.verdict, WitnessVerdict::Inconclusive);
        assert!(witness_ghz(&PauliCoefficients::maximally_mixed(2)).is_err());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["witness"], "ghz");
        assert_eq!(json["verdict"], "inconclusive");
    }

    #[test]
    fn ppt_examples() {
        let mm = DenseOperator::maximally_mixed(2);
        assert!((ppt_min_eigenvalue(&mm, 0).unwrap() - 0.25).abs() < 1e-15);
        let up = BlochVector::PLUS_Z.projector();
        let p = crate::operator::tensor(&[up.clone(), up]).unwrap();
        assert!(ppt_min_eigenvalue(&p, 1).unwrap().abs() < 1e-15);
        let w = build_state(&StateSpec::werner(0.7)).unwrap();
        assert!((ppt_min_eigenvalue(&w, 0).unwrap() - (1.0 - 2.1) / 4.0).abs() < 1e-14);
        assert!(ppt_min_eigenvalue(&DenseOperator::maximally_mixed(3), 0).is_err());
    }

    #[test]
    fn certificates() {
        let rho = build_state(&StateSpec::eps_ghz(0.2)).unwrap();
        let c = certify_ensemble(&rho, &ghz_ensemble()).unwrap();
        assert_eq!(c.verdict, CertificateVerdict::Separable);
        let frames = vec![Frame::cardinal6(); 3];
        let rho = build_state(&StateSpec::eps_ghz(0.15)).unwrap();
        let t = CoefficientTable::Discrete(wcan_discrete(&rho, &frames).unwrap());
        assert_eq!(
            certify(&rho, &t).unwrap().verdict,
            CertificateVerdict::Undetermined
        );
        let rho = build_state(&StateSpec::eps_cat(3, 1.0 / 33.0)).unwrap();
        let t = CoefficientTable::Discrete(wcan_discrete(&rho, &frames).unwrap());
        assert_eq!(
            certify(&rho, &t).unwrap().verdict,
            CertificateVerdict::Separable
        );
        let wrong = build_state(&StateSpec::eps_cat(3, 0.5)).unwrap();
        assert!(matches!(
            certify(&wrong, &t),
            Err(Error::CertificateInvalid { .. })
        ));
        let zeros = CoefficientTable::Discrete(DiscreteTable::zeros(frames).unwrap());
        assert!(certify(&rho, &zeros).is_err());
        assert!(certify(
            &rho,
            &CoefficientTable::Continuous(pauli_coefficients(&rho).unwrap())
        )
        .is_err());
    }
}
