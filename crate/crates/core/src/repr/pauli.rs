use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::base4_digits;
use crate::error::{domain, Error, Result};
use crate::operator::{DenseOperator, PauliString, HERMITIAN_TOL};

/// Entries with modulus below this are omitted from the JSON listing.
pub const JSON_ZERO_TOL: f64 = 1e-14;

/// `c_{a1..aN} = tr(rho sigma_a1 x ... x sigma_aN)`, indexed base 4 with the
/// first qubit most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliCoefficients {
    qubits: usize,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    n: usize,
    coeffs: BTreeMap<String, f64>,
}

pub fn pauli_coefficients(rho: &DenseOperator) -> Result<PauliCoefficients> {
    PauliCoefficients::from_operator(rho)
}

impl PauliCoefficients {
    pub fn from_operator(rho: &DenseOperator) -> Result<Self> {
        let residual = rho.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian(residual));
        }
        let qubits = rho.qubits();
        let coeffs = (0..1usize << (2 * qubits))
            .map(|flat| {
                let alphas = base4_digits(flat, qubits);
                PauliString::new(&alphas).expectation(rho.matrix()).re
            })
            .collect();
        Ok(Self { qubits, coeffs })
    }

    pub fn from_values(qubits: usize, coeffs: Vec<f64>) -> Result<Self> {
        if qubits == 0 || coeffs.len() != 1 << (2 * qubits) {
            return Err(domain(format!(
                "{} Pauli coefficients do not fit {qubits} qubits",
                coeffs.len()
            )));
        }
        Ok(Self { qubits, coeffs })
    }

    /// All-zero coefficients except `c_{0..0} = 1` (the maximally mixed state).
    pub fn maximally_mixed(qubits: usize) -> Self {
        let mut coeffs = vec![0.0; 1 << (2 * qubits)];
        coeffs[0] = 1.0;
        Self { qubits, coeffs }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn flat_index(&self, alphas: &[usize]) -> Result<usize> {
        if alphas.len() != self.qubits || alphas.iter().any(|&a| a > 3) {
            return Err(domain(format!("invalid Pauli index {alphas:?}")));
        }
        Ok(alphas.iter().fold(0, |acc, &a| acc * 4 + a))
    }

    pub fn get(&self, alphas: &[usize]) -> Result<f64> {
        Ok(self.coeffs[self.flat_index(alphas)?])
    }

    /// Looks up a coefficient by its digit label, e.g. `"0330"`.
    pub fn get_label(&self, label: &str) -> Result<f64> {
        self.get(&parse_label(label)?)
    }

    pub fn set(&mut self, alphas: &[usize], value: f64) -> Result<()> {
        let i = self.flat_index(alphas)?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// `(1/2^N) sum c sigma x ... x sigma`
    pub fn to_operator(&self) -> DenseOperator {
        let dim = 1usize << self.qubits;
        let mut m = DMatrix::zeros(dim, dim);
        let scale = 1.0 / dim as f64;
        for (flat, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let alphas = base4_digits(flat, self.qubits);
                PauliString::new(&alphas).accumulate(&mut m, c * scale);
            }
        }
        DenseOperator::from_matrix(m).expect("2^N x 2^N")
    }

    /// Nonzero coefficients keyed by digit label.
    pub fn nonzeros(&self, tol: f64) -> BTreeMap<String, f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(flat, &c)| (label(&base4_digits(flat, self.qubits)), c))
            .collect()
    }

    /// `{"n": N, "coeffs": {"a1..aN": value, ...}}`, nonzeros only.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PauliJson {
            n: self.qubits,
            coeffs: self.nonzeros(JSON_ZERO_TOL),
        })
        .expect("plain map serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: PauliJson = serde_json::from_str(s)?;
        if parsed.n == 0 || parsed.n > 12 {
            return Err(domain(format!("unsupported qubit count {}", parsed.n)));
        }
        let mut out = Self {
            qubits: parsed.n,
            coeffs: vec![0.0; 1 << (2 * parsed.n)],
        };
        for (key, value) in parsed.coeffs {
            out.set(&parse_label(&key)?, value)?;
        }
        Ok(out)
    }
}

fn label(alphas: &[usize]) -> String {
    alphas.iter().map(|a| char::from(b'0' + *a as u8)).collect()
}

fn parse_label(label: &str) -> Result<Vec<usize>> {
    label
        .chars()
        .map(|ch| match ch.to_digit(10) {
            Some(d) if d <= 3 => Ok(d as usize),
            _ => Err(Error::Parse(format!("bad Pauli label {label:?}"))),
        })
        .collect()
}
