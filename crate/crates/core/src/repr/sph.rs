//! Spherical-harmonic form of product-state expansions.
//!
//! A representation `w(n_1..n_N) = sum a^{m_1..m_N}_{l_1..l_N} Y_{l_1}^{m_1} ... Y_{l_N}^{m_N}`
//! is determined by `rho` only through its `l <= 1` block; that block is the
//! canonical expansion function. Terms with some `l_i >= 2` (HOSH) change
//! the representation but not the represented operator.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{mode_product, reconstruct_from_function, PauliCoefficients, Quadrature};
use crate::error::{domain, Result};
use crate::operator::{pauli, tensor, BlochVector, DenseOperator};

/// Per-qubit ordering of the `l <= 1` harmonics in [`SphCoefficients`].
pub const L1_HARMONICS: [(usize, i64); 4] = [(0, 0), (1, -1), (1, 0), (1, 1)];

const REALITY_TOL: f64 = 1e-12;

/// `Y_l^m(theta, phi)` with the Condon-Shortley phase.
pub fn spherical_harmonic(l: usize, m: i64, n: &BlochVector) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let r = n.norm();
    let x = (n.z / r).clamp(-1.0, 1.0);
    let phi = n.y.atan2(n.x);
    let plm = assoc_legendre(l, am, x);
    // sqrt((2l+1)/4pi * (l-m)!/(l+m)!)
    let mut ratio = 1.0;
    for k in (l - am + 1)..=(l + am) {
        ratio /= k as f64;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    let y = Complex64::from_polar(norm * plm, am as f64 * phi);
    if m >= 0 {
        y
    } else if am.is_multiple_of(2) {
        y.conj()
    } else {
        -y.conj()
    }
}

/// `P_l^m(x)` for `m >= 0`, including the `(-1)^m` Condon-Shortley factor.
fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= -((2 * k + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = pll;
    }
    pll
}

/// Operator harmonics `sigma_0^0 = sqrt(4pi) 1`, `sigma_1^0 = sqrt(4pi/3) sigma_3`,
/// `sigma_1^{+-1} = -+ sqrt(2pi/3) (sigma_1 +- i sigma_2)`.
pub fn sigma_harmonic(l: usize, m: i64) -> Result<DenseOperator> {
    let s1 = pauli(1)?.into_matrix();
    let s2 = pauli(2)?.into_matrix();
    let i = Complex64::new(0.0, 1.0);
    let m = match (l, m) {
        (0, 0) => pauli(0)?.into_matrix().map(|z| z * (4.0 * PI).sqrt()),
        (1, 0) => pauli(3)?.into_matrix().map(|z| z * (4.0 * PI / 3.0).sqrt()),
        (1, 1) => (s1 + s2.map(|z| z * i)).map(|z| z * -(2.0 * PI / 3.0).sqrt()),
        (1, -1) => (s1 - s2.map(|z| z * i)).map(|z| z * (2.0 * PI / 3.0).sqrt()),
        _ => {
            return Err(domain(format!(
                "operator harmonic ({l}, {m}) is not defined for l > 1"
            )))
        }
    };
    DenseOperator::from_matrix(m)
}

/// One product-harmonic term `coeff * Y_{l_1}^{m_1} ... Y_{l_N}^{m_N}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoshTerm {
    pub harmonics: Vec<(usize, i64)>,
    pub coeff: Complex64,
}

impl HoshTerm {
    pub fn new(harmonics: Vec<(usize, i64)>, coeff: Complex64) -> Self {
        Self { harmonics, coeff }
    }

    /// The term that makes `self + partner` real:
    /// `Y_l^{-m} = (-1)^m conj(Y_l^m)` on every factor.
    pub fn partner(&self) -> Self {
        let sign: i64 = self.harmonics.iter().map(|&(_, m)| m).sum();
        let c = self.coeff.conj();
        Self {
            harmonics: self.harmonics.iter().map(|&(l, m)| (l, -m)).collect(),
            coeff: if sign.rem_euclid(2) == 0 { c } else { -c },
        }
    }

    /// `self` plus its partner, collapsed to one real term when the term is
    /// its own partner.
    pub fn real_pair(harmonics: Vec<(usize, i64)>, coeff: Complex64) -> Vec<Self> {
        let term = Self::new(harmonics, coeff);
        let partner = term.partner();
        if partner.harmonics == term.harmonics {
            vec![Self::new(term.harmonics, Complex64::new(coeff.re, 0.0))]
        } else {
            vec![term, partner]
        }
    }

    fn evaluate(&self, ns: &[BlochVector]) -> Complex64 {
        self.harmonics
            .iter()
            .zip(ns)
            .fold(self.coeff, |acc, (&(l, m), n)| {
                acc * spherical_harmonic(l, m, n)
            })
    }
}

/// The canonical `l <= 1` block (dense, `4^N` entries in [`L1_HARMONICS`]
/// order per qubit) plus any added HOSH terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SphCoefficients {
    qubits: usize,
    canonical: Vec<Complex64>,
    hosh: Vec<HoshTerm>,
}

/// Expansion coefficients of each Pauli slot `(1/4pi, 3x/4pi, 3y/4pi, 3z/4pi)`
/// over the `l <= 1` harmonics; rows follow [`L1_HARMONICS`].
fn slot_to_harmonics() -> Vec<Vec<Complex64>> {
    let k = (3.0 / (8.0 * PI)).sqrt();
    let z = Complex64::new(0.0, 0.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    vec![
        vec![r(1.0 / (4.0 * PI).sqrt()), z, z, z],
        vec![z, r(k), i(k), z],
        vec![z, z, z, r((3.0 / (4.0 * PI)).sqrt())],
        vec![z, r(-k), i(k), z],
    ]
}

pub fn sph_coefficients(c: &PauliCoefficients) -> SphCoefficients {
    let n = c.qubits();
    let mut data: Vec<Complex64> = c
        .as_slice()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    let mut dims = vec![4; n];
    let m = slot_to_harmonics();
    for axis in 0..n {
        data = mode_product(&data, &mut dims, axis, &m);
    }
    SphCoefficients {
        qubits: n,
        canonical: data,
        hosh: Vec::new(),
    }
}

/// Adds higher-order terms to a representation. Every term must carry at
/// least one `l >= 2` factor, and the set must be closed under the
/// conjugation that keeps `w` real.
pub fn add_hosh(base: &SphCoefficients, extra: Vec<HoshTerm>) -> Result<SphCoefficients> {
    let mut merged: BTreeMap<Vec<(usize, i64)>, Complex64> = BTreeMap::new();
    for t in base.hosh.iter().chain(&extra) {
        if t.harmonics.len() != base.qubits {
            return Err(domain(format!(
                "term {:?} has {} factors for {} qubits",
                t.harmonics,
                t.harmonics.len(),
                base.qubits
            )));
        }
        if t.harmonics
            .iter()
            .any(|&(l, m)| m.unsigned_abs() as usize > l)
        {
            return Err(domain(format!("term {:?} has |m| > l", t.harmonics)));
        }
        if t.harmonics.iter().all(|&(l, _)| l <= 1) {
            return Err(domain(format!(
                "term {:?} lies in the l <= 1 block and would change the represented operator",
                t.harmonics
            )));
        }
        *merged.entry(t.harmonics.clone()).or_default() += t.coeff;
    }
    for (key, &coeff) in &merged {
        let partner = HoshTerm::new(key.clone(), coeff).partner();
        let found = merged.get(&partner.harmonics).copied().unwrap_or_default();
        if (found - partner.coeff).norm() > REALITY_TOL * (1.0 + coeff.norm()) {
            return Err(domain(format!(
                "term {key:?} lacks its conjugate partner {:?} with coefficient {}",
                partner.harmonics, partner.coeff
            )));
        }
    }
    Ok(SphCoefficients {
        qubits: base.qubits,
        canonical: base.canonical.clone(),
        hosh: merged
            .into_iter()
            .map(|(harmonics, coeff)| HoshTerm { harmonics, coeff })
            .collect(),
    })
}

impl SphCoefficients {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn hosh_terms(&self) -> &[HoshTerm] {
        &self.hosh
    }

    pub fn canonical_block(&self) -> &[Complex64] {
        &self.canonical
    }

    /// Canonical coefficient for a tuple of `l <= 1` harmonics; zero for
    /// any tuple with `l >= 2`.
    pub fn canonical_coefficient(&self, harmonics: &[(usize, i64)]) -> Result<Complex64> {
        if harmonics.len() != self.qubits {
            return Err(domain("harmonic tuple length differs from qubit count"));
        }
        let mut flat = 0;
        for h in harmonics {
            match L1_HARMONICS.iter().position(|x| x == h) {
                Some(p) => flat = flat * 4 + p,
                None => return Ok(Complex64::new(0.0, 0.0)),
            }
        }
        Ok(self.canonical[flat])
    }

    /// Largest `l` appearing anywhere in the representation.
    pub fn max_degree(&self) -> usize {
        self.hosh
            .iter()
            .flat_map(|t| t.harmonics.iter().map(|&(l, _)| l))
            .max()
            .unwrap_or(1)
            .max(1)
    }

    pub fn evaluate_complex(&self, ns: &[BlochVector]) -> Result<Complex64> {
        if ns.len() != self.qubits {
            return Err(domain("Bloch vector count differs from qubit count"));
        }
        let mut data = self.canonical.clone();
        for n in ns {
            let y: Vec<Complex64> = L1_HARMONICS
                .iter()
                .map(|&(l, m)| spherical_harmonic(l, m, n))
                .collect();
            let stride = data.len() / 4;
            data = (0..stride)
                .map(|r| (0..4).map(|a| y[a] * data[a * stride + r]).sum())
                .collect();
        }
        Ok(data[0] + self.hosh.iter().map(|t| t.evaluate(ns)).sum::<Complex64>())
    }

    /// `w(n_1..n_N)`; real by construction.
    pub fn evaluate(&self, ns: &[BlochVector]) -> Result<f64> {
        Ok(self.evaluate_complex(ns)?.re)
    }

    /// `int w(n) P(n) dOmega` with a product rule exact to `max_degree + 1`.
    pub fn reconstruct(&self, quad: &Quadrature) -> Result<DenseOperator> {
        reconstruct_from_function(self.qubits, quad, self.max_degree() + 1, |ns| {
            self.evaluate(ns).expect("node count matches qubit count")
        })
    }

    /// `(1/2^N) sum a sigma_{l_1}^{m_1} x ... x sigma_{l_N}^{m_N}` over the
    /// canonical block.
    pub fn l1_operator(&self) -> Result<DenseOperator> {
        let ops: Vec<DenseOperator> = L1_HARMONICS
            .iter()
            .map(|&(l, m)| sigma_harmonic(l, m))
            .collect::<Result<_>>()?;
        let mut acc = DenseOperator::zeros(self.qubits);
        let mut acc_m = acc.matrix().clone();
        for (flat, a) in self.canonical.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let digits = super::base4_digits(flat, self.qubits);
            let factors: Vec<DenseOperator> = digits.iter().map(|&d| ops[d].clone()).collect();
            acc_m += tensor(&factors)?.matrix().map(|z| z * a);
        }
        acc = DenseOperator::from_matrix(acc_m.map(|z| z / (1usize << self.qubits) as f64))?;
        Ok(acc)
    }
}
