//! Dense complex operator algebra on N-qubit Hilbert spaces.
//!
//! Qubit ordering is big-endian throughout the crate: qubit 0 is the most
//! significant bit of a computational-basis index, and the first factor of a
//! tensor product is the outermost block.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A square complex matrix acting on `qubits` qubits (`dim = 2^qubits`).
#[derive(Clone, PartialEq)]
pub struct DenseOperator {
    qubits: usize,
    data: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        let dim = data.nrows();
        if data.ncols() != dim {
            return Err(domain(format!(
                "operator must be square, got {}x{}",
                dim,
                data.ncols()
            )));
        }
        if dim < 2 || !dim.is_power_of_two() {
            return Err(domain(format!(
                "operator dimension {dim} is not 2^N with N >= 1"
            )));
        }
        Ok(Self {
            qubits: dim.trailing_zeros() as usize,
            data,
        })
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(domain(
                "operator rows must all have length equal to the row count",
            ));
        }
        Self::from_matrix(DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
    }

    pub fn identity(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self {
            qubits,
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self {
            qubits,
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// The maximally mixed state `1 / 2^N`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = (1usize << qubits) as f64;
        Self::identity(qubits).scaled(1.0 / dim)
    }

    /// `|psi><psi|` for a state vector of length `2^N`.
    pub fn projector_onto(state: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(state);
        Self::from_matrix(&v * v.adjoint())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            qubits: self.qubits,
            data: self.data.adjoint(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            qubits: self.qubits,
            data: self.data.map(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            qubits: self.qubits,
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            qubits: self.qubits,
            data: &self.data - &other.data,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            qubits: self.qubits,
            data: &self.data * &other.data,
        })
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, factor: f64, other: &Self) -> Result<()> {
        self.check_same_dim(other)?;
        self.data.zip_apply(&other.data, |a, b| *a += b * factor);
        Ok(())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `A - A^dagger`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.data[(r, c)] - self.data[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Partial transpose on one qubit (0 = most significant).
    pub fn partial_transpose(&self, qubit: usize) -> Result<Self> {
        if qubit >= self.qubits {
            return Err(domain(format!(
                "qubit index {qubit} out of range for a {}-qubit operator",
                self.qubits
            )));
        }
        let mask = 1usize << (self.qubits - 1 - qubit);
        let n = self.dim();
        let data = DMatrix::from_fn(n, n, |r, c| {
            // swap the chosen qubit's bit between row and column
            let (rb, cb) = (r & mask, c & mask);
            let r2 = (r & !mask) | cb;
            let c2 = (c & !mask) | rb;
            self.data[(r2, c2)]
        });
        Ok(Self {
            qubits: self.qubits,
            data,
        })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseOperator({} qubits){}", self.qubits, self.data)
    }
}

/// A real 3-vector on (or near) the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        v.to_array()
    }
}

impl BlochVector {
    pub const PLUS_X: Self = Self::new(1.0, 0.0, 0.0);
    pub const MINUS_X: Self = Self::new(-1.0, 0.0, 0.0);
    pub const PLUS_Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const MINUS_Y: Self = Self::new(0.0, -1.0, 0.0);
    pub const PLUS_Z: Self = Self::new(0.0, 0.0, 1.0);
    pub const MINUS_Z: Self = Self::new(0.0, 0.0, -1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector at polar angle `theta` (from +z) and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    /// `(theta, phi)` with `theta` in `[0, pi]` and `phi` in `(-pi, pi]`.
    pub fn angles(&self) -> (f64, f64) {
        let r = self.norm();
        let theta = (self.z / r).clamp(-1.0, 1.0).acos();
        (theta, self.y.atan2(self.x))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Component `j` in `1..=3`; index 0 returns 1 so Pauli-style index
    /// sums can treat the identity uniformly.
    pub fn component(&self, j: usize) -> f64 {
        match j {
            0 => 1.0,
            1 => self.x,
            2 => self.y,
            3 => self.z,
            _ => panic!("Bloch component index {j} out of range"),
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let r = self.norm();
        Self::new(self.x / r, self.y / r, self.z / r)
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let d = Self::new(self.x - other.x, self.y - other.y, self.z - other.z);
        d.norm()
    }

    pub fn flipped(&self, sx: bool, sy: bool, sz: bool) -> Self {
        let s = |b: bool| if b { -1.0 } else { 1.0 };
        Self::new(s(sx) * self.x, s(sy) * self.y, s(sz) * self.z)
    }

    /// `sigma . n`
    pub fn sigma_dot(&self) -> DenseOperator {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(self.z, 0.0),
                Complex64::new(self.x, -self.y),
                Complex64::new(self.x, self.y),
                Complex64::new(-self.z, 0.0),
            ],
        );
        DenseOperator { qubits: 1, data: m }
    }

    /// Pure-state projector `(1 + sigma . n) / 2`.
    pub fn projector(&self) -> DenseOperator {
        let s = self.sigma_dot();
        DenseOperator {
            qubits: 1,
            data: (DMatrix::identity(2, 2) + s.data).map(|z| z * 0.5),
        }
    }

    pub(crate) fn require_unit(&self, tol: f64) -> Result<()> {
        if self.is_unit(tol) {
            Ok(())
        } else {
            Err(domain(format!(
                "vector ({}, {}, {}) is not a unit vector (norm {})",
                self.x,
                self.y,
                self.z,
                self.norm()
            )))
        }
    }
}

/// Pauli operator `sigma_index`; index 0 is the identity.
pub fn pauli(index: usize) -> Result<DenseOperator> {
    let entries = match index {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => return Err(domain(format!("Pauli index {index} not in 0..=3"))),
    };
    Ok(DenseOperator {
        qubits: 1,
        data: DMatrix::from_row_slice(2, 2, &entries),
    })
}

/// Kronecker product, first factor most significant.
pub fn tensor(factors: &[DenseOperator]) -> Result<DenseOperator> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| domain("tensor product of an empty list"))?;
    let mut acc = first.clone();
    for f in rest {
        acc = DenseOperator {
            qubits: acc.qubits + f.qubits,
            data: acc.data.kronecker(&f.data),
        };
    }
    Ok(acc)
}

/// `(A|B) = tr(A^dagger B)`
pub fn trace_inner(a: &DenseOperator, b: &DenseOperator) -> Result<Complex64> {
    a.check_same_dim(b)?;
    // sum_ij conj(A_ij) B_ij
    Ok(a.data
        .iter()
        .zip(b.data.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn hermitian_eigenvalues(a: &DenseOperator) -> Result<Vec<f64>> {
    let residual = a.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    // symmetrize away the residual before handing it to the solver
    let sym = (&a.data + a.data.adjoint()).map(|z| z * 0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn min_eigenvalue(a: &DenseOperator) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?[0])
}

/// Outcome of [`validate_density`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityVerdict {
    pub hermiticity_residual: f64,
    pub trace: Complex64,
    pub min_eigenvalue: Option<f64>,
    pub failure: Option<String>,
}

impl DensityVerdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn validate_density(a: &DenseOperator, tol: f64) -> DensityVerdict {
    let hermiticity_residual = a.hermiticity_residual();
    let trace = a.trace();
    let mut verdict = DensityVerdict {
        hermiticity_residual,
        trace,
        min_eigenvalue: None,
        failure: None,
    };
    if hermiticity_residual > tol {
        verdict.failure = Some(format!(
            "not Hermitian (residual {hermiticity_residual:.3e})"
        ));
        return verdict;
    }
    let sym = (&a.data + a.data.adjoint()).map(|z| z * 0.5);
    let min = sym
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    verdict.min_eigenvalue = Some(min);
    if (trace - ONE).norm() > tol {
        verdict.failure = Some(format!("trace is {} + {}i, not 1", trace.re, trace.im));
    } else if min < -tol {
        verdict.failure = Some(format!("negative eigenvalue {min:.3e}"));
    }
    verdict
}

/// Entry `P[r][c]` of a single-qubit Pauli, given the column bit; the row bit
/// is the column bit flipped iff the Pauli is X or Y.
#[inline]
fn pauli_entry(alpha: usize, col_bit: usize) -> Complex64 {
    match (alpha, col_bit) {
        (0, _) | (1, _) => ONE,
        (2, 0) => I,
        (2, _) => -I,
        (3, 0) => ONE,
        _ => -ONE,
    }
}

/// A Pauli string as a monomial matrix: column `c` maps to row `c ^ flip`.
pub(crate) struct PauliString<'a> {
    alphas: &'a [usize],
    flip: usize,
}

impl<'a> PauliString<'a> {
    pub(crate) fn new(alphas: &'a [usize]) -> Self {
        let n = alphas.len();
        let flip = alphas
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == 1 || a == 2)
            .fold(0, |m, (q, _)| m | (1 << (n - 1 - q)));
        Self { alphas, flip }
    }

    #[inline]
    fn entry(&self, col: usize) -> (usize, Complex64) {
        let n = self.alphas.len();
        let mut value = ONE;
        for (q, &a) in self.alphas.iter().enumerate() {
            if a != 0 {
                value *= pauli_entry(a, (col >> (n - 1 - q)) & 1);
            }
        }
        (col ^ self.flip, value)
    }

    /// `tr(rho * sigma)`
    pub(crate) fn expectation(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        (0..rho.nrows())
            .map(|c| {
                let (r, v) = self.entry(c);
                rho[(c, r)] * v
            })
            .sum()
    }

    /// `m += coeff * sigma`
    pub(crate) fn accumulate(&self, m: &mut DMatrix<Complex64>, coeff: f64) {
        for c in 0..m.ncols() {
            let (r, v) = self.entry(c);
            m[(r, c)] += v * coeff;
        }
    }
}
