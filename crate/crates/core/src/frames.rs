//! Single-qubit projector frames, their Gram superoperators, and dual operators.
//!
//! Operators are vectorized by column stacking, so a superoperator on
//! `D x D` operators is a `D^2 x D^2` matrix and `|A)(B|` is `vec(A) vec(B)^dagger`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::operator::{BlochVector, DenseOperator};

/// Relative eigenvalue cutoff below which a Gram superoperator is singular.
pub const GRAM_RANK_CUTOFF: f64 = 1e-10;

const UNIT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    op_dim: usize,
    matrix: DMatrix<Complex64>,
}

pub fn vectorize(a: &DenseOperator) -> DVector<Complex64> {
    // nalgebra storage is column-major, i.e. already column-stacked
    DVector::from_column_slice(a.matrix().as_slice())
}

pub fn unvectorize(v: &DVector<Complex64>, op_dim: usize) -> DenseOperator {
    DenseOperator::from_matrix(DMatrix::from_column_slice(op_dim, op_dim, v.as_slice()))
        .expect("superoperator dimension is a square of a power of two")
}

impl Superoperator {
    pub fn identity(op_dim: usize) -> Self {
        let n = op_dim * op_dim;
        Self {
            op_dim,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(op_dim: usize) -> Self {
        let n = op_dim * op_dim;
        Self {
            op_dim,
            matrix: DMatrix::zeros(n, n),
        }
    }

    /// `|a)(b|`
    pub fn outer(a: &DenseOperator, b: &DenseOperator) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Ok(Self {
            op_dim: a.dim(),
            matrix: vectorize(a) * vectorize(b).adjoint(),
        })
    }

    pub fn op_dim(&self) -> usize {
        self.op_dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, a: &DenseOperator) -> DenseOperator {
        unvectorize(&(&self.matrix * vectorize(a)), self.op_dim)
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.matrix += &other.matrix;
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Ascending eigenvalues; the matrix is assumed Hermitian.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .hermitian_part()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Inverse of a Hermitian positive-definite superoperator through its
    /// eigendecomposition. Eigenvalues below `GRAM_RANK_CUTOFF * max` count
    /// as zero and make the inversion fail.
    pub fn inverse_hermitian(&self) -> Result<Self> {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let cutoff = GRAM_RANK_CUTOFF * max;
        let rank = eig.eigenvalues.iter().filter(|&&l| l > cutoff).count();
        let required = self.matrix.nrows();
        if rank < required || max <= 0.0 {
            return Err(Error::NonSpanningFrame { rank, required });
        }
        let inv_diag =
            DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(1.0 / l, 0.0)));
        let v = &eig.eigenvectors;
        Ok(Self {
            op_dim: self.op_dim,
            matrix: v * inv_diag * v.adjoint(),
        })
    }

    fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.matrix + self.matrix.adjoint()).map(|z| z * 0.5)
    }
}

/// `G = sum_j |N_j)(N_j|`
pub fn gram(operators: &[DenseOperator]) -> Result<Superoperator> {
    let first = operators
        .first()
        .ok_or_else(|| domain("Gram superoperator of an empty operator family"))?;
    let mut g = Superoperator::zeros(first.dim());
    for op in operators {
        g.add_assign(&Superoperator::outer(op, op)?);
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Cardinal6,
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
    Reflected,
    Custom,
    ContinuousSampled,
}

impl FrameKind {
    pub fn polyhedron_size(self) -> Option<usize> {
        match self {
            FrameKind::Tetrahedron => Some(4),
            FrameKind::Octahedron | FrameKind::Cardinal6 => Some(6),
            FrameKind::Cube => Some(8),
            FrameKind::Icosahedron => Some(12),
            FrameKind::Dodecahedron => Some(20),
            _ => None,
        }
    }
}

/// A single-qubit frame: projectors onto Bloch vectors plus their duals.
#[derive(Clone, Debug)]
pub struct Frame {
    kind: FrameKind,
    vectors: Vec<BlochVector>,
    projectors: Vec<DenseOperator>,
    duals: Vec<DenseOperator>,
}

impl Frame {
    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BlochVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> &[DenseOperator] {
        &self.projectors
    }

    pub fn duals(&self) -> &[DenseOperator] {
        &self.duals
    }

    /// The six cardinal directions, ordered `+x, -x, +y, -y, +z, -z` so that
    /// index `2 (j - 1) + mu` is the projector `(1 + (-1)^mu sigma_j) / 2`.
    pub fn cardinal6() -> Self {
        Self::with_kind(
            FrameKind::Cardinal6,
            polyhedron_vectors(FrameKind::Octahedron).unwrap(),
        )
        .expect("cardinal directions span the qubit operator space")
    }

    pub fn polyhedron(kind: FrameKind) -> Result<Self> {
        Self::with_kind(kind, polyhedron_vectors(kind)?)
    }

    pub fn reflected(seed: &[BlochVector]) -> Result<Self> {
        Self::with_kind(FrameKind::Reflected, reflect_octant(seed)?)
    }

    pub fn with_kind(kind: FrameKind, vectors: Vec<BlochVector>) -> Result<Self> {
        for v in &vectors {
            v.require_unit(UNIT_TOL)?;
        }
        let projectors: Vec<DenseOperator> = vectors.iter().map(BlochVector::projector).collect();
        let g_inv = gram(&projectors)?.inverse_hermitian()?;
        let duals = projectors.iter().map(|p| g_inv.apply(p)).collect();
        Ok(Self {
            kind,
            vectors,
            projectors,
            duals,
        })
    }

    /// `sum_a |P_a)(Q_a|`
    pub fn resolution_pq(&self) -> Superoperator {
        self.resolution(&self.projectors, &self.duals)
    }

    /// `sum_a |Q_a)(P_a|`
    pub fn resolution_qp(&self) -> Superoperator {
        self.resolution(&self.duals, &self.projectors)
    }

    fn resolution(&self, left: &[DenseOperator], right: &[DenseOperator]) -> Superoperator {
        let mut s = Superoperator::zeros(2);
        for (l, r) in left.iter().zip(right) {
            s.add_assign(&Superoperator::outer(l, r).expect("single-qubit operators"));
        }
        s
    }

    /// Index of the vertex within `tol` of `v`, if any.
    pub fn vertex_index(&self, v: &BlochVector, tol: f64) -> Option<usize> {
        self.vectors.iter().position(|u| u.distance(v) <= tol)
    }
}

/// Duals and projectors from a list of Bloch vectors (kind `custom`).
pub fn dual_frame(frame_vectors: &[BlochVector]) -> Result<Frame> {
    Frame::with_kind(FrameKind::Custom, frame_vectors.to_vec())
}

/// `(1/K)(1 + 3 sigma . n)`: the dual of a vertex in a frame that satisfies
/// both moment conditions.
pub fn balanced_dual(n: &BlochVector, k: usize) -> DenseOperator {
    let mut q = DenseOperator::identity(1);
    q.add_scaled(3.0, &n.sigma_dot()).unwrap();
    q.scaled(1.0 / k as f64)
}

/// Dual of the continuous frame of all pure states: `(1/4pi)(1 + 3 sigma . n)`.
pub fn continuous_dual(n: &BlochVector) -> Result<DenseOperator> {
    n.require_unit(UNIT_TOL)?;
    let mut q = DenseOperator::identity(1);
    q.add_scaled(3.0, &n.sigma_dot())?;
    Ok(q.scaled(1.0 / (4.0 * PI)))
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn cyclic(v: [f64; 3]) -> [[f64; 3]; 3] {
    [v, [v[2], v[0], v[1]], [v[1], v[2], v[0]]]
}

/// Sign patterns over the nonzero entries of `v`, in +/- order per slot.
fn sign_orbit(v: [f64; 3]) -> Vec<[f64; 3]> {
    let mut out = vec![v];
    for axis in 0..3 {
        if v[axis] == 0.0 {
            continue;
        }
        let flipped: Vec<[f64; 3]> = out
            .iter()
            .map(|u| {
                let mut w = *u;
                w[axis] = -w[axis];
                w
            })
            .collect();
        // interleave so each slot alternates +, -
        out = out
            .into_iter()
            .zip(flipped)
            .flat_map(|(a, b)| [a, b])
            .collect();
    }
    out
}

/// Vertices of a regular polyhedron inscribed in the Bloch sphere.
pub fn polyhedron_vectors(kind: FrameKind) -> Result<Vec<BlochVector>> {
    let phi = golden();
    let raw: Vec<[f64; 3]> = match kind {
        FrameKind::Octahedron | FrameKind::Cardinal6 => vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
        FrameKind::Tetrahedron => vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ],
        FrameKind::Cube => sign_orbit([1.0, 1.0, 1.0]),
        FrameKind::Icosahedron => cyclic([0.0, 1.0, phi])
            .into_iter()
            .flat_map(sign_orbit)
            .collect(),
        FrameKind::Dodecahedron => {
            let mut v = sign_orbit([1.0, 1.0, 1.0]);
            v.extend(
                cyclic([0.0, 1.0 / phi, phi])
                    .into_iter()
                    .flat_map(sign_orbit),
            );
            v
        }
        other => {
            return Err(domain(format!("{other:?} is not a regular polyhedron")));
        }
    };
    Ok(raw
        .into_iter()
        .map(|v| BlochVector::from(v).normalized())
        .collect())
}

/// Reflects a first-octant seed set through the `x = 0`, `y = 0` and `z = 0`
/// planes in turn, giving `8 |seed|` vectors closed under all sign flips.
///
/// The result always has zero first moment and zero off-diagonal second
/// moments. The diagonal second moments are the seed's mean squared
/// components, so the result passes [`frame_check`] only when those are
/// equal (for example for `(1,1,1)/sqrt 3`).
pub fn reflect_octant(seed: &[BlochVector]) -> Result<Vec<BlochVector>> {
    if seed.is_empty() {
        return Err(domain("octant reflection of an empty seed set"));
    }
    for v in seed {
        v.require_unit(UNIT_TOL)?;
        if !(v.x > 0.0 && v.y > 0.0 && v.z > 0.0) {
            return Err(domain(format!(
                "seed vector ({}, {}, {}) is not strictly inside the first octant",
                v.x, v.y, v.z
            )));
        }
    }
    let mut set = seed.to_vec();
    for axis in 0..3 {
        let mirrored: Vec<BlochVector> = set
            .iter()
            .map(|v| v.flipped(axis == 0, axis == 1, axis == 2))
            .collect();
        set.extend(mirrored);
    }
    Ok(set)
}

/// Residuals of the two moment conditions that make a frame's duals
/// proportional to the continuous dual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameCheck {
    /// `|sum_a n_a|`
    pub first_moment_residual: f64,
    /// Frobenius norm of `(1/K) sum_a n_a n_a^T - 1/3`.
    pub second_moment_residual: f64,
    pub passed: bool,
}

pub fn frame_check(vectors: &[BlochVector], tol: f64) -> FrameCheck {
    let k = vectors.len().max(1) as f64;
    let mut first = [0.0; 3];
    let mut second = [[0.0; 3]; 3];
    for v in vectors {
        let a = v.to_array();
        for j in 0..3 {
            first[j] += a[j];
            for l in 0..3 {
                second[j][l] += a[j] * a[l];
            }
        }
    }
    let first_moment_residual = first.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sq = 0.0;
    for (j, row) in second.iter().enumerate() {
        for (l, m) in row.iter().enumerate() {
            let target = if j == l { 1.0 / 3.0 } else { 0.0 };
            let d = m / k - target;
            sq += d * d;
        }
    }
    let second_moment_residual = sq.sqrt();
    FrameCheck {
        first_moment_residual,
        second_moment_residual,
        passed: !vectors.is_empty()
            && first_moment_residual <= tol
            && second_moment_residual <= tol,
    }
}

/// Deterministic near-uniform points on the sphere (Fibonacci lattice).
pub fn fibonacci_sphere(count: usize) -> Vec<BlochVector> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            BlochVector::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// JSON frame description: `{"kind": "<tag>", "vectors": [[x,y,z], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub kind: FrameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<BlochVector>>,
    /// Point count for `continuous_sampled` frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl FrameSpec {
    pub fn named(kind: FrameKind) -> Self {
        Self {
            kind,
            vectors: None,
            count: None,
        }
    }

    pub fn build(&self) -> Result<Frame> {
        let vectors = self
            .vectors
            .as_ref()
            .map(|vs| vs.iter().map(|v| v.normalized()).collect::<Vec<_>>());
        match (self.kind, vectors) {
            (FrameKind::Reflected, Some(seed)) => Frame::reflected(&seed),
            (FrameKind::Custom, Some(vs)) => Frame::with_kind(FrameKind::Custom, vs),
            (FrameKind::Reflected | FrameKind::Custom, None) => Err(domain(format!(
                "frame kind {:?} requires explicit vectors",
                self.kind
            ))),
            (FrameKind::ContinuousSampled, Some(vs)) => {
                Frame::with_kind(FrameKind::ContinuousSampled, vs)
            }
            (FrameKind::ContinuousSampled, None) => {
                let count = self
                    .count
                    .ok_or_else(|| domain("continuous_sampled frame requires vectors or count"))?;
                Frame::with_kind(FrameKind::ContinuousSampled, fibonacci_sphere(count))
            }
            (kind, Some(vs)) => {
                let expected = kind.polyhedron_size().unwrap_or(0);
                if vs.len() != expected {
                    return Err(domain(format!(
                        "{kind:?} frame needs {expected} vectors, got {}",
                        vs.len()
                    )));
                }
                Frame::with_kind(kind, vs)
            }
            (FrameKind::Cardinal6, None) => Ok(Frame::cardinal6()),
            (kind, None) => Frame::polyhedron(kind),
        }
    }
}

/// Either one frame shared by every qubit or one frame per qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FramesSpec {
    Shared(FrameSpec),
    PerQubit(Vec<FrameSpec>),
}

impl FramesSpec {
    /// Parses either form, reporting the frame-level error rather than an
    /// untagged-enum mismatch.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        Ok(if v.is_array() {
            FramesSpec::PerQubit(serde_json::from_value(v)?)
        } else {
            FramesSpec::Shared(serde_json::from_value(v)?)
        })
    }

    pub fn build(&self, qubits: usize) -> Result<Vec<Frame>> {
        match self {
            FramesSpec::Shared(spec) => {
                let frame = spec.build()?;
                Ok(vec![frame; qubits])
            }
            FramesSpec::PerQubit(specs) => {
                if specs.len() != qubits {
                    return Err(domain(format!(
                        "{} frames given for {qubits} qubits",
                        specs.len()
                    )));
                }
                specs.iter().map(FrameSpec::build).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{hermitian_eigenvalues, pauli};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn cardinal_gram_spectrum() {
        let f = Frame::cardinal6();
        let ev = gram(f.projectors()).unwrap().eigenvalues();
        assert!(close(&ev, &[1.0, 1.0, 1.0, 3.0], 1e-12), "{ev:?}");
    }

    #[test]
    fn single_projector_gram_is_rank_one() {
        let g = gram(&[BlochVector::PLUS_Z.projector()]).unwrap();
        let ev = g.eigenvalues();
        assert!(close(&ev, &[0.0, 0.0, 0.0, 1.0], 1e-12), "{ev:?}");
        assert!(matches!(
            g.inverse_hermitian(),
            Err(Error::NonSpanningFrame { rank: 1, .. })
        ));
    }

    #[test]
    fn tetrahedron_gram_spectrum() {
        let vs = polyhedron_vectors(FrameKind::Tetrahedron).unwrap();
        let ps: Vec<_> = vs.iter().map(BlochVector::projector).collect();
        let ev = gram(&ps).unwrap().eigenvalues();
        let t = 2.0 / 3.0;
        assert!(close(&ev, &[t, t, t, 2.0], 1e-12), "{ev:?}");
    }

    #[test]
    fn cardinal_duals_match_closed_form() {
        let f = Frame::cardinal6();
        for j in 1..=3 {
            for mu in 0..2 {
                let sign = if mu == 0 { 3.0 } else { -3.0 };
                let mut expected = DenseOperator::identity(1);
                expected.add_scaled(sign, &pauli(j).unwrap()).unwrap();
                let expected = expected.scaled(1.0 / 6.0);
                let q = &f.duals()[2 * (j - 1) + mu];
                assert!(q.max_abs_diff(&expected).unwrap() < 1e-12);
            }
        }
        let q_up = &f.duals()[4];
        assert!((q_up.get(0, 0).re - 2.0 / 3.0).abs() < 1e-12);
        assert!((q_up.get(1, 1).re + 1.0 / 3.0).abs() < 1e-12);
        let ev = hermitian_eigenvalues(q_up).unwrap();
        assert!(close(&ev, &[-1.0 / 3.0, 2.0 / 3.0], 1e-12));
    }

    #[test]
    fn tetrahedron_duals_match_closed_form() {
        let f = Frame::polyhedron(FrameKind::Tetrahedron).unwrap();
        for (v, q) in f.vectors().iter().zip(f.duals()) {
            assert!(q.max_abs_diff(&balanced_dual(v, 4)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn coplanar_family_is_rejected() {
        let vs = [
            BlochVector::PLUS_X,
            BlochVector::PLUS_Y,
            BlochVector::MINUS_X,
        ];
        assert!(matches!(
            dual_frame(&vs),
            Err(Error::NonSpanningFrame { .. })
        ));
    }

    #[test]
    fn continuous_dual_at_north_pole() {
        let q = continuous_dual(&BlochVector::PLUS_Z).unwrap();
        let s = 1.0 / (4.0 * PI);
        assert!((q.get(0, 0).re - 4.0 * s).abs() < 1e-15);
        assert!((q.get(1, 1).re + 2.0 * s).abs() < 1e-15);
        assert!((q.trace().re - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let ev = hermitian_eigenvalues(&q).unwrap();
        assert!(close(&ev, &[-1.0 / (2.0 * PI), 1.0 / PI], 1e-15));
        assert!(continuous_dual(&BlochVector::new(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn octahedron_quadrature_of_continuous_dual_is_identity() {
        let mut acc = DenseOperator::zeros(1);
        for v in polyhedron_vectors(FrameKind::Octahedron).unwrap() {
            acc.add_scaled(4.0 * PI / 6.0, &continuous_dual(&v).unwrap())
                .unwrap();
        }
        assert!(acc.max_abs_diff(&DenseOperator::identity(1)).unwrap() < 1e-14);
    }

    #[test]
    fn polyhedra_satisfy_moment_conditions() {
        for kind in [
            FrameKind::Tetrahedron,
            FrameKind::Octahedron,
            FrameKind::Cube,
            FrameKind::Icosahedron,
            FrameKind::Dodecahedron,
        ] {
            let vs = polyhedron_vectors(kind).unwrap();
            assert_eq!(vs.len(), kind.polyhedron_size().unwrap());
            let check = frame_check(&vs, 1e-12);
            assert!(check.passed, "{kind:?}: {check:?}");
            // distinct vertices
            for (i, a) in vs.iter().enumerate() {
                for b in &vs[i + 1..] {
                    assert!(a.distance(b) > 0.1);
                }
            }
        }
        assert!(polyhedron_vectors(FrameKind::Custom).is_err());
    }

    #[test]
    fn tetrahedron_moments_by_direct_summation() {
        let s = 1.0 / 3f64.sqrt();
        let vs = polyhedron_vectors(FrameKind::Tetrahedron).unwrap();
        assert_eq!(vs[1], BlochVector::new(s, -s, -s));
        let check = frame_check(&vs, 1e-15);
        assert!(check.first_moment_residual < 1e-15 && check.second_moment_residual < 1e-15);
    }

    #[test]
    fn unbalanced_set_fails_second_moment() {
        let vs = [
            BlochVector::PLUS_Z,
            BlochVector::MINUS_Z,
            BlochVector::PLUS_X,
            BlochVector::MINUS_X,
        ];
        let check = frame_check(&vs, 1e-10);
        assert!(!check.passed);
        assert_eq!(check.first_moment_residual, 0.0);
        // xx = zz = 1/2 - 1/3, yy = -1/3
        let expected = (2.0 * (1.0f64 / 6.0).powi(2) + (1.0f64 / 3.0).powi(2)).sqrt();
        assert!((check.second_moment_residual - expected).abs() < 1e-15);
    }

    #[test]
    fn octant_reflection() {
        let s = 1.0 / 3f64.sqrt();
        let cube = reflect_octant(&[BlochVector::new(s, s, s)]).unwrap();
        assert_eq!(cube.len(), 8);
        assert!(frame_check(&cube, 1e-14).passed);

        let seed = BlochVector::new(0.6, 0.8 * 0.3f64.cos(), 0.8 * 0.3f64.sin());
        let out = reflect_octant(&[seed]).unwrap();
        assert_eq!(out.len(), 8);
        let check = frame_check(&out, 1e-14);
        assert!(check.first_moment_residual < 1e-14);

        assert!(reflect_octant(&[BlochVector::PLUS_Z]).is_err());
        assert!(reflect_octant(&[]).is_err());
    }

    #[test]
    fn resolutions_of_identity() {
        let id = Superoperator::identity(2);
        for frame in [
            Frame::cardinal6(),
            Frame::polyhedron(FrameKind::Dodecahedron).unwrap(),
            Frame::with_kind(FrameKind::ContinuousSampled, fibonacci_sphere(7)).unwrap(),
        ] {
            assert!(frame.resolution_pq().frobenius_distance(&id) < 1e-10);
            assert!(frame.resolution_qp().frobenius_distance(&id) < 1e-10);
        }
    }

    #[test]
    fn frame_spec_json() {
        let spec: FrameSpec = serde_json::from_str(r#"{"kind": "tetrahedron"}"#).unwrap();
        assert_eq!(spec.build().unwrap().len(), 4);
        let spec: FramesSpec =
            serde_json::from_str(r#"[{"kind":"cardinal6"},{"kind":"custom","vectors":[[0,0,1],[0,0,-1],[1,0,0],[0,1,0]]}]"#)
                .unwrap();
        let frames = spec.build(2).unwrap();
        assert_eq!(frames[1].len(), 4);
        assert!(spec.build(3).is_err());
        let bad: FrameSpec = serde_json::from_str(r#"{"kind": "reflected"}"#).unwrap();
        assert!(bad.build().is_err());
        let err = FramesSpec::from_json_str(r#"{"family": "octahedron"}"#).unwrap_err();
        assert!(err.to_string().contains("kind"), "{err}");
        let per =
            FramesSpec::from_json_str(r#"[{"kind": "cube"}, {"kind": "cardinal6"}]"#).unwrap();
        assert_eq!(per.build(2).unwrap()[0].len(), 8);
    }
}
