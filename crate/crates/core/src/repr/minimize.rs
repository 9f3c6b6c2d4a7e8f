//! Global minimization of the canonical expansion function over a product
//! of Bloch spheres: an exhaustive product-grid search followed by
//! coordinate-wise golden-section refinement.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::continuous::{contract_leading, dual_weights, wcan_unchecked};
use super::PauliCoefficients;
use crate::error::{domain, Result};
use crate::frames::fibonacci_sphere;
use crate::operator::BlochVector;

pub const MIN_GRID_PER_SPHERE: usize = 6;

/// Configurations enumerated by [`equator_minimum`] are capped at this count.
const MAX_EQUATOR_CONFIGS: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// Both poles plus an odd number of latitude rings (the middle ring on
    /// the equator) with an even number of azimuths starting at `phi = 0`.
    #[default]
    Uniform,
    Fibonacci,
}

#[derive(Clone, Debug)]
pub struct SphereGrid {
    kind: GridKind,
    angles: Vec<(f64, f64)>,
    vectors: Vec<BlochVector>,
    theta_step: f64,
    phi_step: f64,
    phi_count: Option<usize>,
}

impl SphereGrid {
    /// At most `points` nodes; `points >= 6`.
    pub fn new(kind: GridKind, points: usize) -> Result<Self> {
        if points < MIN_GRID_PER_SPHERE {
            return Err(domain(format!(
                "grid_per_sphere must be at least {MIN_GRID_PER_SPHERE}, got {points}"
            )));
        }
        Ok(match kind {
            GridKind::Uniform => Self::uniform(points),
            GridKind::Fibonacci => Self::fibonacci(points),
        })
    }

    fn uniform(points: usize) -> Self {
        let interior = points - 2;
        let mut rings = ((interior as f64 / 2.0).sqrt().floor() as usize).max(1);
        if rings.is_multiple_of(2) {
            rings -= 1;
        }
        let mut phis = interior / rings;
        phis -= phis % 2;
        let theta_step = PI / (rings + 1) as f64;
        let phi_step = 2.0 * PI / phis as f64;
        let mut angles = vec![(0.0, 0.0)];
        for r in 1..=rings {
            for p in 0..phis {
                angles.push((r as f64 * theta_step, p as f64 * phi_step));
            }
        }
        angles.push((PI, 0.0));
        Self::from_angles(GridKind::Uniform, angles, theta_step, phi_step, Some(phis))
    }

    fn fibonacci(points: usize) -> Self {
        let angles = fibonacci_sphere(points)
            .iter()
            .map(BlochVector::angles)
            .collect();
        let step = (4.0 * PI / points as f64).sqrt();
        Self::from_angles(GridKind::Fibonacci, angles, step, step, None)
    }

    fn from_angles(
        kind: GridKind,
        angles: Vec<(f64, f64)>,
        theta_step: f64,
        phi_step: f64,
        phi_count: Option<usize>,
    ) -> Self {
        let vectors = angles
            .iter()
            .map(|&(t, p)| BlochVector::from_angles(t, p))
            .collect();
        Self {
            kind,
            angles,
            vectors,
            theta_step,
            phi_step,
            phi_count,
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    pub fn vectors(&self) -> &[BlochVector] {
        &self.vectors
    }

    /// Number of azimuths per ring for the uniform grid.
    pub fn phi_count(&self) -> Option<usize> {
        self.phi_count
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub grid_per_sphere: usize,
    pub refine_iters: usize,
    #[serde(default)]
    pub grid_kind: GridKind,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid_per_sphere: 24,
            refine_iters: 3,
            grid_kind: GridKind::Uniform,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WcanMinimum {
    /// Best value found, after refinement.
    pub value: f64,
    /// Best value on the grid alone.
    pub grid_value: f64,
    /// Grid node per qubit of the best grid point.
    pub grid_indices: Vec<usize>,
    /// `(theta, phi)` per qubit of the refined minimizer.
    pub angles: Vec<(f64, f64)>,
    pub vectors: Vec<BlochVector>,
}

pub fn minimize_wcan(
    c: &PauliCoefficients,
    grid_per_sphere: usize,
    refine_iters: usize,
) -> Result<WcanMinimum> {
    minimize_wcan_with(
        c,
        &MinimizeOptions {
            grid_per_sphere,
            refine_iters,
            grid_kind: GridKind::Uniform,
        },
    )
}

pub fn minimize_wcan_with(c: &PauliCoefficients, opts: &MinimizeOptions) -> Result<WcanMinimum> {
    let grid = SphereGrid::new(opts.grid_kind, opts.grid_per_sphere)?;
    let n = c.qubits();
    let weights: Vec<[f64; 4]> = grid.vectors().iter().map(dual_weights).collect();
    let (grid_value, grid_indices) = grid_search(c.as_slice(), n, &weights);

    let mut angles: Vec<f64> = grid_indices
        .iter()
        .flat_map(|&i| {
            let (t, p) = grid.angles()[i];
            [t, p]
        })
        .collect();
    let eval = |a: &[f64]| {
        let ns: Vec<BlochVector> = a
            .chunks(2)
            .map(|tp| BlochVector::from_angles(tp[0], tp[1]))
            .collect();
        wcan_unchecked(c.as_slice(), &ns)
    };
    let mut value = eval(&angles);
    for _ in 0..opts.refine_iters {
        for coord in 0..angles.len() {
            let h = if coord % 2 == 0 {
                grid.theta_step
            } else {
                grid.phi_step
            };
            let x0 = angles[coord];
            let mut trial = angles.clone();
            let (x, fx) = golden_section(
                |x| {
                    trial[coord] = x;
                    eval(&trial)
                },
                x0 - h,
                x0 + h,
            );
            if fx < value {
                value = fx;
                angles[coord] = x;
            }
        }
    }
    let pairs: Vec<(f64, f64)> = angles.chunks(2).map(|tp| (tp[0], tp[1])).collect();
    Ok(WcanMinimum {
        value,
        grid_value,
        grid_indices,
        vectors: pairs
            .iter()
            .map(|&(t, p)| BlochVector::from_angles(t, p))
            .collect(),
        angles: pairs,
    })
}

fn better(a: &(f64, Vec<usize>), b: &(f64, Vec<usize>)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Less => true,
        Ordering::Equal => a.1 < b.1,
        Ordering::Greater => false,
    }
}

/// Exhaustive search over `weights.len()^n` grid points, contracting the
/// Pauli tensor one qubit at a time so shared prefixes are computed once.
/// Ties resolve to the lexicographically smallest index tuple.
fn grid_search(coeffs: &[f64], n: usize, weights: &[[f64; 4]]) -> (f64, Vec<usize>) {
    (0..weights.len())
        .into_par_iter()
        .map(|first| {
            // bufs[l] holds the tensor after contracting qubits 0..=l
            let mut bufs: Vec<Vec<f64>> =
                (0..n).map(|l| vec![0.0; 1 << (2 * (n - 1 - l))]).collect();
            contract_leading(coeffs, &weights[first], &mut bufs[0]);
            let mut idx = vec![0; n];
            idx[0] = first;
            let mut best = (f64::INFINITY, idx.clone());
            descend(1, n, &mut bufs, weights, &mut idx, &mut best);
            best
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("grid has nodes")
}

fn descend(
    level: usize,
    n: usize,
    bufs: &mut [Vec<f64>],
    weights: &[[f64; 4]],
    idx: &mut [usize],
    best: &mut (f64, Vec<usize>),
) {
    if level == n {
        let v = bufs[n - 1][0];
        if v < best.0 {
            best.0 = v;
            best.1.copy_from_slice(idx);
        }
        return;
    }
    for (k, w) in weights.iter().enumerate() {
        let (done, rest) = bufs.split_at_mut(level);
        contract_leading(&done[level - 1], w, &mut rest[0]);
        idx[level] = k;
        descend(level + 1, n, bufs, weights, idx, best);
    }
}

fn golden_section(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum over a family of special configurations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationMinimum {
    pub value: f64,
    pub vectors: Vec<BlochVector>,
}

/// Best configuration with every qubit at the north or south pole.
pub fn pole_minimum(c: &PauliCoefficients) -> ConfigurationMinimum {
    let n = c.qubits();
    let mut best = ConfigurationMinimum {
        value: f64::INFINITY,
        vectors: Vec::new(),
    };
    for mask in 0..1usize << n {
        let ns: Vec<BlochVector> = (0..n)
            .map(|q| {
                if mask >> (n - 1 - q) & 1 == 0 {
                    BlochVector::PLUS_Z
                } else {
                    BlochVector::MINUS_Z
                }
            })
            .collect();
        let v = wcan_unchecked(c.as_slice(), &ns);
        if v < best.value {
            best = ConfigurationMinimum {
                value: v,
                vectors: ns,
            };
        }
    }
    best
}

/// Best configuration with every qubit on the equator at azimuths
/// `2 pi j / phi_count`. `None` when the enumeration would be too large.
pub fn equator_minimum(c: &PauliCoefficients, phi_count: usize) -> Option<ConfigurationMinimum> {
    let n = c.qubits();
    let total = phi_count
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_EQUATOR_CONFIGS)?;
    let ring: Vec<BlochVector> = (0..phi_count)
        .map(|j| BlochVector::from_angles(PI / 2.0, 2.0 * PI * j as f64 / phi_count as f64))
        .collect();
    let mut best = ConfigurationMinimum {
        value: f64::INFINITY,
        vectors: Vec::new(),
    };
    let mut ns = vec![ring[0]; n];
    for flat in 0..total {
        let mut rem = flat;
        for q in (0..n).rev() {
            ns[q] = ring[rem % phi_count];
            rem /= phi_count;
        }
        let v = wcan_unchecked(c.as_slice(), &ns);
        if v < best.value {
            best = ConfigurationMinimum {
                value: v,
                vectors: ns.clone(),
            };
        }
    }
    Some(best)
}
