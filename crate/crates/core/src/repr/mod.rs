//! Expansions of N-qubit operators over products of single-qubit pure states.
//!
//! Every representation here is driven by the Pauli coefficients
//! `c_{a1..aN} = tr(rho sigma_a1 x ... x sigma_aN)`, stored densely with the
//! first qubit's index most significant.

mod continuous;
mod minimize;
mod pauli;
mod quadrature;
mod sph;
mod table;

pub use continuous::{
    product_continuous_dual, reconstruct_continuous, reconstruct_from_function, wcan_continuous,
};
pub use minimize::{
    equator_minimum, minimize_wcan, minimize_wcan_with, pole_minimum, ConfigurationMinimum,
    GridKind, MinimizeOptions, SphereGrid, WcanMinimum, MIN_GRID_PER_SPHERE,
};
pub use pauli::{pauli_coefficients, PauliCoefficients};
pub use quadrature::Quadrature;
pub use sph::{
    add_hosh, sigma_harmonic, sph_coefficients, spherical_harmonic, HoshTerm, SphCoefficients,
    L1_HARMONICS,
};
pub use table::{
    reconstruct_discrete, wcan_discrete, wcan_discrete_from_pauli, CoefficientTable, DiscreteTable,
};

use std::ops::{AddAssign, Mul};

use num_traits::Zero;

/// Applies `matrix` (`out x in`, row-major rows) along `axis` of a dense
/// row-major tensor with shape `dims`. Returns the new tensor; `dims[axis]`
/// becomes `matrix.len()`.
pub(crate) fn mode_product<T>(
    data: &[T],
    dims: &mut [usize],
    axis: usize,
    matrix: &[Vec<T>],
) -> Vec<T>
where
    T: Copy + Zero + AddAssign + Mul<Output = T>,
{
    let inner = dims[axis];
    let out = matrix.len();
    let post: usize = dims[axis + 1..].iter().product();
    let pre: usize = dims[..axis].iter().product();
    let mut result = vec![T::zero(); pre * out * post];
    for p in 0..pre {
        for (o, row) in matrix.iter().enumerate() {
            debug_assert_eq!(row.len(), inner);
            let dst = &mut result[(p * out + o) * post..(p * out + o + 1) * post];
            for (i, &m) in row.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let src = &data[(p * inner + i) * post..(p * inner + i + 1) * post];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += m * s;
                }
            }
        }
    }
    dims[axis] = out;
    result
}

/// Base-4 digits of a flat Pauli index, most significant first.
pub(crate) fn base4_digits(mut flat: usize, qubits: usize) -> Vec<usize> {
    let mut digits = vec![0; qubits];
    for d in digits.iter_mut().rev() {
        *d = flat & 3;
        flat >>= 2;
    }
    digits
}
