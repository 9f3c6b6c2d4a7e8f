use std::f64::consts::PI;

use super::{mode_product, PauliCoefficients, Quadrature};
use crate::error::{domain, Result};
use crate::frames::continuous_dual;
use crate::operator::{tensor, BlochVector, DenseOperator};

/// `(3/4pi) (1/3, x, y, z)`: the factor each qubit contributes to the
/// canonical expansion function.
#[inline]
pub(crate) fn dual_weights(n: &BlochVector) -> [f64; 4] {
    let s = 3.0 / (4.0 * PI);
    [1.0 / (4.0 * PI), s * n.x, s * n.y, s * n.z]
}

/// Contracts the leading (most significant) qubit index of a Pauli tensor.
#[inline]
pub(crate) fn contract_leading(data: &[f64], v: &[f64; 4], out: &mut [f64]) {
    let stride = data.len() / 4;
    debug_assert_eq!(out.len(), stride);
    for (r, o) in out.iter_mut().enumerate() {
        *o = v[0] * data[r]
            + v[1] * data[stride + r]
            + v[2] * data[2 * stride + r]
            + v[3] * data[3 * stride + r];
    }
}

/// Canonical expansion function `w(n_1..n_N) = tr(rho Q(n_1) x ... x Q(n_N))`,
/// evaluated as `(3/4pi)^N sum_a c_a (n_1)_a1 ... (n_N)_aN` with the
/// identity slot weighted by `1/3`.
pub fn wcan_continuous(c: &PauliCoefficients, ns: &[BlochVector]) -> Result<f64> {
    if ns.len() != c.qubits() {
        return Err(domain(format!(
            "{} Bloch vectors given for a {}-qubit operator",
            ns.len(),
            c.qubits()
        )));
    }
    for n in ns {
        n.require_unit(1e-10)?;
    }
    Ok(wcan_unchecked(c.as_slice(), ns))
}

pub(crate) fn wcan_unchecked(coeffs: &[f64], ns: &[BlochVector]) -> f64 {
    let mut cur = coeffs.to_vec();
    let mut next = vec![0.0; cur.len() / 4];
    for n in ns {
        contract_leading(&cur, &dual_weights(n), &mut next);
        std::mem::swap(&mut cur, &mut next);
        next.truncate(cur.len() / 4);
    }
    cur[0]
}

/// `Q(n_1) x ... x Q(n_N)` as a dense operator.
pub fn product_continuous_dual(ns: &[BlochVector]) -> Result<DenseOperator> {
    let factors = ns.iter().map(continuous_dual).collect::<Result<Vec<_>>>()?;
    tensor(&factors)
}

/// `rho = int dOmega w(n) P(n)` evaluated with a product rule, one copy of
/// `quad` per qubit. `required_degree` is the per-sphere polynomial degree
/// of `w(n) P(n)` the rule must integrate exactly.
pub fn reconstruct_from_function(
    qubits: usize,
    quad: &Quadrature,
    required_degree: usize,
    w: impl Fn(&[BlochVector]) -> f64,
) -> Result<DenseOperator> {
    quad.require_degree(required_degree)?;
    let k = quad.nodes().len();
    let total = k
        .checked_pow(qubits as u32)
        .ok_or_else(|| domain("quadrature grid too large"))?;
    // accumulate Pauli components of sum W w P(n), P(n) = (1/2^N) sum_b prod (1, n)_b sigma_b
    let mut pauli = vec![0.0; 1 << (2 * qubits)];
    let mut idx = vec![0usize; qubits];
    let mut ns = vec![BlochVector::PLUS_Z; qubits];
    for flat in 0..total {
        let mut rem = flat;
        for q in (0..qubits).rev() {
            idx[q] = rem % k;
            rem /= k;
        }
        let mut weight = 1.0;
        for q in 0..qubits {
            ns[q] = quad.nodes()[idx[q]];
            weight *= quad.weights()[idx[q]];
        }
        let scale = weight * w(&ns);
        if scale == 0.0 {
            continue;
        }
        let mut term = vec![scale];
        for n in &ns {
            let p = [1.0, n.x, n.y, n.z];
            let mut dims = [term.len(), 1];
            term = mode_product(&term, &mut dims, 1, &p.map(|x| vec![x]));
        }
        for (acc, t) in pauli.iter_mut().zip(&term) {
            *acc += t;
        }
    }
    Ok(PauliCoefficients::from_values(qubits, pauli)?.to_operator())
}

/// Reconstructs `rho` from its canonical expansion function by quadrature.
/// The integrand has degree 2 on each sphere, so the rule must be exact to
/// degree 2.
pub fn reconstruct_continuous(c: &PauliCoefficients, quad: &Quadrature) -> Result<DenseOperator> {
    let coeffs = c.as_slice();
    reconstruct_from_function(c.qubits(), quad, 2, |ns| wcan_unchecked(coeffs, ns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::operator::trace_inner;
    use crate::repr::pauli_coefficients;

    #[test]
    fn maximally_mixed_is_flat() {
        let c = PauliCoefficients::maximally_mixed(3);
        let ns = [
            BlochVector::from_angles(0.3, 1.0),
            BlochVector::PLUS_X,
            BlochVector::from_angles(2.0, -0.4),
        ];
        let w = wcan_continuous(&c, &ns).unwrap();
        assert!((w - (4.0 * PI).powi(-3)).abs() < 1e-16);
    }

    #[test]
    fn pure_up_state() {
        let rho = BlochVector::PLUS_Z.projector();
        let c = pauli_coefficients(&rho).unwrap();
        for &(theta, phi) in &[(0.0, 0.0), (0.7, 1.2), (PI / 2.0, 3.0), (PI, 0.1)] {
            let w = wcan_continuous(&c, &[BlochVector::from_angles(theta, phi)]).unwrap();
            let expected = (1.0 + 3.0 * f64::cos(theta)) / (4.0 * PI);
            assert!((w - expected).abs() < 1e-15);
            let via_dual = trace_inner(
                &product_continuous_dual(&[BlochVector::from_angles(theta, phi)]).unwrap(),
                &rho,
            )
            .unwrap();
            assert!((via_dual.re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn argument_checks() {
        let c = PauliCoefficients::maximally_mixed(2);
        assert!(wcan_continuous(&c, &[BlochVector::PLUS_Z]).is_err());
        assert!(
            wcan_continuous(&c, &[BlochVector::PLUS_Z, BlochVector::new(0.0, 0.0, 0.5)]).is_err()
        );
    }

    #[test]
    fn reconstruction_rules() {
        let c = PauliCoefficients::maximally_mixed(2);
        let rho = reconstruct_continuous(&c, &Quadrature::octahedron()).unwrap();
        assert!(
            rho.max_abs_diff(&DenseOperator::maximally_mixed(2))
                .unwrap()
                < 1e-15
        );
        let single = Quadrature::equal_weight("one", vec![BlochVector::PLUS_Z]).unwrap();
        assert!(matches!(
            reconstruct_continuous(&c, &single),
            Err(Error::InsufficientQuadrature {
                required: 2,
                available: 0
            })
        ));
    }
}
