use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::frames::{polyhedron_vectors, FrameKind};
use crate::operator::BlochVector;

/// Highest polynomial degree probed when measuring a rule's exactness.
const MAX_PROBED_DEGREE: usize = 12;
const EXACTNESS_TOL: f64 = 1e-11;

/// A node/weight rule on the unit sphere together with the largest degree
/// `t` for which it integrates every polynomial of degree `<= t` exactly.
#[derive(Clone, Debug)]
pub struct Quadrature {
    name: String,
    nodes: Vec<BlochVector>,
    weights: Vec<f64>,
    degree: Option<usize>,
}

impl Quadrature {
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<BlochVector>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(domain(
                "quadrature needs one weight per node and at least one node",
            ));
        }
        for n in &nodes {
            n.require_unit(1e-10)?;
        }
        let degree = exactness_degree(&nodes, &weights);
        Ok(Self {
            name: name.into(),
            nodes,
            weights,
            degree,
        })
    }

    /// Equal weights `4 pi / K`.
    pub fn equal_weight(name: impl Into<String>, nodes: Vec<BlochVector>) -> Result<Self> {
        let w = 4.0 * PI / nodes.len().max(1) as f64;
        let weights = vec![w; nodes.len()];
        Self::new(name, nodes, weights)
    }

    /// Octahedron vertices: a spherical 3-design.
    pub fn octahedron() -> Self {
        Self::equal_weight(
            "octahedron",
            polyhedron_vectors(FrameKind::Octahedron).unwrap(),
        )
        .unwrap()
    }

    /// Icosahedron vertices: a spherical 5-design.
    pub fn icosahedron() -> Self {
        Self::equal_weight(
            "icosahedron",
            polyhedron_vectors(FrameKind::Icosahedron).unwrap(),
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "octahedron" => Ok(Self::octahedron()),
            "icosahedron" => Ok(Self::icosahedron()),
            other => Err(domain(format!("unknown quadrature {other:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[BlochVector] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `None` when not even constants integrate exactly.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn require_degree(&self, required: usize) -> Result<()> {
        match self.degree {
            Some(d) if d >= required => Ok(()),
            d => Err(crate::error::Error::InsufficientQuadrature {
                required,
                available: d.unwrap_or(0),
            }),
        }
    }

    pub fn integrate(&self, f: impl Fn(&BlochVector) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(n, w)| w * f(n))
            .sum()
    }
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// `int x^a y^b z^c dOmega` over the unit sphere.
pub(crate) fn monomial_integral(a: usize, b: usize, c: usize) -> f64 {
    if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
        return 0.0;
    }
    let (a, b, c) = (a as i64, b as i64, c as i64);
    4.0 * PI * double_factorial(a - 1) * double_factorial(b - 1) * double_factorial(c - 1)
        / double_factorial(a + b + c + 1)
}

fn exactness_degree(nodes: &[BlochVector], weights: &[f64]) -> Option<usize> {
    let mut degree = None;
    for t in 0..=MAX_PROBED_DEGREE {
        for a in 0..=t {
            for b in 0..=t - a {
                let c = t - a - b;
                let approx: f64 = nodes
                    .iter()
                    .zip(weights)
                    .map(|(n, w)| w * n.x.powi(a as i32) * n.y.powi(b as i32) * n.z.powi(c as i32))
                    .sum();
                if (approx - monomial_integral(a, b, c)).abs() > EXACTNESS_TOL {
                    return degree;
                }
            }
        }
        degree = Some(t);
    }
    degree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_integrals() {
        assert!((monomial_integral(0, 0, 0) - 4.0 * PI).abs() < 1e-15);
        assert!((monomial_integral(0, 0, 2) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((monomial_integral(2, 2, 0) - 4.0 * PI / 15.0).abs() < 1e-15);
        assert_eq!(monomial_integral(1, 2, 0), 0.0);
    }

    #[test]
    fn design_degrees() {
        assert_eq!(Quadrature::octahedron().degree(), Some(3));
        assert_eq!(Quadrature::icosahedron().degree(), Some(5));
        let single = Quadrature::equal_weight("pole", vec![BlochVector::PLUS_Z]).unwrap();
        assert_eq!(single.degree(), Some(0));
        assert!(single.require_degree(2).is_err());
        let cube =
            Quadrature::equal_weight("cube", polyhedron_vectors(FrameKind::Cube).unwrap()).unwrap();
        assert_eq!(cube.degree(), Some(3));
    }
}
