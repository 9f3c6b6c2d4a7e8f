//! State families, explicit product ensembles, and closed-form separability
//! bounds.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::frames::Frame;
use crate::operator::{tensor, BlochVector, DenseOperator};
use crate::repr::DiscreteTable;

/// Probabilities must sum to one within this tolerance.
pub const PROBABILITY_SUM_TOL: f64 = 1e-14;
/// Ensemble vectors must be unit within this tolerance.
pub const UNIT_TOL: f64 = 1e-12;
/// Ensemble vectors are matched to frame vertices within this distance.
pub const VERTEX_TOL: f64 = 1e-12;

/// `(1 - eps)/2^N + eps * rho_1` for the named target `rho_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    MaximallyMixed {
        n: usize,
    },
    /// Pure cat state `(|0..0> + |1..1>)/sqrt(2)`.
    Cat {
        n: usize,
    },
    EpsCat {
        n: usize,
        epsilon: f64,
    },
    /// Admixture of the Bell state `(|00> + |11>)/sqrt(2)`.
    Werner {
        epsilon: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    EpsGhz {
        epsilon: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// Rows of `[re, im]` pairs. With `epsilon`, the matrix is the target of
    /// an admixture with the maximally mixed state.
    CustomMatrix {
        matrix: Vec<Vec<[f64; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
    },
}

impl StateSpec {
    pub fn eps_cat(n: usize, epsilon: f64) -> Self {
        StateSpec::EpsCat { n, epsilon }
    }

    pub fn werner(epsilon: f64) -> Self {
        StateSpec::Werner { epsilon, n: None }
    }

    pub fn eps_ghz(epsilon: f64) -> Self {
        StateSpec::EpsGhz { epsilon, n: None }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn family(&self) -> &'static str {
        match self {
            StateSpec::MaximallyMixed { .. } => "maximally_mixed",
            StateSpec::Cat { .. } => "cat",
            StateSpec::EpsCat { .. } => "eps_cat",
            StateSpec::Werner { .. } => "werner",
            StateSpec::EpsGhz { .. } => "eps_ghz",
            StateSpec::CustomMatrix { .. } => "custom_matrix",
        }
    }

    pub fn qubits(&self) -> Result<usize> {
        let n = match self {
            StateSpec::MaximallyMixed { n }
            | StateSpec::Cat { n }
            | StateSpec::EpsCat { n, .. } => *n,
            StateSpec::Werner { n, .. } => {
                let n = n.unwrap_or(2);
                if n != 2 {
                    return Err(domain(format!("werner family needs n = 2, got {n}")));
                }
                n
            }
            StateSpec::EpsGhz { n, .. } => {
                let n = n.unwrap_or(3);
                if n != 3 {
                    return Err(domain(format!("eps_ghz family needs n = 3, got {n}")));
                }
                n
            }
            StateSpec::CustomMatrix { matrix, .. } => {
                let d = matrix.len();
                if d < 2 || !d.is_power_of_two() {
                    return Err(domain(format!(
                        "custom matrix dimension {d} is not a power of two >= 2"
                    )));
                }
                d.trailing_zeros() as usize
            }
        };
        if n == 0 {
            return Err(domain("qubit count must be at least 1"));
        }
        Ok(n)
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self {
            StateSpec::EpsCat { epsilon, .. }
            | StateSpec::Werner { epsilon, .. }
            | StateSpec::EpsGhz { epsilon, .. } => Some(*epsilon),
            StateSpec::CustomMatrix { epsilon, .. } => *epsilon,
            StateSpec::MaximallyMixed { .. } | StateSpec::Cat { .. } => None,
        }
    }

    /// The same family at another mixing parameter; `None` for families
    /// without one.
    pub fn with_epsilon(&self, eps: f64) -> Option<Self> {
        let mut s = self.clone();
        match &mut s {
            StateSpec::EpsCat { epsilon, .. }
            | StateSpec::Werner { epsilon, .. }
            | StateSpec::EpsGhz { epsilon, .. } => *epsilon = eps,
            StateSpec::CustomMatrix { epsilon, .. } => *epsilon = Some(eps),
            StateSpec::MaximallyMixed { .. } | StateSpec::Cat { .. } => return None,
        }
        Some(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.qubits()?;
        if let Some(eps) = self.epsilon() {
            if !(0.0..=1.0).contains(&eps) {
                return Err(domain(format!("epsilon {eps} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

fn cat_projector(n: usize) -> DenseOperator {
    let d = 1usize << n;
    let mut psi = vec![Complex64::new(0.0, 0.0); d];
    psi[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[d - 1] = psi[0];
    DenseOperator::projector_onto(&psi).expect("normalized cat state")
}

fn admix(target: &DenseOperator, eps: f64) -> DenseOperator {
    let mut rho = DenseOperator::maximally_mixed(target.qubits()).scaled(1.0 - eps);
    rho.add_scaled(eps, target).expect("same dimension");
    rho
}

pub fn build_state(spec: &StateSpec) -> Result<DenseOperator> {
    spec.validate()?;
    let n = spec.qubits()?;
    Ok(match spec {
        StateSpec::MaximallyMixed { .. } => DenseOperator::maximally_mixed(n),
        StateSpec::Cat { .. } => cat_projector(n),
        StateSpec::EpsCat { epsilon, .. }
        | StateSpec::Werner { epsilon, .. }
        | StateSpec::EpsGhz { epsilon, .. } => admix(&cat_projector(n), *epsilon),
        StateSpec::CustomMatrix { matrix, epsilon } => {
            let rows: Vec<Vec<Complex64>> = matrix
                .iter()
                .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect();
            let target = DenseOperator::from_rows(&rows)?;
            if !target.is_hermitian(crate::operator::HERMITIAN_TOL) {
                return Err(Error::NotHermitian(target.hermiticity_residual()));
            }
            match epsilon {
                Some(eps) => admix(&target, *eps),
                None => target,
            }
        }
    })
}

/// An exact bound `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    fn reciprocal(den: u64) -> Self {
        Self { num: 1, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

const MAX_BOUND_QUBITS: usize = 31;

fn check_range(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_BOUND_QUBITS {
        return Err(domain(format!(
            "N = {n} outside [{min}, {MAX_BOUND_QUBITS}]"
        )));
    }
    Ok(())
}

/// `1/(1 + 2^(2N-1))`: every state this close to the maximally mixed state is
/// separable.
pub fn bound_general(n: usize) -> Result<Rational> {
    check_range(n, 1)?;
    Ok(Rational::reciprocal(1 + (1u64 << (2 * n - 1))))
}

/// Separability threshold of the eps-cat family read off the canonical
/// representation: `3^-N` for `N <= 5`, otherwise `1/(1 +- 2^N + 2^(2N-2))`
/// with `+` for even `N`.
pub fn bound_cat(n: usize) -> Result<Rational> {
    check_range(n, 2)?;
    if n <= 5 {
        return Ok(Rational::reciprocal(3u64.pow(n as u32)));
    }
    let quarter = 1u64 << (2 * n - 2);
    let den = if n.is_multiple_of(2) {
        1 + (1u64 << n) + quarter
    } else {
        1 + quarter - (1u64 << n)
    };
    Ok(Rational::reciprocal(den))
}

/// `1/(1 + 2^(N-1))`, the exact eps-cat threshold.
pub fn bound_duer(n: usize) -> Result<Rational> {
    check_range(n, 2)?;
    Ok(Rational::reciprocal(1 + (1u64 << (n - 1))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTerm {
    pub probability: f64,
    pub vectors: Vec<BlochVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl EnsembleTerm {
    pub fn new(probability: f64, vectors: Vec<BlochVector>, label: Option<&str>) -> Self {
        Self {
            probability,
            vectors,
            label: label.map(str::to_owned),
        }
    }

    pub fn projector(&self) -> DenseOperator {
        let factors: Vec<DenseOperator> = self.vectors.iter().map(BlochVector::projector).collect();
        tensor(&factors).expect("at least one factor")
    }
}

/// A probability mixture of pure product states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEnsemble {
    #[serde(rename = "n")]
    qubits: usize,
    terms: Vec<EnsembleTerm>,
}

impl ProductEnsemble {
    pub fn new(qubits: usize, terms: Vec<EnsembleTerm>) -> Result<Self> {
        let e = Self { qubits, terms };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits == 0 {
            return Err(domain("ensemble needs at least one qubit"));
        }
        if self.terms.is_empty() {
            return Err(domain("ensemble has no terms"));
        }
        let mut total = 0.0;
        for (i, t) in self.terms.iter().enumerate() {
            if t.probability.is_nan() || t.probability < 0.0 || t.probability.is_infinite() {
                return Err(domain(format!(
                    "term {i} has probability {}",
                    t.probability
                )));
            }
            if t.vectors.len() != self.qubits {
                return Err(Error::DimensionMismatch {
                    expected: self.qubits,
                    found: t.vectors.len(),
                });
            }
            for v in &t.vectors {
                v.require_unit(UNIT_TOL)?;
            }
            total += t.probability;
        }
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(())
    }

    /// Uniform mixture of the `2^N` products of `+-z` states.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let p = 1.0 / (1u64 << qubits) as f64;
        let terms = (0..1usize << qubits)
            .map(|mask| {
                let vectors = (0..qubits)
                    .map(|q| {
                        if mask >> (qubits - 1 - q) & 1 == 0 {
                            BlochVector::PLUS_Z
                        } else {
                            BlochVector::MINUS_Z
                        }
                    })
                    .collect();
                EnsembleTerm::new(p, vectors, Some("identity"))
            })
            .collect();
        Self { qubits, terms }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn terms(&self) -> &[EnsembleTerm] {
        &self.terms
    }

    pub fn mixture(&self) -> DenseOperator {
        let mut rho = DenseOperator::zeros(self.qubits);
        for t in &self.terms {
            rho.add_scaled(t.probability, &t.projector())
                .expect("same dimension");
        }
        rho
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(domain(format!("mixing weight {weight} outside [0, 1]")));
        }
        if other.qubits != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                found: other.qubits,
            });
        }
        let terms = [(self, weight), (other, 1.0 - weight)]
            .into_iter()
            .flat_map(|(e, w)| {
                e.terms.iter().map(move |t| EnsembleTerm {
                    probability: w * t.probability,
                    ..t.clone()
                })
            })
            .collect();
        Self::new(self.qubits, terms)
    }

    /// Admixture with [`maximally_mixed`](Self::maximally_mixed): scales the
    /// non-identity part of the mixture by `weight`.
    pub fn diluted(&self, weight: f64) -> Result<Self> {
        self.mix(&Self::maximally_mixed(self.qubits), weight)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let e: Self = serde_json::from_str(s)?;
        e.validate()?;
        Ok(e)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json_str(&s)
    }
}

/// Equal mixture of `(+-z,+-z)`, `(+-x,+-x)` and `(+-y,-+y)`: the Werner state
/// at `eps = 1/3`.
pub fn werner_ensemble() -> ProductEnsemble {
    use BlochVector as B;
    let pairs = [
        ("rho1", B::PLUS_Z, B::PLUS_Z),
        ("rho1", B::MINUS_Z, B::MINUS_Z),
        ("rho2", B::PLUS_X, B::PLUS_X),
        ("rho2", B::MINUS_X, B::MINUS_X),
        ("rho3", B::PLUS_Y, B::MINUS_Y),
        ("rho3", B::MINUS_Y, B::PLUS_Y),
    ];
    let terms = pairs
        .iter()
        .map(|&(label, a, b)| EnsembleTerm::new(1.0 / 6.0, vec![a, b], Some(label)))
        .collect();
    ProductEnsemble { qubits: 2, terms }
}

/// 18 cardinal-direction product terms whose mixture is the eps-GHZ state at
/// `eps = 1/5`.
pub fn ghz_ensemble() -> ProductEnsemble {
    use BlochVector as B;
    let (px, mx, py, my, pz, mz) = (
        B::PLUS_X,
        B::MINUS_X,
        B::PLUS_Y,
        B::MINUS_Y,
        B::PLUS_Z,
        B::MINUS_Z,
    );
    let mut terms = vec![
        EnsembleTerm::new(0.1, vec![pz, pz, pz], Some("rho1")),
        EnsembleTerm::new(0.1, vec![mz, mz, mz], Some("rho1")),
    ];
    let groups = [
        (
            "rho2",
            [[px, px, px], [px, mx, mx], [mx, px, mx], [mx, mx, px]],
        ),
        (
            "rho3",
            [[px, py, my], [px, my, py], [mx, py, py], [mx, my, my]],
        ),
        (
            "rho4",
            [[py, px, my], [my, px, py], [py, mx, py], [my, mx, my]],
        ),
        (
            "rho5",
            [[py, my, px], [my, py, px], [py, py, mx], [my, my, mx]],
        ),
    ];
    for (label, triples) in groups {
        for t in triples {
            terms.push(EnsembleTerm::new(0.05, t.to_vec(), Some(label)));
        }
    }
    ProductEnsemble { qubits: 3, terms }
}

/// Accumulates ensemble probabilities onto the frame multi-indices of their
/// vectors.
pub fn ensemble_to_table(e: &ProductEnsemble, frames: &[Frame]) -> Result<DiscreteTable> {
    if frames.len() != e.qubits() {
        return Err(Error::DimensionMismatch {
            expected: e.qubits(),
            found: frames.len(),
        });
    }
    let mut table = DiscreteTable::zeros(frames.to_vec())?;
    for t in e.terms() {
        let idx = t
            .vectors
            .iter()
            .zip(frames)
            .enumerate()
            .map(|(qubit, (v, f))| {
                f.vertex_index(v, VERTEX_TOL).ok_or(Error::NotAFrameVertex {
                    qubit,
                    x: v.x,
                    y: v.y,
                    z: v.z,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        table.add_at(&idx, t.probability)?;
    }
    Ok(table)
}
