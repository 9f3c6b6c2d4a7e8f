use std::io::{Read, Write};

use super::{mode_product, pauli_coefficients, PauliCoefficients};
use crate::error::{domain, Error, Result};
use crate::frames::Frame;
use crate::operator::{pauli, trace_inner, DenseOperator};

/// Expansion weights over products of frame projectors, one frame per qubit.
/// Weights are stored row-major over the multi-index with qubit 0's frame
/// index most significant.
#[derive(Clone, Debug)]
pub struct DiscreteTable {
    frames: Vec<Frame>,
    weights: Vec<f64>,
}

/// A representation of an operator as a mixture of product projectors.
#[derive(Clone, Debug)]
pub enum CoefficientTable {
    Discrete(DiscreteTable),
    /// The canonical continuous expansion function, evaluated lazily from
    /// the Pauli coefficients.
    Continuous(PauliCoefficients),
}

impl CoefficientTable {
    pub fn qubits(&self) -> usize {
        match self {
            CoefficientTable::Discrete(t) => t.qubits(),
            CoefficientTable::Continuous(c) => c.qubits(),
        }
    }

    pub fn as_discrete(&self) -> Option<&DiscreteTable> {
        match self {
            CoefficientTable::Discrete(t) => Some(t),
            CoefficientTable::Continuous(_) => None,
        }
    }
}

impl DiscreteTable {
    pub fn new(frames: Vec<Frame>, weights: Vec<f64>) -> Result<Self> {
        if frames.is_empty() {
            return Err(domain("table needs at least one frame"));
        }
        let len: usize = frames.iter().map(Frame::len).product();
        if weights.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: weights.len(),
            });
        }
        Ok(Self { frames, weights })
    }

    pub fn zeros(frames: Vec<Frame>) -> Result<Self> {
        let len = frames.iter().map(Frame::len).product();
        Self::new(frames, vec![0.0; len])
    }

    pub fn qubits(&self) -> usize {
        self.frames.len()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn shape(&self) -> Vec<usize> {
        self.frames.iter().map(Frame::len).collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.frames.len() {
            return Err(domain("multi-index length differs from qubit count"));
        }
        let mut flat = 0;
        for (i, f) in idx.iter().zip(&self.frames) {
            if *i >= f.len() {
                return Err(domain(format!("frame index {i} out of range {}", f.len())));
            }
            flat = flat * f.len() + i;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.frames.len()];
        for (q, f) in self.frames.iter().enumerate().rev() {
            idx[q] = flat % f.len();
            flat /= f.len();
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.weights[self.flat_index(idx)?])
    }

    pub(crate) fn add_at(&mut self, idx: &[usize], w: f64) -> Result<()> {
        let i = self.flat_index(idx)?;
        self.weights[i] += w;
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(|(flat, &w)| (self.multi_index(flat), w))
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Writes `idx_1,...,idx_N,weight` rows (0-based frame indices), preceded
    /// by `#` comment lines when `comments` is non-empty.
    pub fn write_csv<W: Write>(&self, mut out: W, comments: &[String]) -> Result<()> {
        for c in comments {
            writeln!(out, "# {c}").map_err(|e| Error::Parse(e.to_string()))?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.qubits()).map(|i| format!("idx_{i}")).collect();
        header.push("weight".into());
        w.write_record(&header)?;
        for (idx, weight) in self.entries() {
            let mut rec: Vec<String> = idx.iter().map(usize::to_string).collect();
            rec.push(weight.to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }

    /// Reads a table written by [`write_csv`](Self::write_csv); unlisted
    /// entries are zero.
    pub fn read_csv<R: Read>(input: R, frames: Vec<Frame>) -> Result<Self> {
        let mut table = Self::zeros(frames)?;
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(input);
        let n = table.qubits();
        if rdr.headers()?.len() != n + 1 {
            return Err(Error::Parse(format!("expected {} CSV columns", n + 1)));
        }
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
            };
            let idx = rec
                .iter()
                .take(n)
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.add_at(&idx, parse(&rec[n])?)?;
        }
        Ok(table)
    }
}

/// `w(a_1..a_N) = tr(rho Q_{a_1} x ... x Q_{a_N})` over the given per-qubit
/// frames.
pub fn wcan_discrete(rho: &DenseOperator, frames: &[Frame]) -> Result<DiscreteTable> {
    if frames.len() != rho.qubits() {
        return Err(domain(format!(
            "{} frames given for a {}-qubit operator",
            frames.len(),
            rho.qubits()
        )));
    }
    wcan_discrete_from_pauli(&pauli_coefficients(rho)?, frames)
}

/// Same as [`wcan_discrete`], from Pauli coefficients: each dual expands as
/// `Q = (1/2) sum_b tr(sigma_b Q) sigma_b`, so the table is the Pauli tensor
/// contracted with one `K_i x 4` matrix per qubit.
pub fn wcan_discrete_from_pauli(c: &PauliCoefficients, frames: &[Frame]) -> Result<DiscreteTable> {
    if frames.len() != c.qubits() {
        return Err(domain(format!(
            "{} frames given for {} qubits",
            frames.len(),
            c.qubits()
        )));
    }
    let sigmas: Vec<DenseOperator> = (0..4).map(|b| pauli(b).unwrap()).collect();
    let mut data = c.as_slice().to_vec();
    let mut dims = vec![4; frames.len()];
    for (axis, frame) in frames.iter().enumerate() {
        let m: Vec<Vec<f64>> = frame
            .duals()
            .iter()
            .map(|q| {
                sigmas
                    .iter()
                    .map(|s| 0.5 * trace_inner(s, q).unwrap().re)
                    .collect()
            })
            .collect();
        data = mode_product(&data, &mut dims, axis, &m);
    }
    DiscreteTable::new(frames.to_vec(), data)
}

/// `sum_idx w(idx) P_{idx_1} x ... x P_{idx_N}`.
pub fn reconstruct_discrete(table: &DiscreteTable) -> DenseOperator {
    // P_a = (1/2) sum_b (1, n_a)_b sigma_b
    let mut data = table.weights.clone();
    let mut dims = table.shape();
    for (axis, frame) in table.frames.iter().enumerate() {
        let m: Vec<Vec<f64>> = (0..4)
            .map(|b| frame.vectors().iter().map(|v| v.component(b)).collect())
            .collect();
        data = mode_product(&data, &mut dims, axis, &m);
    }
    PauliCoefficients::from_values(table.qubits(), data)
        .expect("4^N Pauli components")
        .to_operator()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::FrameKind;
    use crate::operator::BlochVector;

    #[test]
    fn up_state_cardinal_table() {
        let rho = BlochVector::PLUS_Z.projector();
        let t = wcan_discrete(&rho, &[Frame::cardinal6()]).unwrap();
        let expected = [
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            2.0 / 3.0,
            -1.0 / 3.0,
        ];
        for (w, e) in t.weights().iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
        assert!(reconstruct_discrete(&t).max_abs_diff(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn maximally_mixed_tables() {
        let frames = vec![Frame::cardinal6(); 2];
        let t = wcan_discrete(&DenseOperator::maximally_mixed(2), &frames).unwrap();
        assert_eq!(t.len(), 36);
        assert!(t.weights().iter().all(|w| (w - 1.0 / 36.0).abs() < 1e-16));

        let uniform = DiscreteTable::new(vec![Frame::cardinal6()], vec![1.0 / 6.0; 6]).unwrap();
        let half = reconstruct_discrete(&uniform);
        assert!(
            half.max_abs_diff(&DenseOperator::maximally_mixed(1))
                .unwrap()
                < 1e-16
        );

        let tet = Frame::polyhedron(FrameKind::Tetrahedron).unwrap();
        let t = wcan_discrete(&DenseOperator::maximally_mixed(1), &[tet]).unwrap();
        assert!(t.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
    }

    #[test]
    fn frame_count_must_match() {
        assert!(wcan_discrete(&DenseOperator::maximally_mixed(2), &[Frame::cardinal6()]).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let rho = BlochVector::from_angles(0.4, 1.3).projector();
        let t = wcan_discrete(&rho, &[Frame::cardinal6()]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, &["test table".into()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# test table\nidx_1,weight\n"));
        let back = DiscreteTable::read_csv(&buf[..], vec![Frame::cardinal6()]).unwrap();
        for (a, b) in back.weights().iter().zip(t.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
