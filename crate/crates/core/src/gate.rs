//! Reversible gate model: NOT, CNOT and Fredkin gates over 1-indexed qubits,
//! circuits built from them, and the two basic boosting circuits.
//!
//! Every gate is an involution on computational basis states, so a circuit is
//! a permutation of `{0,1}^n` and its inverse is the reversed gate list.

use std::fmt;

use crate::error::{Error, Result};

/// A single reversible gate. Qubit indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not(usize),
    Cnot { control: usize, target: usize },
    /// Swaps `a` and `b` when `control` is 1.
    Fredkin { a: usize, b: usize, control: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Not(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Fredkin { a, b, control } => vec![a, b, control],
        }
    }

    /// Checks that indices are in `1..=width` and pairwise distinct.
    pub fn validate(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        for (k, &q) in qs.iter().enumerate() {
            if q == 0 || q > width {
                return Err(Error::IndexOutOfRange { index: q, width });
            }
            if qs[..k].contains(&q) {
                return Err(Error::DuplicateIndex(q));
            }
        }
        Ok(())
    }

    /// Applies the gate to a bit row where `bits[0]` is qubit 1.
    pub fn apply_bits(&self, bits: &mut [bool]) {
        match *self {
            Gate::Not(q) => bits[q - 1] = !bits[q - 1],
            Gate::Cnot { control, target } => {
                if bits[control - 1] {
                    bits[target - 1] = !bits[target - 1];
                }
            }
            Gate::Fredkin { a, b, control } => {
                if bits[control - 1] {
                    bits.swap(a - 1, b - 1);
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Not(q) => write!(f, "X({q})"),
            Gate::Cnot { control, target } => write!(f, "CN({control},{target})"),
            Gate::Fredkin { a, b, control } => write!(f, "Fr({a} {b}, {control})"),
        }
    }
}

/// The three-qubit boosting permutation on `(a, b, c)`.
///
/// | in  | out |
/// |-----|-----|
/// | 000 | 000 |
/// | 001 | 001 |
/// | 010 | 011 |
/// | 011 | 100 |
/// | 100 | 010 |
/// | 101 | 101 |
/// | 110 | 111 |
/// | 111 | 110 |
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicBoostA {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl BasicBoostA {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        Self { a, b, c }
    }

    pub fn gates(&self) -> [Gate; 4] {
        let Self { a, b, c } = *self;
        [
            Gate::Cnot { control: b, target: c },
            Gate::Not(c),
            Gate::Fredkin { a, b, control: c },
            Gate::Not(c),
        ]
    }
}

/// Bias inversion of the middle qubit, applied after [`BasicBoostA`] when its
/// bias went negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicBoostB {
    pub b: usize,
}

impl BasicBoostB {
    pub fn gates(&self) -> [Gate; 1] {
        [Gate::Not(self.b)]
    }
}

/// An ordered gate list over `width` qubits.
///
/// `layer_marks` records where generator depth steps end; they only affect
/// serialization (one layer per line), never semantics.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    layer_marks: Vec<usize>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            layer_marks: Vec::new(),
        }
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Closes the current layer. Empty layers are not recorded.
    pub fn end_layer(&mut self) {
        let len = self.gates.len();
        if len > 0 && self.layer_marks.last() != Some(&len) {
            self.layer_marks.push(len);
        }
    }

    /// Layer end positions, excluding a mark at the very end of the circuit.
    pub fn layer_marks(&self) -> Vec<usize> {
        self.layer_marks
            .iter()
            .copied()
            .filter(|&m| m < self.gates.len())
            .collect()
    }

    /// Gate slices, one per layer. A trailing unclosed run of gates forms
    /// the last layer.
    pub fn layers(&self) -> Vec<&[Gate]> {
        let mut out = Vec::new();
        let mut start = 0;
        for &m in &self.layer_marks {
            if m > start {
                out.push(&self.gates[start..m]);
                start = m;
            }
        }
        if start < self.gates.len() {
            out.push(&self.gates[start..]);
        }
        out
    }

    /// The inverse permutation: gates in reverse order.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().copied().collect(),
            layer_marks: Vec::new(),
        }
    }

    /// Reference semantics: permutes a bit row where `input[0]` is qubit 1.
    pub fn apply_to_bitstring(&self, input: &[bool]) -> Result<Vec<bool>> {
        if input.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: input.len(),
            });
        }
        let mut bits = input.to_vec();
        for g in &self.gates {
            g.apply_bits(&mut bits);
        }
        Ok(bits)
    }

    /// Same permutation acting on a basis index whose most significant of
    /// `width` bits is qubit 1.
    pub fn apply_to_index(&self, k: u64) -> u64 {
        let n = self.width;
        let mut bits: Vec<bool> = (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect();
        for g in &self.gates {
            g.apply_bits(&mut bits);
        }
        bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width
            && self.gates == other.gates
            && self.layer_marks() == other.layer_marks()
    }
}

impl Eq for Circuit {}

/// Parses a string of `0`/`1` characters into a bit row.
pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!("not a bit: {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: [(&str, &str, &str); 8] = [
        ("000", "000", "010"),
        ("001", "001", "011"),
        ("010", "011", "001"),
        ("011", "100", "110"),
        ("100", "010", "000"),
        ("101", "101", "111"),
        ("110", "111", "101"),
        ("111", "110", "100"),
    ];

    fn boost_a() -> Circuit {
        Circuit::from_gates(3, BasicBoostA::new(1, 2, 3).gates()).unwrap()
    }

    #[test]
    fn boost_a_matches_truth_table() {
        let c = boost_a();
        for (input, out_a, _) in TABLE1 {
            let got = c.apply_to_bitstring(&bits_from_str(input).unwrap()).unwrap();
            assert_eq!(bits_to_string(&got), out_a, "input {input}");
        }
    }

    #[test]
    fn boost_a_then_b_matches_truth_table() {
        let mut c = boost_a();
        c.extend(BasicBoostB { b: 2 }.gates()).unwrap();
        for (input, _, out_b) in TABLE1 {
            let got = c.apply_to_bitstring(&bits_from_str(input).unwrap()).unwrap();
            assert_eq!(bits_to_string(&got), out_b, "input {input}");
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(5);
        let x = bits_from_str("10110").unwrap();
        assert_eq!(c.apply_to_bitstring(&x).unwrap(), x);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let c = boost_a();
        assert!(matches!(
            c.apply_to_bitstring(&[false, true]),
            Err(Error::WidthMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn invalid_gates_are_rejected() {
        let mut c = Circuit::new(3);
        assert_eq!(
            c.push(Gate::Not(4)),
            Err(Error::IndexOutOfRange { index: 4, width: 3 })
        );
        assert_eq!(c.push(Gate::Not(0)), Err(Error::IndexOutOfRange { index: 0, width: 3 }));
        assert_eq!(
            c.push(Gate::Fredkin { a: 1, b: 2, control: 1 }),
            Err(Error::DuplicateIndex(1))
        );
    }

    #[test]
    fn inverse_undoes_circuit() {
        let c = boost_a();
        let inv = c.inverse();
        for k in 0..8u64 {
            assert_eq!(inv.apply_to_index(c.apply_to_index(k)), k);
        }
    }

    #[test]
    fn index_and_bitstring_semantics_agree() {
        let c = boost_a();
        for (input, out_a, _) in TABLE1 {
            let k = u64::from_str_radix(input, 2).unwrap();
            assert_eq!(c.apply_to_index(k), u64::from_str_radix(out_a, 2).unwrap());
        }
    }

    #[test]
    fn layers_split_at_marks() {
        let mut c = Circuit::new(3);
        c.push(Gate::Not(1)).unwrap();
        c.end_layer();
        c.end_layer();
        c.push(Gate::Not(2)).unwrap();
        c.push(Gate::Not(3)).unwrap();
        c.end_layer();
        assert_eq!(c.layers().len(), 2);
        assert_eq!(c.layer_marks(), vec![1]);
    }
}
