//! Exact diagonal density-matrix simulation.
//!
//! A state is the vector of `2^n` populations `c_k`; basis index `k` holds
//! qubit 1 in its most significant bit. Gates act as pairwise swaps of
//! populations, implemented here directly on the index bits, independently of
//! the bit-string semantics in [`crate::gate`].

use crate::analytics::{entropy_of_bias, xlog2x};
use crate::bias::BiasVector;
use crate::error::{invalid, Error, Result};
use crate::gate::{Circuit, Gate};

pub const DEFAULT_CAPACITY: usize = 20;
const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector {
    n: usize,
    c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMarginal {
    /// Probability that the qubit reads 0.
    pub p_zero: f64,
    /// Superficial bias `2P − 1`.
    pub bias: f64,
    /// Intrinsic bias: the eigenvalue gap of the reduced state, `|2P − 1|`
    /// for diagonal states.
    pub intrinsic: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// von Neumann entropy `S`.
    pub entropy: f64,
    /// Effective entropy `S_e`, the sum of single-qubit entropies.
    pub effective: f64,
    pub total_correlation: f64,
}

impl PopulationVector {
    pub fn new(n: usize, c: Vec<f64>) -> Result<Self> {
        Self::with_capacity(n, c, DEFAULT_CAPACITY)
    }

    pub fn with_capacity(n: usize, c: Vec<f64>, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::Capacity { width: n, cap });
        }
        if c.len() != 1usize << n {
            return Err(invalid(format!("{} populations for {n} qubits", c.len())));
        }
        if c.iter().any(|&x| !(x >= 0.0)) {
            return Err(invalid("populations must be nonnegative"));
        }
        let total: f64 = c.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("populations sum to {total}, not 1")));
        }
        Ok(Self { n, c })
    }

    /// Thermal product state: `c_k = Π_i (1 ± ε_i) / 2`.
    pub fn product_state(biases: &BiasVector) -> Result<Self> {
        let n = biases.len();
        if n > DEFAULT_CAPACITY {
            return Err(Error::Capacity {
                width: n,
                cap: DEFAULT_CAPACITY,
            });
        }
        let mut c = vec![1.0f64];
        for &eps in biases.as_slice() {
            let (p0, p1) = ((1.0 + eps) / 2.0, (1.0 - eps) / 2.0);
            c = c.iter().flat_map(|&x| [x * p0, x * p1]).collect();
        }
        Ok(Self { n, c })
    }

    /// The basis state `|k⟩`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        let mut c = vec![0.0; 1 << n];
        *c.get_mut(k).ok_or_else(|| invalid("basis index out of range"))? = 1.0;
        Self::new(n, c)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn populations(&self) -> &[f64] {
        &self.c
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - q)
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        let len = self.c.len();
        match gate {
            Gate::Not(q) => {
                let m = self.mask(q);
                for k in (0..len).filter(|k| k & m == 0) {
                    self.c.swap(k, k | m);
                }
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (self.mask(control), self.mask(target));
                for k in (0..len).filter(|k| k & mc != 0 && k & mt == 0) {
                    self.c.swap(k, k | mt);
                }
            }
            Gate::Fredkin { a, b, control } => {
                let (ma, mb, mc) = (self.mask(a), self.mask(b), self.mask(control));
                for k in (0..len).filter(|k| k & mc != 0 && k & ma != 0 && k & mb == 0) {
                    self.c.swap(k, (k & !ma) | mb);
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                actual: circuit.width(),
            });
        }
        for &g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Probability that qubit `i` (1-based) reads 0.
    pub fn p_zero(&self, i: usize) -> f64 {
        let m = self.mask(i);
        self.c
            .iter()
            .enumerate()
            .filter(|(k, _)| k & m == 0)
            .map(|(_, &x)| x)
            .sum()
    }

    pub fn marginal(&self, i: usize) -> Result<QubitMarginal> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                width: self.n,
            });
        }
        let p_zero = self.p_zero(i);
        let bias = 2.0 * p_zero - 1.0;
        // eigenvalues of diag(P, 1 − P), sorted descending
        let (hi, lo) = if p_zero >= 0.5 {
            (p_zero, 1.0 - p_zero)
        } else {
            (1.0 - p_zero, p_zero)
        };
        let intrinsic = (hi - lo) / (hi + lo);
        Ok(QubitMarginal {
            p_zero,
            bias,
            intrinsic,
            entropy: entropy_of_bias(intrinsic),
        })
    }

    pub fn marginals(&self) -> Vec<QubitMarginal> {
        (1..=self.n).map(|i| self.marginal(i).expect("in range")).collect()
    }

    pub fn biases(&self) -> Vec<f64> {
        (1..=self.n).map(|i| 2.0 * self.p_zero(i) - 1.0).collect()
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        self.c.iter().map(|&x| xlog2x(x)).sum()
    }

    pub fn entropies(&self) -> Result<EntropyReport> {
        let total: f64 = self.c.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("populations sum to {total}, not 1")));
        }
        let entropy = self.von_neumann_entropy();
        let effective: f64 = self.marginals().iter().map(|m| m.entropy).sum();
        Ok(EntropyReport {
            entropy,
            effective,
            total_correlation: effective - entropy,
        })
    }

    /// Relative entropy of the state with respect to the product of its
    /// single-qubit marginals, `Σ c_k log₂(c_k / Π_i marg_i(k))`.
    pub fn relative_entropy_to_product(&self) -> f64 {
        let p: Vec<f64> = (1..=self.n).map(|i| self.p_zero(i)).collect();
        let mut total = 0.0;
        for (k, &ck) in self.c.iter().enumerate() {
            if ck <= 0.0 {
                continue;
            }
            let mut q = 1.0;
            for (i, &pi) in p.iter().enumerate() {
                let bit = (k >> (self.n - 1 - i)) & 1;
                q *= if bit == 0 { pi } else { 1.0 - pi };
            }
            total += ck * (ck / q).log2();
        }
        total
    }

    pub fn joint_zero_probability(&self, qubits: &[usize]) -> Result<f64> {
        let mut m = 0usize;
        for &q in qubits {
            if q == 0 || q > self.n {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    width: self.n,
                });
            }
            if m & self.mask(q) != 0 {
                return Err(Error::DuplicateIndex(q));
            }
            m |= self.mask(q);
        }
        Ok(self
            .c
            .iter()
            .enumerate()
            .filter(|(k, _)| k & m == 0)
            .map(|(_, &x)| x)
            .sum())
    }

    /// Probability that qubits `i` and `j` both read 0.
    pub fn pair_zero_probability(&self, i: usize, j: usize) -> Result<f64> {
        self.joint_zero_probability(&[i, j])
    }
}
