#![allow(dead_code)]

use std::path::PathBuf;

use svboost::rng::mix64;
use svboost::{Circuit, Gate};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Small deterministic generator for test inputs.
pub struct Draw(u64);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.0)
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.next() % k as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let q = self.below(n) + 1;
            if !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    pub fn gate(&mut self, n: usize) -> Gate {
        match self.below(3) {
            0 => Gate::Not(self.below(n) + 1),
            1 => {
                let q = self.distinct(n, 2);
                Gate::Cnot { control: q[0], target: q[1] }
            }
            _ => {
                let q = self.distinct(n, 3);
                Gate::Fredkin { a: q[0], b: q[1], control: q[2] }
            }
        }
    }

    pub fn circuit(&mut self, n: usize, len: usize) -> Circuit {
        Circuit::from_gates(n, (0..len).map(|_| self.gate(n))).unwrap()
    }

    /// Random normalized population vector over `2^n` states, with some
    /// exact zeros.
    pub fn populations(&mut self, n: usize) -> Vec<f64> {
        let mut c: Vec<f64> = (0..1usize << n)
            .map(|_| if self.below(5) == 0 { 0.0 } else { self.unit() })
            .collect();
        c[0] += 1e-3;
        let total: f64 = c.iter().sum();
        c.iter_mut().for_each(|x| *x /= total);
        c
    }
}
