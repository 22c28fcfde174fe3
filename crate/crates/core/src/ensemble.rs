//! The virtual molecular system: `N` molecules of `n` spins stored as `n`
//! bit-planes of `N` bits each.
//!
//! Plane `i` holds bit `i` of every molecule, so gates become word-wide
//! boolean maps over whole planes and biases become popcounts. Bits past `N`
//! in the last word of each plane are always zero.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::bias::BiasVector;
use crate::error::{invalid, Error, Result};
use crate::gate::{Circuit, Gate};
use crate::rng::StreamKey;

const DUMP_MAGIC: &[u8; 8] = b"SVBPLN01";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularEnsemble {
    n: usize,
    molecules: usize,
    seed: u64,
    planes: Vec<Vec<u64>>,
}

fn words_for(molecules: usize) -> usize {
    molecules.div_ceil(64)
}

fn tail_mask(molecules: usize) -> u64 {
    match molecules % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl MolecularEnsemble {
    /// Draws every spin independently: bit `(m, i)` is 0 iff
    /// `frand(seed, m, i) < (1 + ε_i) / 2`.
    pub fn create(biases: &BiasVector, molecules: usize, seed: u64) -> Result<Self> {
        if molecules == 0 {
            return Err(invalid("molecule count must be at least 1"));
        }
        let words = words_for(molecules);
        let planes = biases
            .as_slice()
            .par_iter()
            .enumerate()
            .map(|(i, &eps)| {
                let key = StreamKey::new(seed, i + 1);
                let p_zero = (1.0 + eps) / 2.0;
                let mut plane = vec![0u64; words];
                for (w, word) in plane.iter_mut().enumerate() {
                    let base = (w * 64) as u64;
                    let count = 64.min(molecules - w * 64);
                    let mut bits = 0u64;
                    for k in 0..count {
                        if key.uniform(base + k as u64) >= p_zero {
                            bits |= 1 << k;
                        }
                    }
                    *word = bits;
                }
                plane
            })
            .collect();
        Ok(Self {
            n: biases.len(),
            molecules,
            seed,
            planes,
        })
    }

    /// Builds an ensemble from explicit molecule rows (`rows[m][i-1]` is
    /// spin `i` of molecule `m`).
    pub fn from_rows(n: usize, rows: &[Vec<bool>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("molecule count must be at least 1"));
        }
        let mut planes = vec![vec![0u64; words_for(rows.len())]; n];
        for (m, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            for (i, &bit) in row.iter().enumerate() {
                if bit {
                    planes[i][m / 64] |= 1 << (m % 64);
                }
            }
        }
        Ok(Self {
            n,
            molecules: rows.len(),
            seed: 0,
            planes,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn molecules(&self) -> usize {
        self.molecules
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Raw words of plane `i` (1-based).
    pub fn plane(&self, i: usize) -> &[u64] {
        &self.planes[i - 1]
    }

    pub fn row(&self, m: usize) -> Vec<bool> {
        self.planes
            .iter()
            .map(|p| (p[m / 64] >> (m % 64)) & 1 == 1)
            .collect()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange {
                index: i,
                width: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        let mask = tail_mask(self.molecules);
        match gate {
            Gate::Not(q) => {
                not_plane(&mut self.planes[q - 1], mask);
            }
            Gate::Cnot { control, target } => {
                let [c, t] = self
                    .planes
                    .get_disjoint_mut([control - 1, target - 1])
                    .expect("validated distinct");
                for (t, c) in t.iter_mut().zip(c.iter()) {
                    *t ^= *c;
                }
            }
            Gate::Fredkin { a, b, control } => {
                let [a, b, c] = self
                    .planes
                    .get_disjoint_mut([a - 1, b - 1, control - 1])
                    .expect("validated distinct");
                for ((a, b), c) in a.iter_mut().zip(b.iter_mut()).zip(c.iter()) {
                    let t = (*a ^ *b) & *c;
                    *a ^= t;
                    *b ^= t;
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

    /// Number of molecules whose spin `i` is 0.
    pub fn zero_count(&self, i: usize) -> u64 {
        self.molecules as u64 - ones(&self.planes[i - 1])
    }

    /// `ε_i = 2 · zeros / N − 1`.
    pub fn update_bias(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        Ok(bias_from_zeros(self.zero_count(i), self.molecules))
    }

    pub fn biases(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|i| bias_from_zeros(self.zero_count(i), self.molecules))
            .collect()
    }

    /// Count of molecules whose listed spins are all 0.
    pub fn joint_zero_count(&self, qubits: &[usize]) -> Result<u64> {
        for (k, &q) in qubits.iter().enumerate() {
            self.check(q)?;
            if qubits[..k].contains(&q) {
                return Err(Error::DuplicateIndex(q));
            }
        }
        if qubits.is_empty() {
            return Ok(self.molecules as u64);
        }
        let mut acc = vec![0u64; words_for(self.molecules)];
        for &q in qubits {
            for (a, w) in acc.iter_mut().zip(&self.planes[q - 1]) {
                *a |= *w;
            }
        }
        Ok(self.molecules as u64 - ones(&acc))
    }

    pub fn joint_zero_probability(&self, qubits: &[usize]) -> Result<f64> {
        Ok(self.joint_zero_count(qubits)? as f64 / self.molecules as f64)
    }

    /// Joint zero counts for every prefix of `order`: entry `l` is the count
    /// for the first `l` qubits (entry 0 is `N`).
    pub fn prefix_joint_zero_counts(&self, order: &[usize]) -> Vec<u64> {
        let mut acc = vec![0u64; words_for(self.molecules)];
        let mut out = Vec::with_capacity(order.len() + 1);
        out.push(self.molecules as u64);
        for &q in order {
            for (a, w) in acc.iter_mut().zip(&self.planes[q - 1]) {
                *a |= *w;
            }
            out.push(self.molecules as u64 - ones(&acc));
        }
        out
    }

    /// Copies the listed planes.
    pub fn snapshot(&self, qubits: &[usize]) -> Result<Snapshot> {
        for &q in qubits {
            self.check(q)?;
        }
        Ok(Snapshot {
            n: self.n,
            molecules: self.molecules,
            planes: qubits
                .iter()
                .map(|&q| (q, self.planes[q - 1].clone()))
                .collect(),
        })
    }

    pub fn snapshot_all(&self) -> Snapshot {
        let all: Vec<usize> = (1..=self.n).collect();
        self.snapshot(&all).expect("all indices valid")
    }

    pub fn restore(&mut self, snap: &Snapshot) -> Result<()> {
        if snap.n != self.n || snap.molecules != self.molecules {
            return Err(Error::SnapshotMismatch);
        }
        for (q, plane) in &snap.planes {
            self.planes[q - 1].copy_from_slice(plane);
        }
        Ok(())
    }

    /// Mutable access to three distinct planes.
    pub fn trio_mut(&mut self, a: usize, b: usize, c: usize) -> Result<TrioPlanes<'_>> {
        Gate::Fredkin { a, b, control: c }.validate(self.n)?;
        let mask = tail_mask(self.molecules);
        let [pa, pb, pc] = self
            .planes
            .get_disjoint_mut([a - 1, b - 1, c - 1])
            .expect("validated distinct");
        Ok(TrioPlanes {
            a: pa,
            b: pb,
            c: pc,
            tail_mask: mask,
        })
    }

    /// Runs `f(k, planes)` on each trio `k` of a pairwise-disjoint set, in
    /// parallel. Results come back in the order of `trios`.
    pub fn par_trios<F, R>(&mut self, trios: &[[usize; 3]], f: F) -> Result<Vec<R>>
    where
        F: Fn(usize, TrioPlanes<'_>) -> R + Sync + Send,
        R: Send,
    {
        let mask = tail_mask(self.molecules);
        let mut slots: Vec<Option<&mut Vec<u64>>> = self.planes.iter_mut().map(Some).collect();
        let mut views = Vec::with_capacity(trios.len());
        for &[a, b, c] in trios {
            Gate::Fredkin { a, b, control: c }.validate(self.n)?;
            let mut take = |q: usize| {
                slots[q - 1]
                    .take()
                    .ok_or_else(|| invalid(format!("qubit {q} appears in two trios")))
            };
            views.push(TrioPlanes {
                a: take(a)?,
                b: take(b)?,
                c: take(c)?,
                tail_mask: mask,
            });
        }
        Ok(views
            .into_par_iter()
            .enumerate()
            .map(|(k, v)| f(k, v))
            .collect())
    }

    /// Writes a debugging dump: magic, `n`, `N`, seed, then every plane as
    /// little-endian words.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(DUMP_MAGIC)?;
        for v in [self.n as u64, self.molecules as u64, self.seed] {
            w.write_all(&v.to_le_bytes())?;
        }
        for plane in &self.planes {
            for word in plane {
                w.write_all(&word.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(invalid("not a plane dump"));
        }
        let mut word = || -> Result<u64> {
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf)?;
            Ok(u64::from_le_bytes(buf))
        };
        let n = word()? as usize;
        let molecules = word()? as usize;
        let seed = word()?;
        if molecules == 0 {
            return Err(invalid("dump has zero molecules"));
        }
        let mut planes = Vec::with_capacity(n);
        for _ in 0..n {
            let plane = (0..words_for(molecules))
                .map(|_| word())
                .collect::<Result<Vec<_>>>()?;
            planes.push(plane);
        }
        Ok(Self {
            n,
            molecules,
            seed,
            planes,
        })
    }
}

/// Saved copies of some planes, restorable onto an ensemble of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    n: usize,
    molecules: usize,
    planes: Vec<(usize, Vec<u64>)>,
}

/// Three disjoint planes of one ensemble, in `(a, b, c)` roles.
pub struct TrioPlanes<'a> {
    a: &'a mut [u64],
    b: &'a mut [u64],
    c: &'a mut [u64],
    tail_mask: u64,
}

impl TrioPlanes<'_> {
    /// One pass of the three-qubit boosting permutation
    /// (`CN(b,c); X(c); Fr(a b, c); X(c)`). Returns the one-counts of the
    /// a, b and c planes afterwards.
    pub fn boost(&mut self) -> [u64; 3] {
        let mut ones = [0u64; 3];
        for ((a, b), c) in self.a.iter_mut().zip(self.b.iter_mut()).zip(self.c.iter_mut()) {
            let cx = *b ^ *c;
            let t = (*a ^ *b) & !cx;
            *a ^= t;
            *b ^= t;
            *c = cx;
            ones[0] += a.count_ones() as u64;
            ones[1] += b.count_ones() as u64;
            ones[2] += c.count_ones() as u64;
        }
        ones
    }

    /// Inverse of [`boost`](Self::boost).
    pub fn unboost(&mut self) {
        for ((a, b), c) in self.a.iter_mut().zip(self.b.iter_mut()).zip(self.c.iter_mut()) {
            let t = (*a ^ *b) & !*c;
            *a ^= t;
            *b ^= t;
            *c ^= *b;
        }
    }

    /// NOT on the b plane. Returns its new one-count.
    pub fn flip_b(&mut self) -> u64 {
        not_plane(self.b, self.tail_mask)
    }
}

fn not_plane(plane: &mut [u64], tail_mask: u64) -> u64 {
    let mut count = 0u64;
    for w in plane.iter_mut() {
        *w = !*w;
    }
    if let Some(last) = plane.last_mut() {
        *last &= tail_mask;
    }
    for w in plane.iter() {
        count += w.count_ones() as u64;
    }
    count
}

fn ones(plane: &[u64]) -> u64 {
    plane.iter().map(|w| w.count_ones() as u64).sum()
}

pub fn bias_from_zeros(zeros: u64, molecules: usize) -> f64 {
    2.0 * zeros as f64 / molecules as f64 - 1.0
}
