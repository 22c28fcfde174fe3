use std::fs;
use std::time::{Duration, Instant};

use super::config::RunConfig;
use super::table::{f, opt, Table};
use crate::analytics::{effective_entropy, efficiencies};
use crate::bias::BiasVector;
use crate::ensemble::MolecularEnsemble;
use crate::error::Result;
use crate::generator::{generate, Generation};
use crate::oracle::{PopulationVector, DEFAULT_CAPACITY};
use crate::text::serialize_circuit;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub n: usize,
    pub molecules: usize,
    pub seed: u64,
    pub eps_cold: f64,
    pub stagnation: usize,
    /// `Σ H(ε_i)` of the initial biases.
    pub entropy: f64,
    /// Von Neumann entropy after exact replay, when the width permits.
    pub exact_entropy: Option<f64>,
    pub effective_end: f64,
    pub depth: usize,
    pub gates: usize,
    pub l: usize,
    pub joint_prob: f64,
    pub r_e: Option<f64>,
    pub r_c: Option<f64>,
    pub runtime: Duration,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub biases: BiasVector,
    pub generation: Generation,
    pub summary: RunSummary,
}

/// Builds the ensemble, runs the generator to termination and summarizes.
pub fn run_generator(cfg: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let gcfg = cfg.generator_config()?;
    let biases = cfg.biases()?;
    let molecules = cfg.molecules();
    let mut ens = MolecularEnsemble::create(&biases, molecules, cfg.seed)?;
    let generation = generate(&mut ens, &gcfg)?;
    drop(ens);

    let entropy = effective_entropy(biases.as_slice());
    let exact_entropy = if cfg.n <= DEFAULT_CAPACITY {
        let mut p = PopulationVector::product_state(&biases)?;
        p.apply_circuit(&generation.circuit)?;
        Some(p.von_neumann_entropy())
    } else {
        None
    };
    let effective_end = generation.trace.final_effective_entropy();
    let (r_e, r_c) = match efficiencies(cfg.n, entropy, effective_end) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };
    let summary = RunSummary {
        n: cfg.n,
        molecules,
        seed: cfg.seed,
        eps_cold: gcfg.eps_cold,
        stagnation: gcfg.stagnation,
        entropy,
        exact_entropy,
        effective_end,
        depth: generation.trace.depth(),
        gates: generation.circuit.len(),
        l: generation.cold.len(),
        joint_prob: generation.cold.joint_prob,
        r_e,
        r_c,
        runtime: started.elapsed(),
    };
    Ok(RunOutput {
        config: cfg.clone(),
        biases,
        generation,
        summary,
    })
}

pub const SUMMARY_HEADER: &[&str] = &[
    "n", "molecules", "seed", "eps_cold", "st", "S", "S_exact", "S_e_end", "depth", "gates", "l",
    "joint_prob", "r_e", "r_c",
];

impl RunSummary {
    /// One CSV row. Wall-clock time is left out so that reruns are
    /// byte-identical.
    pub fn row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.molecules.to_string(),
            self.seed.to_string(),
            f(self.eps_cold),
            self.stagnation.to_string(),
            f(self.entropy),
            opt(self.exact_entropy),
            f(self.effective_end),
            self.depth.to_string(),
            self.gates.to_string(),
            self.l.to_string(),
            f(self.joint_prob),
            opt(self.r_e),
            opt(self.r_c),
        ]
    }
}

impl RunOutput {
    pub fn trace_table(&self) -> Table {
        let mut t = Table::new(
            "svboost trace v1",
            &["d", "S_e", "cold_count", "kept_trios", "undone_trios"],
        );
        for s in &self.generation.trace.steps {
            t.push(vec![
                s.depth.to_string(),
                f(s.effective_entropy),
                s.cold_count.to_string(),
                s.kept_trios.to_string(),
                s.undone_trios.to_string(),
            ]);
        }
        t
    }

    /// Per-depth biases, one column per qubit.
    pub fn bias_table(&self) -> Table {
        let header = std::iter::once("d".to_string())
            .chain((1..=self.config.n).map(|i| format!("eps_{i}")))
            .collect();
        let mut t = Table::with_header("svboost biases v1", header);
        for s in &self.generation.trace.steps {
            t.push(
                std::iter::once(s.depth.to_string())
                    .chain(s.biases.iter().map(|&e| f(e)))
                    .collect(),
            );
        }
        t
    }

    pub fn summary_table(&self) -> Table {
        let mut t = Table::new("svboost summary v1", SUMMARY_HEADER);
        t.push(self.summary.row());
        t
    }

    pub fn cold_table(&self) -> Table {
        let mut t = Table::new("svboost cold v1", &["rank", "qubit"]);
        for (k, q) in self.generation.cold.indices.iter().enumerate() {
            t.push(vec![(k + 1).to_string(), q.to_string()]);
        }
        t
    }

    /// Writes `circuit.txt`, `trace.csv`, `summary.csv`, `cold.csv` and,
    /// if asked, `biases.csv` into the configured output directory.
    pub fn write(&self, with_biases: bool) -> Result<()> {
        let dir = &self.config.out;
        fs::create_dir_all(dir)?;
        fs::write(dir.join("circuit.txt"), serialize_circuit(&self.generation.circuit))?;
        self.trace_table().write(&dir.join("trace.csv"))?;
        self.summary_table().write(&dir.join("summary.csv"))?;
        self.cold_table().write(&dir.join("cold.csv"))?;
        if with_biases {
            self.bias_table().write(&dir.join("biases.csv"))?;
        }
        Ok(())
    }
}
