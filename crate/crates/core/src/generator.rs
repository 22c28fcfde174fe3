//! Automatic initialization-circuit generation on a virtual molecular system.
//!
//! Each step sorts qubits by measured bias, starts at the first qubit that is
//! not yet cold, and boosts consecutive trios down the table. A trio's gates
//! are kept only if the top qubit's bias strictly increased; otherwise the
//! boost is undone. The run stops once no new cold qubit has appeared for
//! `stagnation` steps or the depth cap is reached, and finally the longest
//! high-bias prefix whose joint zero probability exceeds the target is picked
//! as the cold block.

use crate::analytics::{default_eps_cold, effective_entropy};
use crate::bias::BiasVector;
use crate::ensemble::{bias_from_zeros, MolecularEnsemble, TrioPlanes};
use crate::error::{invalid, Result};
use crate::gate::{BasicBoostA, BasicBoostB, Circuit, Gate};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// A qubit whose bias exceeds this is cold.
    pub eps_cold: f64,
    /// Stop after this many steps without a new cold qubit (`s_t`).
    pub stagnation: usize,
    pub max_depth: usize,
    /// Target joint zero probability for the final cold block.
    pub joint_target: f64,
    /// Keep this qubit in the boosted (top) role whenever it lands in a trio.
    pub target: Option<usize>,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.eps_cold) {
            return Err(invalid(format!("eps_cold = {} outside [0, 1)", self.eps_cold)));
        }
        if self.stagnation == 0 {
            return Err(invalid("stagnation window must be at least 1"));
        }
        if self.max_depth == 0 {
            return Err(invalid("max depth must be at least 1"));
        }
        if !(self.joint_target > 0.0 && self.joint_target <= 1.0) {
            return Err(invalid(format!(
                "joint target {} outside (0, 1]",
                self.joint_target
            )));
        }
        Ok(())
    }

    /// Defaults for `n` qubits with initial biases `biases`: threshold from
    /// the von Neumann entropy, `s_t = 5 + ⌊n/10⌋`, depth cap 100, target 0.9.
    pub fn defaults_for(biases: &BiasVector) -> Self {
        let n = biases.len();
        Self {
            eps_cold: default_eps_cold(n, effective_entropy(biases.as_slice())),
            stagnation: default_stagnation(n),
            max_depth: 100,
            joint_target: 0.9,
            target: None,
        }
    }
}

pub fn default_stagnation(n: usize) -> usize {
    5 + n / 10
}

/// Qubit indices ordered by descending bias; ties by ascending index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitTable(Vec<usize>);

impl QubitTable {
    /// `zeros[i - 1]` is the zero count of qubit `i`.
    pub fn sorted(zeros: &[u64]) -> Self {
        let mut tbl: Vec<usize> = (1..=zeros.len()).collect();
        tbl.sort_by(|&x, &y| zeros[y - 1].cmp(&zeros[x - 1]).then(x.cmp(&y)));
        QubitTable(tbl)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&q| {
            q >= 1 && q <= seen.len() && !std::mem::replace(&mut seen[q - 1], true)
        })
    }
}

/// Count of qubits with bias strictly above `eps_cold`.
pub fn cold_count(biases: &[f64], eps_cold: f64) -> usize {
    biases.iter().filter(|&&e| e > eps_cold).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub depth: usize,
    pub effective_entropy: f64,
    pub biases: Vec<f64>,
    pub cold_count: usize,
    pub kept_trios: usize,
    pub undone_trios: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColdBlock {
    /// The picked qubits, highest bias first.
    pub indices: Vec<usize>,
    pub joint_prob: f64,
}

impl ColdBlock {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Per-step log; entry 0 is the initial state before any boost.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    pub steps: Vec<StepRecord>,
}

impl EntropyTrace {
    pub fn initial(&self) -> &StepRecord {
        &self.steps[0]
    }

    pub fn last(&self) -> &StepRecord {
        self.steps.last().expect("trace has the initial entry")
    }

    /// Terminal effective entropy `S_e^end`.
    pub fn final_effective_entropy(&self) -> f64 {
        self.last().effective_entropy
    }

    pub fn depth(&self) -> usize {
        self.last().depth
    }

    pub fn at_depth(&self, d: usize) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.depth == d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generation {
    pub circuit: Circuit,
    pub trace: EntropyTrace,
    pub cold: ColdBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoostOutcome {
    /// Whether the top qubit's zero count strictly increased. If not, the
    /// trio has been restored.
    pub increased: bool,
    /// Whether the middle qubit was inverted after the boost.
    pub inverted_b: bool,
    /// Zero counts of `(a, b, c)` after the call.
    pub zeros: [u64; 3],
    /// Gates applied by the boost (empty when undone).
    pub gates: Vec<Gate>,
}

fn run_boost(
    mut planes: TrioPlanes<'_>,
    [a, b, c]: [usize; 3],
    molecules: u64,
    before: [u64; 3],
) -> BoostOutcome {
    let ones = planes.boost();
    let mut zeros = ones.map(|o| molecules - o);
    let mut inverted_b = false;
    if 2 * zeros[1] < molecules {
        zeros[1] = molecules - planes.flip_b();
        inverted_b = true;
    }
    if zeros[0] > before[0] {
        let mut gates = BasicBoostA::new(a, b, c).gates().to_vec();
        if inverted_b {
            gates.extend(BasicBoostB { b }.gates());
        }
        BoostOutcome {
            increased: true,
            inverted_b,
            zeros,
            gates,
        }
    } else {
        if inverted_b {
            planes.flip_b();
        }
        planes.unboost();
        BoostOutcome {
            increased: false,
            inverted_b,
            zeros: before,
            gates: Vec::new(),
        }
    }
}

/// Boosts one trio, inverting `b` if its bias went negative, and undoes
/// everything unless `ε_a` strictly increased.
pub fn boost_trio(ens: &mut MolecularEnsemble, a: usize, b: usize, c: usize) -> Result<BoostOutcome> {
    Gate::Fredkin { a, b, control: c }.validate(ens.qubits())?;
    let before = [ens.zero_count(a), ens.zero_count(b), ens.zero_count(c)];
    let molecules = ens.molecules() as u64;
    let planes = ens.trio_mut(a, b, c)?;
    Ok(run_boost(planes, [a, b, c], molecules, before))
}

fn with_target_on_top(trio: [usize; 3], target: Option<usize>) -> [usize; 3] {
    match target {
        Some(t) if trio[1] == t => [t, trio[0], trio[2]],
        Some(t) if trio[2] == t => [t, trio[0], trio[1]],
        _ => trio,
    }
}

/// Runs the generator to termination on `ens`, which is left in the final
/// state.
pub fn generate(ens: &mut MolecularEnsemble, cfg: &GeneratorConfig) -> Result<Generation> {
    cfg.validate()?;
    let n = ens.qubits();
    let molecules = ens.molecules();
    if let Some(t) = cfg.target {
        if t == 0 || t > n {
            return Err(invalid(format!("target qubit {t} outside 1..={n}")));
        }
    }
    let mut zeros: Vec<u64> = (1..=n).map(|i| ens.zero_count(i)).collect();
    let biases_of = |zeros: &[u64]| -> Vec<f64> {
        zeros.iter().map(|&z| bias_from_zeros(z, molecules)).collect()
    };

    let mut circuit = Circuit::new(n);
    let mut tbl = QubitTable::sorted(&zeros);
    let biases = biases_of(&zeros);
    let mut best_cold = cold_count(&biases, cfg.eps_cold);
    let mut last_new = 0usize;
    let mut steps = vec![StepRecord {
        depth: 0,
        effective_entropy: effective_entropy(&biases),
        biases,
        cold_count: best_cold,
        kept_trios: 0,
        undone_trios: 0,
    }];

    let mut depth = 0usize;
    while depth < cfg.max_depth && depth - last_new < cfg.stagnation {
        depth += 1;
        let order = tbl.as_slice();
        let start = order
            .iter()
            .position(|&q| bias_from_zeros(zeros[q - 1], molecules) <= cfg.eps_cold)
            .unwrap_or(n);
        let trios: Vec<[usize; 3]> = (start..)
            .step_by(3)
            .take_while(|&j| j + 2 < n)
            .map(|j| with_target_on_top([order[j], order[j + 1], order[j + 2]], cfg.target))
            .collect();
        let before: Vec<[u64; 3]> = trios
            .iter()
            .map(|t| t.map(|q| zeros[q - 1]))
            .collect();
        let outcomes = ens.par_trios(&trios, |k, planes| {
            run_boost(planes, trios[k], molecules as u64, before[k])
        })?;

        let (mut kept, mut undone) = (0, 0);
        for (trio, out) in trios.iter().zip(outcomes) {
            for (q, z) in trio.iter().zip(out.zeros) {
                zeros[q - 1] = z;
            }
            if out.increased {
                circuit.extend(out.gates)?;
                kept += 1;
            } else {
                undone += 1;
            }
        }
        circuit.end_layer();

        tbl = QubitTable::sorted(&zeros);
        let biases = biases_of(&zeros);
        let cold = cold_count(&biases, cfg.eps_cold);
        if cold > best_cold {
            best_cold = cold;
            last_new = depth;
        }
        steps.push(StepRecord {
            depth,
            effective_entropy: effective_entropy(&biases),
            biases,
            cold_count: cold,
            kept_trios: kept,
            undone_trios: undone,
        });
    }

    let cold = pick_cold_block(ens, &tbl, cfg.joint_target);
    Ok(Generation {
        circuit,
        trace: EntropyTrace { steps },
        cold,
    })
}

/// Longest prefix of `tbl` whose joint zero probability exceeds `target`.
pub fn pick_cold_block(ens: &MolecularEnsemble, tbl: &QubitTable, target: f64) -> ColdBlock {
    let molecules = ens.molecules() as f64;
    let counts = ens.prefix_joint_zero_counts(tbl.as_slice());
    let l = counts
        .iter()
        .skip(1)
        .take_while(|&&c| c as f64 / molecules > target)
        .count();
    ColdBlock {
        indices: tbl.as_slice()[..l].to_vec(),
        joint_prob: counts[l] as f64 / molecules,
    }
}
