//! Multi-run studies. Independent runs execute in parallel; results come
//! back in input order, so emitted tables do not depend on scheduling.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::config::RunConfig;
use super::run::{run_generator, RunOutput};
use super::table::{f, opt, Table};
use crate::analytics::{entropy_of_bias, nonuniform_prediction, step_study, StepStudyPoint};
use crate::bias::BiasSpec;
use crate::error::{invalid, Result};
use crate::generator::EntropyTrace;

fn run_all(cfgs: Vec<RunConfig>) -> Result<Vec<RunOutput>> {
    for c in &cfgs {
        c.generator_config()?;
    }
    cfgs.par_iter().map(run_generator).collect()
}

fn with(base: &RunConfig, n: usize, bias: BiasSpec, seed: u64) -> RunConfig {
    RunConfig {
        n,
        bias,
        seed,
        ..base.clone()
    }
}

/// Share of the total effective-entropy rise reached by depth `d`.
pub fn early_fraction(trace: &EntropyTrace, d: usize) -> f64 {
    let s0 = trace.initial().effective_entropy;
    let total = trace.final_effective_entropy() - s0;
    let at = trace
        .at_depth(d.min(trace.depth()))
        .map(|s| s.effective_entropy)
        .unwrap_or(s0);
    if total > 0.0 {
        (at - s0) / total
    } else {
        f64::NAN
    }
}

#[derive(Debug, Clone)]
pub struct DepthTraceRun {
    pub eps: f64,
    pub output: RunOutput,
}

/// One generator run per uniform bias in `eps`, at `base.n` qubits.
pub fn depth_trace(base: &RunConfig, eps: &[f64]) -> Result<Vec<DepthTraceRun>> {
    let cfgs = eps
        .iter()
        .map(|&e| with(base, base.n, BiasSpec::Uniform(e), base.seed))
        .collect();
    Ok(eps
        .iter()
        .zip(run_all(cfgs)?)
        .map(|(&eps, output)| DepthTraceRun { eps, output })
        .collect())
}

pub fn depth_trace_tables(runs: &[DepthTraceRun]) -> (Table, Table) {
    let mut curves = Table::new("svboost depth-trace v1", &["eps", "d", "S_e"]);
    let mut summary = Table::new(
        "svboost depth-summary v1",
        &["eps", "n", "S", "S_e_end", "depth", "early_fraction_d5"],
    );
    for r in runs {
        let trace = &r.output.generation.trace;
        for s in &trace.steps {
            curves.push(vec![f(r.eps), s.depth.to_string(), f(s.effective_entropy)]);
        }
        summary.push(vec![
            f(r.eps),
            r.output.summary.n.to_string(),
            f(r.output.summary.entropy),
            f(r.output.summary.effective_end),
            trace.depth().to_string(),
            f(early_fraction(trace, 5)),
        ]);
    }
    (curves, summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationRow {
    pub n: usize,
    pub eps: f64,
    pub entropy: f64,
    pub effective_end: f64,
    /// `S_e_end/n − √(S/n)`.
    pub delta: f64,
    /// Whether `δ ∈ (−0.05, 0.04)`; only judged for `n ≥ 1000`.
    pub in_band: Option<bool>,
    pub above_curve: bool,
}

impl RelationRow {
    pub fn new(n: usize, eps: f64, entropy: f64, effective_end: f64) -> Self {
        let nf = n as f64;
        let curve = (entropy / nf).sqrt();
        let delta = effective_end / nf - curve;
        Self {
            n,
            eps,
            entropy,
            effective_end,
            delta,
            in_band: (n >= 1000).then_some(delta > -0.05 && delta < 0.04),
            above_curve: effective_end / nf > curve,
        }
    }
}

pub fn relation_sweep(base: &RunConfig, ns: &[usize], eps: &[f64]) -> Result<Vec<RelationRow>> {
    if let Some(e) = eps.iter().find(|e| !(0.0..=0.975).contains(*e)) {
        return Err(invalid(format!("bias {e} outside the sweep range [0, 0.975]")));
    }
    let points: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| eps.iter().map(move |&e| (n, e)))
        .collect();
    let cfgs = points
        .iter()
        .map(|&(n, e)| with(base, n, BiasSpec::Uniform(e), base.seed))
        .collect();
    Ok(points
        .iter()
        .zip(run_all(cfgs)?)
        .map(|(&(n, e), out)| RelationRow::new(n, e, out.summary.entropy, out.summary.effective_end))
        .collect())
}

pub fn relation_table(rows: &[RelationRow]) -> Table {
    let mut t = Table::new(
        "svboost relation v1",
        &["n", "eps", "S", "S_e_end", "S_e_end_over_n", "sqrt_S_over_n", "delta", "in_band", "above_curve"],
    );
    for r in rows {
        let nf = r.n as f64;
        t.push(vec![
            r.n.to_string(),
            f(r.eps),
            f(r.entropy),
            f(r.effective_end),
            f(r.effective_end / nf),
            f((r.entropy / nf).sqrt()),
            f(r.delta),
            r.in_band.map(|b| b.to_string()).unwrap_or_default(),
            r.above_curve.to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub eps: f64,
    /// Largest cold-block size over the seeds.
    pub best_l: usize,
    pub best_seed: u64,
    /// Terminal effective entropy of the best run.
    pub effective_end: f64,
    pub min_l: usize,
}

impl RateRow {
    pub fn l_over_n(&self) -> f64 {
        self.best_l as f64 / self.n as f64
    }

    /// `l / (n − S_e_end)`; undefined when nothing can be initialized.
    pub fn l_over_gap(&self) -> Option<f64> {
        let gap = self.n as f64 - self.effective_end;
        (gap > 1e-9).then(|| self.best_l as f64 / gap)
    }
}

/// Best of `seeds` runs (seeds `base.seed`, `base.seed + 1`, …) per point.
pub fn rate(base: &RunConfig, ns: &[usize], eps: &[f64], seeds: usize) -> Result<Vec<RateRow>> {
    if seeds == 0 {
        return Err(invalid("rate needs at least one seed"));
    }
    let points: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| eps.iter().map(move |&e| (n, e)))
        .collect();
    let cfgs = points
        .iter()
        .flat_map(|&(n, e)| {
            (0..seeds as u64).map(move |k| with(base, n, BiasSpec::Uniform(e), base.seed.wrapping_add(k)))
        })
        .collect();
    let outs = run_all(cfgs)?;
    Ok(points
        .iter()
        .zip(outs.chunks(seeds))
        .map(|(&(n, eps), group)| {
            // first maximal l wins, so ties go to the lowest seed
            let best = group
                .iter()
                .reduce(|a, b| if b.summary.l > a.summary.l { b } else { a })
                .expect("seeds > 0");
            RateRow {
                n,
                eps,
                best_l: best.summary.l,
                best_seed: best.summary.seed,
                effective_end: best.summary.effective_end,
                min_l: group.iter().map(|o| o.summary.l).min().unwrap_or(0),
            }
        })
        .collect())
}

pub fn rate_table(rows: &[RateRow]) -> Table {
    let mut t = Table::new(
        "svboost rate v1",
        &["n", "eps", "best_l", "best_seed", "l_over_n", "S_e_end", "l_over_gap", "min_l", "l_spread"],
    );
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            f(r.eps),
            r.best_l.to_string(),
            r.best_seed.to_string(),
            f(r.l_over_n()),
            f(r.effective_end),
            opt(r.l_over_gap()),
            r.min_l.to_string(),
            (r.best_l - r.min_l).to_string(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsColdRow {
    pub eps: f64,
    pub eps_cold: f64,
    pub effective_end_over_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsColdSweep {
    pub rows: Vec<EpsColdRow>,
    /// `(ε, max − min of S_e_end/n over the ε_cold grid)`.
    pub spread: Vec<(f64, f64)>,
    /// Grid values outside `(0, 1)`, which leave no start qubit or none
    /// that can ever be cold; they are not run.
    pub excluded: Vec<f64>,
}

pub fn eps_cold_sweep(base: &RunConfig, eps: &[f64], grid: &[f64]) -> Result<EpsColdSweep> {
    let (kept, excluded): (Vec<f64>, Vec<f64>) = grid.iter().partition(|&&c| c > 0.0 && c < 1.0);
    let points: Vec<(f64, f64)> = eps
        .iter()
        .flat_map(|&e| kept.iter().map(move |&c| (e, c)))
        .collect();
    let cfgs = points
        .iter()
        .map(|&(e, c)| RunConfig {
            eps_cold: Some(c),
            ..with(base, base.n, BiasSpec::Uniform(e), base.seed)
        })
        .collect();
    let rows: Vec<EpsColdRow> = points
        .iter()
        .zip(run_all(cfgs)?)
        .map(|(&(eps, eps_cold), o)| EpsColdRow {
            eps,
            eps_cold,
            effective_end_over_n: o.summary.effective_end / o.summary.n as f64,
        })
        .collect();
    let spread = eps
        .iter()
        .map(|&e| {
            let vals = rows.iter().filter(|r| r.eps == e).map(|r| r.effective_end_over_n);
            let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            (e, if hi >= lo { hi - lo } else { f64::NAN })
        })
        .collect();
    Ok(EpsColdSweep {
        rows,
        spread,
        excluded,
    })
}

pub fn eps_cold_tables(s: &EpsColdSweep) -> (Table, Table) {
    let mut rows = Table::new("svboost eps-cold v1", &["eps", "eps_cold", "S_e_end_over_n"]);
    for r in &s.rows {
        rows.push(vec![f(r.eps), f(r.eps_cold), f(r.effective_end_over_n)]);
    }
    let mut spread = Table::new("svboost eps-cold-spread v1", &["eps", "spread"]);
    for &(e, v) in &s.spread {
        spread.push(vec![f(e), f(v)]);
    }
    (rows, spread)
}

/// Mean, 99% Student-t half-width and sample variance of `xs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub samples: usize,
    pub mean: f64,
    pub ci99_half_width: f64,
    pub variance: f64,
}

impl SampleStats {
    pub fn of(xs: &[f64]) -> Self {
        let k = xs.len();
        let mean = xs.iter().sum::<f64>() / k as f64;
        if k < 2 {
            return Self {
                samples: k,
                mean,
                ci99_half_width: f64::NAN,
                variance: f64::NAN,
            };
        }
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        let t = StudentsT::new(0.0, 1.0, (k - 1) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.995);
        Self {
            samples: k,
            mean,
            ci99_half_width: t * (variance / k as f64).sqrt(),
            variance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityRun {
    pub molecules: usize,
    pub seed: u64,
    pub effective_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub runs: Vec<ReliabilityRun>,
    /// One entry per molecule count, in grid order.
    pub stats: Vec<(usize, SampleStats)>,
}

impl StudyResult {
    /// Max − min of the per-N means.
    pub fn mean_spread(&self) -> f64 {
        let means = self.stats.iter().map(|(_, s)| s.mean);
        means.clone().fold(f64::NEG_INFINITY, f64::max) - means.fold(f64::INFINITY, f64::min)
    }
}

/// `samples` runs at each molecule count, seeds `base.seed + k`.
pub fn reliability(base: &RunConfig, molecule_grid: &[usize], samples: usize) -> Result<StudyResult> {
    let cfgs: Vec<RunConfig> = molecule_grid
        .iter()
        .flat_map(|&m| {
            (0..samples as u64).map(move |k| RunConfig {
                molecules: Some(m),
                seed: base.seed.wrapping_add(k),
                ..base.clone()
            })
        })
        .collect();
    let runs: Vec<ReliabilityRun> = run_all(cfgs)?
        .into_iter()
        .map(|o| ReliabilityRun {
            molecules: o.summary.molecules,
            seed: o.summary.seed,
            effective_end: o.summary.effective_end,
        })
        .collect();
    let stats = molecule_grid
        .iter()
        .zip(runs.chunks(samples.max(1)))
        .map(|(&m, group)| {
            let xs: Vec<f64> = group.iter().map(|r| r.effective_end).collect();
            (m, SampleStats::of(&xs))
        })
        .collect();
    Ok(StudyResult { runs, stats })
}

pub fn reliability_tables(s: &StudyResult) -> (Table, Table) {
    let mut runs = Table::new("svboost reliability-runs v1", &["molecules", "seed", "S_e_end"]);
    for r in &s.runs {
        runs.push(vec![r.molecules.to_string(), r.seed.to_string(), f(r.effective_end)]);
    }
    let mut stats = Table::new(
        "svboost reliability v1",
        &["molecules", "samples", "mean_S_e_end", "ci99_half_width", "V_s"],
    );
    for (m, st) in &s.stats {
        stats.push(vec![
            m.to_string(),
            st.samples.to_string(),
            f(st.mean),
            f(st.ci99_half_width),
            f(st.variance),
        ]);
    }
    (runs, stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonuniformRow {
    pub eps_a: f64,
    pub chi: f64,
    pub entropy: f64,
    pub effective_end: f64,
    /// `√(n S)`.
    pub curve: f64,
    /// Terminal entropy if the two species boosted as separate blocks.
    pub split_blocks: f64,
}

impl NonuniformRow {
    pub fn residual(&self) -> f64 {
        self.effective_end - self.curve
    }
}

/// Alternating A/B layouts with `ε_B = χ ε_A` at `base.n` qubits.
pub fn nonuniform(base: &RunConfig, eps_a: &[f64], chis: &[f64]) -> Result<Vec<NonuniformRow>> {
    let points: Vec<(f64, f64)> = eps_a
        .iter()
        .flat_map(|&a| chis.iter().map(move |&c| (a, c)))
        .collect();
    let cfgs = points
        .iter()
        .map(|&(a, chi)| with(base, base.n, BiasSpec::Alternating { eps_a: a, chi }, base.seed))
        .collect();
    let n = base.n;
    Ok(points
        .iter()
        .zip(run_all(cfgs)?)
        .map(|(&(eps_a, chi), o)| {
            let half = n as f64 / 2.0;
            let sa = half * entropy_of_bias(eps_a);
            let sb = half * entropy_of_bias(chi * eps_a);
            NonuniformRow {
                eps_a,
                chi,
                entropy: o.summary.entropy,
                effective_end: o.summary.effective_end,
                curve: (n as f64 * o.summary.entropy).sqrt(),
                split_blocks: nonuniform_prediction(n, sa, sb).split_blocks,
            }
        })
        .collect())
}

pub fn nonuniform_table(n: usize, rows: &[NonuniformRow]) -> Table {
    let mut t = Table::new(
        "svboost nonuniform v1",
        &["n", "eps_a", "chi", "eps_b", "S", "S_e_end", "sqrt_nS", "residual", "split_blocks"],
    );
    for r in rows {
        t.push(vec![
            n.to_string(),
            f(r.eps_a),
            f(r.chi),
            f(r.chi * r.eps_a),
            f(r.entropy),
            f(r.effective_end),
            f(r.curve),
            f(r.residual()),
            f(r.split_blocks),
        ]);
    }
    t
}

pub fn step_study_grid(eps: &[f64], wires: &[usize]) -> Result<Vec<StepStudyPoint>> {
    eps.iter()
        .flat_map(|&e| wires.iter().map(move |&w| step_study(e, w)))
        .collect()
}

pub fn step_study_table(points: &[StepStudyPoint]) -> Table {
    let mut t = Table::new("svboost step-study v1", &["eps", "wires", "S", "S_e_out", "mean_gap"]);
    for p in points {
        t.push(vec![
            f(p.eps),
            p.wires.to_string(),
            f(p.entropy),
            f(p.effective_out),
            f(p.mean_gap),
        ]);
    }
    t
}

/// `{0, step, 2·step, …, 1}` without accumulated rounding.
pub fn unit_grid(step: f64) -> Vec<f64> {
    let k = (1.0 / step).round() as usize;
    (0..=k).map(|i| i as f64 / k as f64).collect()
}
