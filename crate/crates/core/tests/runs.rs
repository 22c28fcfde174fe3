mod common;

use std::fs;

use svboost::experiment::{run_generator, ConfigLayer, RunConfig};
use svboost::{BiasSpec, MolecularEnsemble, PopulationVector};

fn small(n: usize, eps: f64) -> RunConfig {
    let mut cfg = RunConfig::new(n, BiasSpec::Uniform(eps));
    cfg.molecules = Some(50_000);
    cfg.seed = 21;
    cfg
}

#[test]
fn generated_circuit_replays_to_the_same_state() {
    let cfg = small(24, 0.6);
    let out = run_generator(&cfg).unwrap();
    assert!(!out.generation.circuit.is_empty());
    let b = cfg.biases().unwrap();
    let mut fresh = MolecularEnsemble::create(&b, 50_000, 21).unwrap();
    fresh.apply_circuit(&out.generation.circuit).unwrap();
    let biases = fresh.biases();
    assert_eq!(&biases, &out.generation.trace.last().biases);
}

#[test]
fn exact_replay_keeps_entropy_and_boosts_the_top_qubit() {
    let cfg = small(7, 0.6);
    let out = run_generator(&cfg).unwrap();
    let s = &out.summary;
    assert!((s.entropy - 5.053497).abs() < 1e-6);
    assert!((s.exact_entropy.unwrap() - s.entropy).abs() < 1e-9);
    let mut p = PopulationVector::product_state(&out.biases).unwrap();
    p.apply_circuit(&out.generation.circuit).unwrap();
    let top = out.generation.cold.indices.first().copied().unwrap_or_else(|| {
        let last = &out.generation.trace.last().biases;
        (1..=7).max_by(|&a, &b| last[a - 1].total_cmp(&last[b - 1])).unwrap()
    });
    assert!(p.marginal(top).unwrap().intrinsic > 0.6);
}

#[test]
fn saturated_and_unbiased_inputs() {
    let out = run_generator(&small(100, 1.0)).unwrap();
    assert!(out.generation.circuit.is_empty());
    assert_eq!((out.summary.l, out.summary.joint_prob), (100, 1.0));
    let out = run_generator(&small(100, 0.0)).unwrap();
    assert_eq!(out.summary.l, 0);
}

#[test]
fn writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "n = 12\nbias = uniform:0.7\nmolecules = 2e4\nseed = 4\nout = {}\n",
        dir.path().display()
    );
    let cfg = ConfigLayer::parse(&text).unwrap().into_run_config().unwrap();
    let out = run_generator(&cfg).unwrap();
    out.write(true).unwrap();
    for f in ["circuit.txt", "trace.csv", "summary.csv", "cold.csv", "biases.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("# svboost trace v1"));
    assert_eq!(lines.next(), Some("d,S_e,cold_count,kept_trios,undone_trios"));
    assert_eq!(lines.count(), out.generation.trace.steps.len());
    let circuit = fs::read_to_string(dir.path().join("circuit.txt")).unwrap();
    assert_eq!(svboost::parse_circuit(&circuit, 12).unwrap(), out.generation.circuit);
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = small(60, 0.5);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_generator(&cfg).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.generation.circuit, b.generation.circuit);
    assert_eq!(a.trace_table(), b.trace_table());
    assert_eq!(a.summary_table(), b.summary_table());
}
