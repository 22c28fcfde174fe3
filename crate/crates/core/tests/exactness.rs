mod common;

use common::Draw;
use svboost::analytics::effective_entropy;
use svboost::{BiasVector, MolecularEnsemble, PopulationVector};

#[test]
fn random_circuits_are_bijections() {
    let mut d = Draw::new(11);
    for n in 3..=10 {
        for _ in 0..5 {
            let c = d.circuit(n, 40);
            let inv = c.inverse();
            let mut seen = vec![false; 1 << n];
            for k in 0..1u64 << n {
                let img = c.apply_to_index(k);
                assert!(!seen[img as usize], "collision at {img} for n={n}");
                seen[img as usize] = true;
                assert_eq!(inv.apply_to_index(img), k);
            }
        }
    }
}

#[test]
fn bitstring_and_index_semantics_agree() {
    let mut d = Draw::new(12);
    let c = d.circuit(8, 60);
    for k in 0..256u64 {
        let bits: Vec<bool> = (0..8).map(|i| (k >> (7 - i)) & 1 == 1).collect();
        let out = c.apply_to_bitstring(&bits).unwrap();
        let idx = out.iter().fold(0u64, |a, &b| (a << 1) | b as u64);
        assert_eq!(idx, c.apply_to_index(k));
    }
}

#[test]
fn entropy_is_conserved_and_correlation_is_relative_entropy() {
    let mut d = Draw::new(13);
    for trial in 0..100 {
        let n = 3 + trial % 8;
        let mut p = PopulationVector::new(n, d.populations(n)).unwrap();
        let before = p.von_neumann_entropy();
        let len = 5 + d.below(60);
        p.apply_circuit(&d.circuit(n, len)).unwrap();
        let r = p.entropies().unwrap();
        assert!((r.entropy - before).abs() < 1e-9);
        assert!((r.total_correlation - p.relative_entropy_to_product()).abs() < 1e-9);
        assert!(r.total_correlation > -1e-12);
    }
}

#[test]
fn product_state_entropy_is_sum_of_binary_entropies() {
    let b = BiasVector::new(vec![0.1, 0.5, 0.9, -0.3, 0.0, 1.0]).unwrap();
    let p = PopulationVector::product_state(&b).unwrap();
    assert!((p.von_neumann_entropy() - effective_entropy(b.as_slice())).abs() < 1e-9);
}

#[test]
fn monte_carlo_matches_exact_replay() {
    let mut d = Draw::new(14);
    let molecules = 200_000;
    for seed in 0..6u64 {
        let n = 4 + d.below(5);
        let b = BiasVector::new((0..n).map(|_| 2.0 * d.unit() - 1.0).collect()).unwrap();
        let c = d.circuit(n, 30);
        let mut ens = MolecularEnsemble::create(&b, molecules, seed).unwrap();
        ens.apply_circuit(&c).unwrap();
        let mut p = PopulationVector::product_state(&b).unwrap();
        p.apply_circuit(&c).unwrap();
        for i in 1..=n {
            let exact = 2.0 * p.p_zero(i) - 1.0;
            let sigma = ((1.0 - exact * exact) / molecules as f64).sqrt().max(1e-9);
            let mc = ens.update_bias(i).unwrap();
            assert!((mc - exact).abs() <= 4.5 * sigma, "qubit {i}: {mc} vs {exact}");
        }
        let pair = [1, n];
        let exact = p.joint_zero_probability(&pair).unwrap();
        let mc = ens.joint_zero_probability(&pair).unwrap();
        let sigma = (exact * (1.0 - exact) / molecules as f64).sqrt().max(1e-9);
        assert!((mc - exact).abs() <= 4.5 * sigma);
    }
}
