use super::table::{f, Table};
use crate::bias::BiasVector;
use crate::error::{Error, Result};
use crate::gate::Circuit;
use crate::oracle::{EntropyReport, PopulationVector, QubitMarginal};

/// Before/after comparison of an exact circuit replay on a product state.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub before: Vec<QubitMarginal>,
    pub after: Vec<QubitMarginal>,
    pub entropies_before: EntropyReport,
    pub entropies_after: EntropyReport,
}

impl ExactReport {
    pub fn boosted(&self) -> Vec<usize> {
        self.before
            .iter()
            .zip(&self.after)
            .enumerate()
            .filter(|(_, (b, a))| a.intrinsic > b.intrinsic)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn verify_exact(circuit: &Circuit, biases: &BiasVector) -> Result<ExactReport> {
    if circuit.width() != biases.len() {
        return Err(Error::WidthMismatch {
            expected: circuit.width(),
            actual: biases.len(),
        });
    }
    let mut p = PopulationVector::product_state(biases)?;
    let before = p.marginals();
    let entropies_before = p.entropies()?;
    p.apply_circuit(circuit)?;
    Ok(ExactReport {
        before,
        after: p.marginals(),
        entropies_before,
        entropies_after: p.entropies()?,
    })
}

pub fn exact_tables(r: &ExactReport) -> (Table, Table) {
    let mut q = Table::new("svboost exact-qubits v1", &["qubit", "bias_before", "bias_after", "delta"]);
    for (i, (b, a)) in r.before.iter().zip(&r.after).enumerate() {
        q.push(vec![
            (i + 1).to_string(),
            f(b.intrinsic),
            f(a.intrinsic),
            f(a.intrinsic - b.intrinsic),
        ]);
    }
    let mut s = Table::new("svboost exact-entropy v1", &["stage", "S", "S_e", "correlation"]);
    for (stage, e) in [("before", &r.entropies_before), ("after", &r.entropies_after)] {
        s.push(vec![stage.into(), f(e.entropy), f(e.effective), f(e.total_correlation)]);
    }
    (q, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::BasicBoostA;

    #[test]
    fn empty_circuit_changes_nothing() {
        let b = BiasVector::new(vec![0.6, 0.3, 0.1]).unwrap();
        let r = verify_exact(&Circuit::new(3), &b).unwrap();
        assert_eq!(r.before, r.after);
        assert!(r.boosted().is_empty());
    }

    #[test]
    fn single_boost_raises_top_qubit() {
        let b = BiasVector::uniform(3, 0.6).unwrap();
        let c = Circuit::from_gates(3, BasicBoostA::new(1, 2, 3).gates().to_vec()).unwrap();
        let r = verify_exact(&c, &b).unwrap();
        assert_eq!(r.boosted(), vec![1]);
        assert!((r.entropies_before.entropy - r.entropies_after.entropy).abs() < 1e-12);
        assert!(verify_exact(&c, &BiasVector::uniform(4, 0.6).unwrap()).is_err());
    }
}
