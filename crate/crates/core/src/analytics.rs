//! Closed-form bias and entropy formulas: thermal bias, binary entropy, the
//! independent-input boost predictor, the cold-block bounds, efficiencies,
//! and the one-step correlation study for 3- and 4-wire boosting circuits.
//!
//! All entropies are in bits with `0 · log 0 = 0`.

use crate::error::{invalid, Result};

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// `−p log₂ p`, zero at `p = 0`.
#[inline]
pub fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy of a Bernoulli(`p`) variable, in bits.
#[inline]
pub fn entropy_of_probability(p: f64) -> f64 {
    xlog2x(p) + xlog2x(1.0 - p)
}

/// Binary entropy of a spin with bias `eps`: `H((1 + ε) / 2)`.
///
/// Unchecked; see [`binary_entropy`].
#[inline]
pub fn entropy_of_bias(eps: f64) -> f64 {
    let e = eps.abs().min(1.0);
    entropy_of_probability((1.0 + e) / 2.0)
}

pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(eps.abs() <= 1.0) {
        return Err(invalid(format!("bias {eps} outside [-1, 1]")));
    }
    Ok(entropy_of_bias(eps))
}

/// Sum of binary entropies over a bias list.
pub fn effective_entropy(biases: &[f64]) -> f64 {
    biases.iter().map(|&e| entropy_of_bias(e)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    /// Zeeman gap, joules.
    pub energy_gap: f64,
    /// Kelvin.
    pub temperature: f64,
}

/// `ε = tanh(E_Δ / 2 k_B T)`.
pub fn thermal_bias(p: ThermalParams) -> Result<f64> {
    if !(p.temperature > 0.0) {
        return Err(invalid(format!("temperature {} must be positive", p.temperature)));
    }
    if p.energy_gap < 0.0 {
        return Err(invalid("energy gap must be nonnegative"));
    }
    Ok(thermal_bias_from_ratio(p.energy_gap / (BOLTZMANN * p.temperature)))
}

/// Same, from the dimensionless ratio `E_Δ / (k_B T)`.
pub fn thermal_bias_from_ratio(ratio: f64) -> f64 {
    (ratio / 2.0).tanh()
}

/// Output biases of the three-qubit boosting circuit for uncorrelated inputs.
pub fn predict_boost(ea: f64, eb: f64, ec: f64) -> (f64, f64, f64) {
    let abc = ea * eb * ec;
    ((ea + eb + ec - abc) / 2.0, (ea + eb - ec + abc) / 2.0, eb * ec)
}

/// Whether the boost raises `ε_a` for uncorrelated inputs:
/// `ε_a < (ε_b + ε_c) / (1 + ε_b ε_c)`.
pub fn boost_condition(ea: f64, eb: f64, ec: f64) -> Result<bool> {
    let denom = 1.0 + eb * ec;
    if denom == 0.0 {
        return Err(invalid("ε_b ε_c = −1 makes the boost condition undefined"));
    }
    Ok(ea < (eb + ec) / denom)
}

/// One-step correlation growth for `n_b` wires of uniform bias `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStudyPoint {
    pub eps: f64,
    pub wires: usize,
    pub entropy: f64,
    pub effective_out: f64,
    pub mean_gap: f64,
}

/// Output marginals are `(3ε−ε³)/2, (ε+ε³)/2, ε²` for three wires and
/// `(3ε−ε³)/2, ε², (ε+ε³)/2, ε²` for four.
pub fn step_study(eps: f64, wires: usize) -> Result<StepStudyPoint> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid(format!("bias {eps} outside [0, 1]")));
    }
    let e3 = eps * eps * eps;
    let first = (3.0 * eps - e3) / 2.0;
    let middle = (eps + e3) / 2.0;
    let sq = eps * eps;
    let outs: Vec<f64> = match wires {
        3 => vec![first, middle, sq],
        4 => vec![first, sq, middle, sq],
        other => return Err(invalid(format!("wire count {other} not in {{3, 4}}"))),
    };
    let entropy = wires as f64 * entropy_of_bias(eps);
    let effective_out = effective_entropy(&outs);
    Ok(StepStudyPoint {
        eps,
        wires,
        entropy,
        effective_out,
        mean_gap: (effective_out - entropy) / wires as f64,
    })
}

/// Upper limit on the mean binary entropy `α` of `l` independent qubits whose
/// joint zero probability reaches `c`: `H(c^{1/l})`.
pub fn alpha_bound(c: f64, l: usize) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(invalid(format!("target probability {c} outside (0, 1]")));
    }
    if l == 0 {
        return Err(invalid("cold-qubit count must be at least 1"));
    }
    Ok(entropy_of_probability(c.powf(1.0 / l as f64)))
}

/// `β = α / (1 − α)`.
pub fn beta_from_alpha(alpha: f64) -> f64 {
    alpha / (1.0 - alpha)
}

/// `l ≤ (1 + β)(n − S_e)`.
pub fn l_upper_bound(n: usize, effective: f64, beta: f64) -> f64 {
    (1.0 + beta) * (n as f64 - effective)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub c: f64,
    pub l: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Lower bound `S_e − α l` on the entropy left in the compressed block.
    pub compressed_entropy: f64,
    pub l_max: f64,
}

pub fn bounds_report(n: usize, effective: f64, c: f64, l: usize) -> Result<BoundsReport> {
    let alpha = alpha_bound(c, l)?;
    let beta = beta_from_alpha(alpha);
    Ok(BoundsReport {
        c,
        l,
        alpha,
        beta,
        compressed_entropy: effective - alpha * l as f64,
        l_max: l_upper_bound(n, effective, beta),
    })
}

/// `(r_e, r_c) = ((n − S_e_end) / (n − S), S / S_e_end)`.
pub fn efficiencies(n: usize, entropy: f64, effective_end: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    if entropy >= nf {
        return Err(invalid("S = n leaves the initialization efficiency undefined"));
    }
    if !(effective_end > 0.0) {
        return Err(invalid("terminal effective entropy must be positive"));
    }
    Ok(((nf - effective_end) / (nf - entropy), entropy / effective_end))
}

/// `2 · 0.9^{1 / max(1, ⌈n − S⌉)} − 1`.
pub fn default_eps_cold(n: usize, entropy: f64) -> f64 {
    let gap = (n as f64 - entropy).ceil().max(1.0);
    2.0 * 0.9f64.powf(1.0 / gap) - 1.0
}

/// Terminal effective entropy predictions for an A/B two-species layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonuniformPrediction {
    /// `(n/2)√(2 S_A / n) + (n/2)√(2 S_B / n)`
    pub split_blocks: f64,
    /// `√(n (S_A + S_B))`
    pub uniform_equivalent: f64,
}

pub fn nonuniform_prediction(n: usize, entropy_a: f64, entropy_b: f64) -> NonuniformPrediction {
    let nf = n as f64;
    let half = nf / 2.0;
    NonuniformPrediction {
        split_blocks: half * (2.0 * entropy_a / nf).sqrt() + half * (2.0 * entropy_b / nf).sqrt(),
        uniform_equivalent: (nf * (entropy_a + entropy_b)).sqrt(),
    }
}
