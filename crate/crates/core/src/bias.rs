//! Per-qubit biases and the textual bias specifications used by the CLI.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Polarizations `ε_i ∈ [-1, 1]`, index 0 holding qubit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasVector(Vec<f64>);

impl BiasVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &e) in values.iter().enumerate() {
            if !e.is_finite() || e.abs() > 1.0 {
                return Err(invalid(format!("bias of qubit {} is {e}, outside [-1, 1]", i + 1)));
            }
        }
        Ok(BiasVector(values))
    }

    pub fn uniform(n: usize, eps: f64) -> Result<Self> {
        Self::new(vec![eps; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bias of qubit `i` (1-based).
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// How the initial biases of a run are laid out.
#[derive(Debug, Clone, PartialEq)]
pub enum BiasSpec {
    /// Every qubit has the same bias.
    Uniform(f64),
    /// Explicit per-qubit list.
    List(Vec<f64>),
    /// Alternating A-B-A-B… structure with `ε_B = chi · ε_A`.
    Alternating { eps_a: f64, chi: f64 },
}

impl BiasSpec {
    pub fn resolve(&self, n: usize) -> Result<BiasVector> {
        match self {
            BiasSpec::Uniform(e) => BiasVector::uniform(n, *e),
            BiasSpec::List(v) => {
                if v.len() != n {
                    return Err(Error::WidthMismatch {
                        expected: n,
                        actual: v.len(),
                    });
                }
                BiasVector::new(v.clone())
            }
            BiasSpec::Alternating { eps_a, chi } => {
                if !n.is_multiple_of(2) {
                    return Err(invalid("alternating bias layout needs an even qubit count"));
                }
                if !(*chi > 0.0 && *chi <= 1.0) {
                    return Err(invalid(format!("chi = {chi} outside (0, 1]")));
                }
                let eps_b = chi * eps_a;
                BiasVector::new(
                    (0..n)
                        .map(|i| if i % 2 == 0 { *eps_a } else { eps_b })
                        .collect(),
                )
            }
        }
    }
}

impl FromStr for BiasSpec {
    type Err = Error;

    /// Accepts `uniform:0.6`, `list:0.8,0.8,0.3` and `alt:0.6,chi=0.4`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| invalid(format!("bias spec `{s}` needs a `kind:` prefix")))?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("`{t}` is not a number in bias spec `{s}`")))
        };
        match kind.trim() {
            "uniform" => Ok(BiasSpec::Uniform(num(rest)?)),
            "list" => Ok(BiasSpec::List(
                rest.split(',').map(num).collect::<Result<Vec<_>>>()?,
            )),
            "alt" => {
                let (a, chi) = rest
                    .split_once(',')
                    .ok_or_else(|| invalid(format!("alt spec `{s}` needs `eps,chi=value`")))?;
                let chi = chi
                    .trim()
                    .strip_prefix("chi=")
                    .ok_or_else(|| invalid(format!("alt spec `{s}` needs `chi=`")))?;
                Ok(BiasSpec::Alternating {
                    eps_a: num(a)?,
                    chi: num(chi)?,
                })
            }
            other => Err(invalid(format!("unknown bias kind `{other}`"))),
        }
    }
}

impl fmt::Display for BiasSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiasSpec::Uniform(e) => write!(f, "uniform:{e}"),
            BiasSpec::List(v) => {
                write!(f, "list:")?;
                for (k, e) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            BiasSpec::Alternating { eps_a, chi } => write!(f, "alt:{eps_a},chi={chi}"),
        }
    }
}
