use std::path::PathBuf;

use crate::analytics::{default_eps_cold, effective_entropy};
use crate::bias::{BiasSpec, BiasVector};
use crate::error::{Error, Result};
use crate::generator::{default_stagnation, GeneratorConfig};

/// Molecule count used when none is given: `10⁴·n`, capped at `5·10⁶`.
pub fn default_molecules(n: usize) -> usize {
    (10_000 * n).clamp(1, 5_000_000)
}

/// Everything that determines a single generator run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub bias: BiasSpec,
    /// `None` selects [`default_molecules`].
    pub molecules: Option<usize>,
    pub seed: u64,
    /// `None` derives the threshold from `n` and the initial entropy.
    pub eps_cold: Option<f64>,
    /// `None` selects `5 + ⌊n/10⌋`.
    pub stagnation: Option<usize>,
    pub max_depth: usize,
    pub joint_target: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(n: usize, bias: BiasSpec) -> Self {
        Self {
            n,
            bias,
            molecules: None,
            seed: 1,
            eps_cold: None,
            stagnation: None,
            max_depth: 100,
            joint_target: 0.9,
            out: PathBuf::from("."),
        }
    }

    pub fn molecules(&self) -> usize {
        self.molecules.unwrap_or_else(|| default_molecules(self.n))
    }

    pub fn biases(&self) -> Result<BiasVector> {
        self.bias.resolve(self.n).map_err(|e| config_err("bias", e))
    }

    /// Checks every field and resolves the generator settings.
    pub fn generator_config(&self) -> Result<GeneratorConfig> {
        if self.n == 0 {
            return Err(config_err("n", "must be at least 1"));
        }
        if self.molecules() == 0 {
            return Err(config_err("molecules", "must be at least 1"));
        }
        let biases = self.biases()?;
        let eps_cold = match self.eps_cold {
            Some(e) if !(e > 0.0 && e < 1.0) => {
                return Err(config_err("eps_cold", format!("{e} outside (0, 1)")))
            }
            Some(e) => e,
            None => default_eps_cold(self.n, effective_entropy(biases.as_slice())),
        };
        let stagnation = self.stagnation.unwrap_or_else(|| default_stagnation(self.n));
        if stagnation == 0 {
            return Err(config_err("st", "must be at least 1"));
        }
        if self.max_depth == 0 {
            return Err(config_err("max_depth", "must be at least 1"));
        }
        if !(self.joint_target > 0.0 && self.joint_target <= 1.0) {
            return Err(config_err(
                "joint_target",
                format!("{} outside (0, 1]", self.joint_target),
            ));
        }
        Ok(GeneratorConfig {
            eps_cold,
            stagnation,
            max_depth: self.max_depth,
            joint_target: self.joint_target,
            target: None,
        })
    }
}

fn config_err(field: &str, message: impl ToString) -> Error {
    Error::Config {
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// A partial configuration, as read from a `key=value` file or from flags.
/// Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub n: Option<usize>,
    pub bias: Option<BiasSpec>,
    pub molecules: Option<usize>,
    pub seed: Option<u64>,
    pub eps_cold: Option<f64>,
    pub stagnation: Option<usize>,
    pub max_depth: Option<usize>,
    pub joint_target: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ConfigLayer {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// `-` and `_` are interchangeable in keys.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: k + 1,
                column: 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            layer.set(&key.trim().replace('-', "_"), value.trim())?;
        }
        Ok(layer)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| config_err(key, format!("`{value}` is not a valid number")))
        }
        match key {
            "n" => self.n = Some(num(key, value)?),
            "bias" => {
                self.bias = Some(value.parse().map_err(|e| config_err(key, e))?);
            }
            "molecules" => self.molecules = Some(num::<f64>(key, value).and_then(|m| count(key, m))?),
            "seed" => self.seed = Some(num(key, value)?),
            "eps_cold" => self.eps_cold = Some(num(key, value)?),
            "st" | "stagnation" => self.stagnation = Some(num(key, value)?),
            "max_depth" => self.max_depth = Some(num(key, value)?),
            "joint_target" => self.joint_target = Some(num(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(config_err(other, "unknown key")),
        }
        Ok(())
    }

    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            n: top.n.or(self.n),
            bias: top.bias.or(self.bias),
            molecules: top.molecules.or(self.molecules),
            seed: top.seed.or(self.seed),
            eps_cold: top.eps_cold.or(self.eps_cold),
            stagnation: top.stagnation.or(self.stagnation),
            max_depth: top.max_depth.or(self.max_depth),
            joint_target: top.joint_target.or(self.joint_target),
            out: top.out.or(self.out),
        }
    }

    /// Writes every field that is set into `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(b) = &self.bias {
            cfg.bias = b.clone();
        }
        if self.molecules.is_some() {
            cfg.molecules = self.molecules;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.eps_cold.is_some() {
            cfg.eps_cold = self.eps_cold;
        }
        if self.stagnation.is_some() {
            cfg.stagnation = self.stagnation;
        }
        if let Some(d) = self.max_depth {
            cfg.max_depth = d;
        }
        if let Some(c) = self.joint_target {
            cfg.joint_target = c;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
    }

    /// A full run configuration. `bias` is required; `n` may be inferred
    /// from a bias list.
    pub fn into_run_config(self) -> Result<RunConfig> {
        let bias = self
            .bias
            .clone()
            .ok_or_else(|| config_err("bias", "missing"))?;
        let n = match (&self.n, &bias) {
            (Some(n), _) => *n,
            (None, BiasSpec::List(v)) => v.len(),
            (None, _) => return Err(config_err("n", "missing")),
        };
        let mut cfg = RunConfig::new(n, bias);
        self.apply(&mut cfg);
        cfg.generator_config()?;
        Ok(cfg)
    }
}

/// Accepts `5e6`-style molecule counts as long as they are whole numbers.
fn count(key: &str, m: f64) -> Result<usize> {
    if m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64 * 64.0 {
        Ok(m as usize)
    } else {
        Err(config_err(key, format!("{m} is not a positive whole number")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::new(1000, BiasSpec::Uniform(0.7));
        assert_eq!(cfg.molecules(), 5_000_000);
        assert_eq!(RunConfig::new(70, BiasSpec::Uniform(0.7)).molecules(), 700_000);
        let g = cfg.generator_config().unwrap();
        assert_eq!(g.stagnation, 105);
        assert_eq!(g.max_depth, 100);
        assert_eq!(g.joint_target, 0.9);
    }

    #[test]
    fn parses_file_and_overrides() {
        let text = "# run\nn = 7\nbias=uniform:0.6\nmolecules = 5e4 # small\neps-cold=0.95\nst=3\n\n";
        let file = ConfigLayer::parse(text).unwrap();
        assert_eq!(file.molecules, Some(50_000));
        let flags = ConfigLayer {
            seed: Some(9),
            stagnation: Some(4),
            ..Default::default()
        };
        let cfg = file.overlay(flags).into_run_config().unwrap();
        assert_eq!(cfg.n, 7);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.stagnation, Some(4));
        assert_eq!(cfg.eps_cold, Some(0.95));
    }

    #[test]
    fn names_the_bad_field() {
        let err = ConfigLayer::parse("n=7\nbias=uniform:0.6\njoint_target=1.5")
            .unwrap()
            .into_run_config()
            .unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "joint_target"));
        let err = ConfigLayer::parse("colour=red").unwrap_err();
        assert!(err.to_string().contains("colour"));
        let err = ConfigLayer::parse("n=3\nbias=uniform:1.5").unwrap().into_run_config().unwrap_err();
        assert!(err.to_string().contains("bias"));
        assert!(ConfigLayer::parse("n 7").is_err());
        assert!(ConfigLayer::parse("molecules=2.5").is_err());
    }

    #[test]
    fn infers_n_from_list() {
        let cfg = ConfigLayer::parse("bias=list:0.1,0.2,0.3").unwrap().into_run_config().unwrap();
        assert_eq!(cfg.n, 3);
    }
}
