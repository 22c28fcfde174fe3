use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use svboost::experiment::{self as exp, ConfigLayer, RunConfig, Table};
use svboost::{parse_circuit, BiasSpec};

#[derive(Parser)]
#[command(name = "svboost", version, about = "Bias-boosting circuit generator and analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Number of qubits
    #[arg(long)]
    n: Option<String>,
    /// Initial biases: uniform:E, list:E1,E2,... or alt:EA,chi=X
    #[arg(long)]
    bias: Option<String>,
    /// Molecules in the virtual ensemble (default 10^4 n, at most 5e6)
    #[arg(long)]
    molecules: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Cold threshold (default derived from n and the initial entropy)
    #[arg(long)]
    eps_cold: Option<String>,
    /// Stop after this many steps without a new cold qubit (default 5 + n/10)
    #[arg(long)]
    st: Option<String>,
    #[arg(long)]
    max_depth: Option<String>,
    /// Required joint zero probability of the cold block
    #[arg(long)]
    joint_target: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// key=value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn layer(&self) -> Result<ConfigLayer> {
        let mut layer = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                ConfigLayer::parse(&text).with_context(|| format!("in {}", p.display()))?
            }
            None => ConfigLayer::default(),
        };
        let mut flags = ConfigLayer::default();
        for (key, value) in [
            ("n", &self.n),
            ("bias", &self.bias),
            ("molecules", &self.molecules),
            ("seed", &self.seed),
            ("eps_cold", &self.eps_cold),
            ("st", &self.st),
            ("max_depth", &self.max_depth),
            ("joint_target", &self.joint_target),
        ] {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        flags.out = self.out.clone();
        layer = layer.overlay(flags);
        Ok(layer)
    }

    /// Run configuration with command-specific defaults for `n` and the bias.
    fn run_config(&self, n: usize, bias: BiasSpec) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(n, bias);
        self.layer()?.apply(&mut cfg);
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an initialization circuit for one configuration
    Gen {
        #[command(flatten)]
        common: Common,
        /// Also write per-depth biases of every qubit
        #[arg(long)]
        biases: bool,
    },
    /// Effective entropy against depth for several uniform biases
    DepthTrace {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7,0.9")]
        eps: Vec<f64>,
    },
    /// Terminal effective entropy against the square-root curve
    RelationSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "70,200")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.975")]
        eps: Vec<f64>,
    },
    /// Best cold-block size over several seeds
    Rate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "70,200")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.975")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
    },
    /// Sensitivity of the terminal entropy to the cold threshold
    EpsColdSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.92,0.95,0.97,0.99,0.995")]
        grid: Vec<f64>,
    },
    /// Repeated runs per molecule count: mean, 99% CI and sample variance
    Reliability {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "1e5,5e5,1e6")]
        molecule_grid: Vec<f64>,
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Alternating two-species biases with ratio chi
    Nonuniform {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.6")]
        eps_a: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.4,0.7,1.0")]
        chi: Vec<f64>,
    },
    /// One-step entropy gap of the 3- and 4-wire circuits
    StepStudy {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        wires: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact replay of a circuit file on a product state
    VerifyExact {
        #[command(flatten)]
        common: Common,
        /// Circuit text file
        #[arg(long)]
        circuit: PathBuf,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(t) = threads(&cli.command) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let started = Instant::now();
    run(cli.command)?;
    eprintln!("runtime: {:.3} s", started.elapsed().as_secs_f64());
    Ok(())
}

fn threads(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Gen { common, .. }
        | Command::DepthTrace { common, .. }
        | Command::RelationSweep { common, .. }
        | Command::Rate { common, .. }
        | Command::EpsColdSweep { common, .. }
        | Command::Reliability { common, .. }
        | Command::Nonuniform { common, .. }
        | Command::VerifyExact { common, .. } => common.threads,
        Command::StepStudy { .. } => None,
    }
}

fn emit(dir: &Path, tables: &[(&str, &Table)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, t) in tables {
        let path = dir.join(name);
        t.write(&path).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen { common, biases } => {
            let cfg = common.layer()?.into_run_config()?;
            let out = exp::run_generator(&cfg)?;
            out.write(biases)?;
            let s = &out.summary;
            println!(
                "n={} S={:.6} S_e_end={:.6} depth={} gates={} l={} joint_prob={:.6}",
                s.n, s.entropy, s.effective_end, s.depth, s.gates, s.l, s.joint_prob
            );
            eprintln!("generator: {:.3} s", s.runtime.as_secs_f64());
        }
        Command::DepthTrace { common, eps } => {
            let cfg = common.run_config(1000, BiasSpec::Uniform(0.0))?;
            let runs = exp::depth_trace(&cfg, &eps)?;
            let (curves, summary) = exp::depth_trace_tables(&runs);
            emit(&cfg.out, &[("depth_trace.csv", &curves), ("depth_summary.csv", &summary)])?;
        }
        Command::RelationSweep { common, ns, eps } => {
            let cfg = common.run_config(0, BiasSpec::Uniform(0.0))?;
            let rows = exp::relation_sweep(&cfg, &ns, &eps)?;
            emit(&cfg.out, &[("relation.csv", &exp::relation_table(&rows))])?;
        }
        Command::Rate { common, ns, eps, seeds } => {
            let cfg = common.run_config(0, BiasSpec::Uniform(0.0))?;
            let rows = exp::rate(&cfg, &ns, &eps, seeds)?;
            emit(&cfg.out, &[("rate.csv", &exp::rate_table(&rows))])?;
        }
        Command::EpsColdSweep { common, eps, grid } => {
            let cfg = common.run_config(100, BiasSpec::Uniform(0.0))?;
            let sweep = exp::eps_cold_sweep(&cfg, &eps, &grid)?;
            for e in &sweep.excluded {
                eprintln!("eps_cold = {e} excluded: no qubit can start or finish a boost");
            }
            let (rows, spread) = exp::eps_cold_tables(&sweep);
            emit(&cfg.out, &[("eps_cold.csv", &rows), ("eps_cold_spread.csv", &spread)])?;
        }
        Command::Reliability { common, molecule_grid, samples } => {
            let cfg = common.run_config(100, BiasSpec::Uniform(0.5))?;
            let grid = molecule_grid
                .iter()
                .map(|&m| {
                    if m >= 1.0 && m.fract() == 0.0 {
                        Ok(m as usize)
                    } else {
                        bail!("molecule count {m} is not a positive whole number")
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let study = exp::reliability(&cfg, &grid, samples)?;
            let (runs, stats) = exp::reliability_tables(&study);
            emit(&cfg.out, &[("reliability_runs.csv", &runs), ("reliability.csv", &stats)])?;
            println!("spread of means: {:.6}", study.mean_spread());
        }
        Command::Nonuniform { common, eps_a, chi } => {
            let cfg = common.run_config(70, BiasSpec::Uniform(0.0))?;
            let rows = exp::nonuniform(&cfg, &eps_a, &chi)?;
            emit(&cfg.out, &[("nonuniform.csv", &exp::nonuniform_table(cfg.n, &rows))])?;
        }
        Command::StepStudy { step, wires, out } => {
            if !(step > 0.0 && step <= 1.0) {
                bail!("step {step} outside (0, 1]");
            }
            let points = exp::step_study_grid(&exp::unit_grid(step), &wires)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            emit(&dir, &[("step_study.csv", &exp::step_study_table(&points))])?;
        }
        Command::VerifyExact { common, circuit } => {
            let layer = common.layer()?;
            let spec = layer.bias.clone().context("verify-exact needs --bias")?;
            let text = fs::read_to_string(&circuit)
                .with_context(|| format!("reading {}", circuit.display()))?;
            let width = match (layer.n, &spec) {
                (Some(n), _) => n,
                (None, BiasSpec::List(v)) => v.len(),
                (None, _) => bail!("verify-exact needs --n unless the bias is a list"),
            };
            let c = parse_circuit(&text, width).with_context(|| format!("in {}", circuit.display()))?;
            let report = exp::verify_exact(&c, &spec.resolve(width)?)?;
            let (qubits, entropy) = exp::exact_tables(&report);
            let dir = layer.out.unwrap_or_else(|| PathBuf::from("."));
            emit(&dir, &[("exact_qubits.csv", &qubits), ("exact_entropy.csv", &entropy)])?;
            print!("{}", qubits.to_csv()?);
            print!("{}", entropy.to_csv()?);
        }
    }
    Ok(())
}
