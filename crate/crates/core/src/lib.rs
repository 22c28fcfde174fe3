//! Simulation toolkit for bias-boosting initialization of ensemble quantum
//! computers.
//!
//! - [`gate`] / [`text`]: reversible circuits and their text format
//! - [`ensemble`]: bit-sliced virtual molecular system
//! - [`generator`]: automatic boosting-circuit generation
//! - [`oracle`]: exact population-vector simulation
//! - [`analytics`]: closed-form bias and entropy formulas
//! - [`experiment`]: reproducible runs and sweeps behind the CLI

pub mod analytics;
pub mod bias;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod gate;
pub mod generator;
pub mod oracle;
pub mod rng;
pub mod text;

pub use bias::{BiasSpec, BiasVector};
pub use ensemble::MolecularEnsemble;
pub use error::{Error, Result};
pub use gate::{BasicBoostA, BasicBoostB, Circuit, Gate};
pub use generator::{generate, ColdBlock, EntropyTrace, Generation, GeneratorConfig};
pub use oracle::PopulationVector;
pub use text::{parse_circuit, serialize_circuit};
