//! Makespan minimisation on batch processing machines with a job
//! compatibility graph, batch capacity two and a setup time between
//! consecutive batches.

pub mod bench;
pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod heuristics;
pub mod matching;
pub mod milp;
pub mod model;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use model::{Batch, Instance, Mode, Schedule, Time};
