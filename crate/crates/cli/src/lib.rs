//! Front end for `bartnik-core`: problem files, artifact formats and
//! command dispatch. The `bartnik` binary is a thin wrapper around
//! [`run::run`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, parse_str, Command, ProblemConfig};
pub use error::CliError;
pub use run::{run, RunOptions, RunReport};

/// Default output directory when neither `--out` nor `[output] dir` is set.
pub const OUT_DIR_ENV: &str = "BARTNIK_OUT_DIR";
