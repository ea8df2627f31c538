//! File formats, reports and the command-line tool built on
//! [`chequenet_core`].
//!
//! * [`io`]: cheque and probability CSV files.
//! * [`snapshot`]: the canonical JSON form of a network.
//! * [`dot`]: Graphviz output, including per-stage cascade frames.
//! * [`report`]: deterministic JSON and CSV reports.
//! * [`cli`]: the `chequenet` subcommands.

pub mod cli;
pub mod dot;
pub mod error;
pub mod io;
pub mod report;
pub mod snapshot;

pub use error::{Error, Result};
