//! File formats, batch drivers, CLI plumbing and the live WebSocket bridge
//! around [`accordiatron_core`].

pub mod bridge;
pub mod bytelog;
pub mod config;
mod error;
pub mod run;
pub mod serve;
pub mod trace;

pub use config::{OutputFormat, RunConfig};
pub use error::ShellError;
pub use run::{run_decode, run_encode, DecodeInput, EncodeOutput, Timeline};
pub use trace::{load_trace, TraceRecord};
