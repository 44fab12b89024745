//! Text formats, the staged pipeline and report writers behind the `eqfib`
//! command.

pub mod export;
pub mod format;
pub mod pipeline;
pub mod report;
pub mod samples;

pub use format::{parse, print, Document, ParseError};
pub use pipeline::{run, Manifest, ManifestError, RunOutput, Subject};
pub use report::{Report, Stage, Status, Verdict};
