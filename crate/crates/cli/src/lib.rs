//! Commands behind the `wordpron` binary: lexicon preparation, toy lexicon
//! generation, cross-validated experiment runs, prediction and tree
//! inspection.

pub mod config;
mod generate;
mod inspect;
mod predict;
mod prepare;
mod run;

pub use config::{Overrides, ReportFormat, RunConfig, CONFIG_FORMAT_VERSION};
pub use generate::cmd_generate;
pub use inspect::cmd_inspect;
pub use predict::{cmd_predict, format_prediction};
pub use prepare::{cmd_prepare, PrepareSummary};
pub use run::{cmd_run, RunReport, RunSummary, REPORT_FORMAT_VERSION};

/// A failed command. The variant decides the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or input files (exit 1).
    #[error("{0:#}")]
    Invalid(anyhow::Error),
    /// Failure while doing the work (exit 2).
    #[error("{0:#}")]
    Failed(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) trait ResultExt<T> {
    fn invalid(self) -> CliResult<T>;
    fn failed(self) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for Result<T, E> {
    fn invalid(self) -> CliResult<T> {
        self.map_err(|e| CliError::Invalid(e.into()))
    }

    fn failed(self) -> CliResult<T> {
        self.map_err(|e| CliError::Failed(e.into()))
    }
}

pub(crate) fn read_text(path: &std::path::Path) -> CliResult<String> {
    use anyhow::Context;
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .invalid()
}

pub(crate) fn write_text(path: &std::path::Path, text: &str) -> CliResult<()> {
    use anyhow::Context;
    std::fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .failed()
}
