//! Document-driven front end: parse a problem document, run one command,
//! render a JSON report and a text summary.

mod commands;
pub mod doc;

use ordtopo_core::{IntervalSemantics, SearchConfig};

pub use doc::ProblemDoc;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<ordtopo_core::Error> for CliError {
    fn from(e: ordtopo_core::Error) -> Self {
        match e {
            ordtopo_core::Error::Inconsistent(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckSet,
    Convergence,
    Fit,
    Theorems,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckSet => "check-set",
            Command::Convergence => "convergence",
            Command::Fit => "fit",
            Command::Theorems => "theorems",
        }
    }
}

/// Command-line settings that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub semantics: Option<IntervalSemantics>,
    pub horizon: Option<usize>,
    pub grid_scale: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub json: String,
    pub text: String,
    /// 0 for any computed verdict, 3 when a report contradicts a published claim.
    pub exit_code: u8,
}

pub fn run(
    command: Command,
    doc: &ProblemDoc,
    overrides: &Overrides,
) -> Result<Rendered, CliError> {
    let semantics = overrides.semantics.unwrap_or(doc.semantics);
    let mut cfg: SearchConfig = doc.search.clone();
    if let Some(h) = overrides.horizon {
        cfg.horizon = h;
    }
    if let Some(g) = overrides.grid_scale {
        cfg.grid_scale = g;
    }
    commands::dispatch(command, doc, semantics, &cfg)
}

/// Parses `text` and runs `command`, on a dedicated pool when `threads` is set.
pub fn run_document(
    command: Command,
    text: &str,
    overrides: &Overrides,
    threads: Option<usize>,
) -> Result<Rendered, CliError> {
    let doc = ProblemDoc::parse(text)?;
    match threads {
        None => run(command, &doc, overrides),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(|| run(command, &doc, overrides)),
    }
}
