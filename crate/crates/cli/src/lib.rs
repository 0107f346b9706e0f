//! Corpus runner for the `dml-core` harnesses: corpus parsing, parallel
//! harness runs with deterministic reports, and DOT export.

pub mod corpus;
pub mod export;
pub mod harness;

pub use corpus::{builtin_corpus, parse_corpus, parse_corpus_str, CorpusEntry, CorpusError, Structure};
pub use export::{export, render, ExportError, ExportTarget};
pub use harness::{
    render_report, render_stable, run_harnesses, summarize, HarnessOutcome, RunOptions, RunReport, Selection, Status,
};

/// Environment variable holding default bound overrides, e.g. `module=32,ring=16`.
pub const BOUNDS_ENV: &str = "DML_BOUNDS";
