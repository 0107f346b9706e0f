//! DOT and report exports for single corpus entries.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dml_core::spectra::{psi, spectrum_space};
use dml_core::{AlgebraError, Bounds, ModuleContext, Quantale, SubQuantale};
use thiserror::Error;

use crate::corpus::{BuildError, CorpusEntry, Structure};
use crate::harness::{evaluate, render_stable, Selection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ExportTarget {
    /// Hasse diagram of `Λ(M)`, or of the quantale's lattice.
    Lattice,
    /// Hasse diagram of the fully invariant submodules.
    FiLattice,
    /// Specialization order of the prime spectrum.
    Spectrum,
    /// Hasse diagram of the frame `Ψ`.
    Psi,
    /// The entry's quantale as a TOML document.
    Quantale,
    /// The stable run report for this entry alone.
    Report,
}

impl ExportTarget {
    pub fn name(self) -> &'static str {
        match self {
            ExportTarget::Lattice => "lattice",
            ExportTarget::FiLattice => "fi-lattice",
            ExportTarget::Spectrum => "spectrum",
            ExportTarget::Psi => "psi",
            ExportTarget::Quantale => "quantale",
            ExportTarget::Report => "report",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportTarget::Quantale => "toml",
            ExportTarget::Report => "json",
            _ => "dot",
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("nothing selected for export")]
    EmptySelection,
    #[error("entry `{0}` is over a resource bound: {1}")]
    Skipped(String, String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{target} is not available for `{id}`: {reason}")]
    Unavailable {
        target: &'static str,
        id: String,
        reason: String,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// The text of one export target.
pub fn render(entry: &CorpusEntry, target: ExportTarget, bounds: &Bounds) -> Result<String, ExportError> {
    if target == ExportTarget::Report {
        return Ok(render_stable(&[evaluate(entry, Selection::all(), bounds)]));
    }
    let unavailable = |reason: String| ExportError::Unavailable {
        target: target.name(),
        id: entry.id.clone(),
        reason,
    };
    let structure = entry.build(bounds).map_err(|e| {
        if e.is_bound() {
            ExportError::Skipped(entry.id.clone(), e.to_string())
        } else {
            ExportError::Build(e)
        }
    })?;
    let name = format!("{} {}", entry.id, target.name());
    let (ctx, quantale): (Option<ModuleContext>, Result<Quantale, String>) = match structure {
        Structure::Quantale(q) => (None, Ok((*q).clone())),
        Structure::Module(m) => {
            let ctx = ModuleContext::new(m, bounds)?;
            let q = ctx.fi_quantale().cloned().map_err(|v| v.to_string());
            (Some(ctx), q)
        }
    };
    match target {
        ExportTarget::Lattice => Ok(match &ctx {
            Some(ctx) => ctx.submodules().lattice.to_dot(&name),
            None => quantale.map_err(unavailable)?.lattice().to_dot(&name),
        }),
        ExportTarget::FiLattice => match &ctx {
            Some(ctx) => Ok(ctx.fi_lattice().to_dot(&name)),
            None => Err(unavailable("not a module".into())),
        },
        ExportTarget::Spectrum => {
            let q = quantale.map_err(unavailable)?;
            let spec = spectrum_space(&q, &SubQuantale::whole(&q)).map_err(|e| unavailable(e.to_string()))?;
            Ok(spec.space.to_dot(&name))
        }
        ExportTarget::Psi => {
            let q = quantale.map_err(unavailable)?;
            let stage = psi(&q).map_err(|e| unavailable(e.to_string()))?;
            Ok(stage.lattice.to_dot(&name))
        }
        ExportTarget::Quantale => {
            let q = quantale.map_err(unavailable)?;
            Ok(toml::to_string(&q.to_document()).expect("quantale documents serialize"))
        }
        ExportTarget::Report => unreachable!("handled above"),
    }
}

/// Writes the selected targets. One target goes to `out` itself; several
/// go into `out` as a directory, one file per target.
pub fn export(
    entry: &CorpusEntry,
    targets: &[ExportTarget],
    out: &Path,
    bounds: &Bounds,
) -> Result<Vec<PathBuf>, ExportError> {
    let mut targets = targets.to_vec();
    targets.sort();
    targets.dedup();
    let write = |path: &Path, text: &str| {
        fs::write(path, text).map_err(|source| ExportError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    match targets.as_slice() {
        [] => Err(ExportError::EmptySelection),
        [one] => {
            write(out, &render(entry, *one, bounds)?)?;
            Ok(vec![out.to_path_buf()])
        }
        many => {
            fs::create_dir_all(out).map_err(|source| ExportError::Io {
                path: out.display().to_string(),
                source,
            })?;
            let stem: String = entry
                .id
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
                .collect();
            many.iter()
                .map(|&t| {
                    let path = out.join(format!("{stem}.{}.{}", t.name(), t.extension()));
                    write(&path, &render(entry, t, bounds)?)?;
                    Ok(path)
                })
                .collect()
        }
    }
}
