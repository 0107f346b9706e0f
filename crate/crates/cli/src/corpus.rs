//! Corpus files: a TOML array of `[[entry]]` tables.
//!
//! ```toml
//! [[entry]]
//! id = "Z6"
//! spec = "Z6"
//! [entry.expected]
//! semiprime_module = true
//! ```
//!
//! `spec` is a constructor expression, or one of the keywords `quantale`
//! and `ring` followed by an inline `[entry.quantale]` document or
//! `[entry.ring]` tables.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use dml_core::expr::Expr;
use dml_core::quantale::QuantaleError;
use dml_core::ring::ring_from_tables;
use dml_core::{AlgebraError, Bounds, FiniteModule, Quantale, QuantaleDocument};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

/// The corpus shipped with the binary.
pub const BUILTIN: &str = include_str!("../corpus/builtin.toml");

/// A finite ring given by label matrices; the entry denotes its regular module.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingTables {
    pub labels: Vec<String>,
    pub add: Vec<Vec<String>>,
    pub mul: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Definition {
    Expr(Expr),
    Quantale(QuantaleDocument),
    Ring(RingTables),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub spec: String,
    pub definition: Definition,
    /// Pinned predicate values, keyed by predicate or `harness.field`.
    pub expected: BTreeMap<String, bool>,
    /// 1-based line of the entry's `id`.
    pub line: usize,
}

/// A built corpus entry.
#[derive(Debug, Clone)]
pub enum Structure {
    Module(Arc<FiniteModule>),
    Quantale(Arc<Quantale>),
}

impl Structure {
    /// Order of the ground ring, for modules.
    pub fn ring_order(&self) -> Option<usize> {
        match self {
            Structure::Module(m) => Some(m.ring().len()),
            Structure::Quantale(_) => None,
        }
    }

    /// Number of elements of the module or quantale.
    pub fn order(&self) -> usize {
        match self {
            Structure::Module(m) => m.len(),
            Structure::Quantale(q) => q.len(),
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error("ring table: {0}")]
    Table(String),
}

impl BuildError {
    /// Whether the failure is a resource bound rather than a malformed entry.
    pub fn is_bound(&self) -> bool {
        matches!(self, BuildError::Algebra(AlgebraError::Bound { .. }))
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}:{line}: duplicate entry id `{id}`")]
    DuplicateId { origin: String, line: usize, id: String },
    #[error("{origin}:{line}: entry `{id}` is invalid: {source}")]
    Invalid {
        origin: String,
        line: usize,
        id: String,
        #[source]
        source: Box<BuildError>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: Spanned<String>,
    spec: Spanned<String>,
    quantale: Option<QuantaleDocument>,
    ring: Option<RingTables>,
    #[serde(default)]
    expected: BTreeMap<String, bool>,
}

impl CorpusEntry {
    pub fn build(&self, bounds: &Bounds) -> Result<Structure, BuildError> {
        match &self.definition {
            Definition::Expr(Expr::Quantale(q)) => {
                let q = q.build().map_err(QuantaleError::from)?;
                check_lattice(q.len(), bounds)?;
                Ok(Structure::Quantale(Arc::new(q)))
            }
            Definition::Expr(expr) => {
                let m = expr.build_module(bounds).expect("module expression")?;
                Ok(Structure::Module(Arc::new(m)))
            }
            Definition::Quantale(doc) => {
                check_lattice(doc.lattice.elements.len(), bounds)?;
                Ok(Structure::Quantale(Arc::new(Quantale::from_document(doc)?)))
            }
            Definition::Ring(t) => {
                let (add, mul) = t.index_tables()?;
                let ring = ring_from_tables(&self.id, t.labels.clone(), add, mul, bounds)?;
                Ok(Structure::Module(Arc::new(FiniteModule::regular(
                    Arc::new(ring),
                    bounds,
                )?)))
            }
        }
    }
}

fn check_lattice(size: usize, bounds: &Bounds) -> Result<(), AlgebraError> {
    if size > bounds.lattice_size {
        return Err(AlgebraError::Bound {
            what: "lattice",
            size,
            bound: bounds.lattice_size,
        });
    }
    Ok(())
}

impl RingTables {
    fn index_tables(&self) -> Result<(Vec<usize>, Vec<usize>), BuildError> {
        let index: HashMap<&str, usize> = self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != self.labels.len() {
            return Err(BuildError::Table("duplicate element label".into()));
        }
        let n = self.labels.len();
        let flatten = |name: &str, rows: &[Vec<String>]| -> Result<Vec<usize>, BuildError> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(BuildError::Table(format!("`{name}` must be a {n}x{n} matrix")));
            }
            rows.iter()
                .flatten()
                .map(|l| {
                    index
                        .get(l.as_str())
                        .copied()
                        .ok_or_else(|| BuildError::Table(format!("unknown label `{l}` in `{name}`")))
                })
                .collect()
        };
        Ok((flatten("add", &self.add)?, flatten("mul", &self.mul)?))
    }
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

pub fn parse_corpus(path: &Path, bounds: &Bounds) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus_str(&text, &path.display().to_string(), bounds)
}

/// Parses and validates a corpus. Entries over a resource bound are kept;
/// the run records them as skipped.
pub fn parse_corpus_str(text: &str, origin: &str, bounds: &Bounds) -> Result<Vec<CorpusEntry>, CorpusError> {
    let syntax = |offset: usize, message: String| {
        let (line, column) = position(text, offset);
        CorpusError::Syntax {
            origin: origin.to_string(),
            line,
            column,
            message,
        }
    };
    let raw: RawCorpus = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        syntax(offset, e.message().to_string())
    })?;

    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.entry.len());
    for r in raw.entry {
        let line = position(text, r.id.span().start).0;
        let id = r.id.into_inner();
        if !seen.insert(id.clone()) {
            return Err(CorpusError::DuplicateId {
                origin: origin.to_string(),
                line,
                id,
            });
        }
        let spec_span = r.spec.span();
        let spec = r.spec.into_inner();
        let definition = match (spec.trim(), r.quantale, r.ring) {
            ("quantale", Some(doc), None) => Definition::Quantale(doc),
            ("ring", None, Some(tables)) => Definition::Ring(tables),
            ("quantale", _, _) => {
                return Err(syntax(
                    spec_span.start,
                    "`quantale` needs exactly an [entry.quantale] table".into(),
                ))
            }
            ("ring", _, _) => {
                return Err(syntax(
                    spec_span.start,
                    "`ring` needs exactly an [entry.ring] table".into(),
                ))
            }
            (_, None, None) => {
                // +1 skips the opening quote of the TOML string
                let expr = Expr::parse(&spec).map_err(|e| syntax(spec_span.start + 1 + e.pos, e.message))?;
                Definition::Expr(expr)
            }
            _ => {
                return Err(syntax(
                    spec_span.start,
                    "inline tables need spec = \"quantale\" or \"ring\"".into(),
                ))
            }
        };
        let entry = CorpusEntry {
            id,
            spec,
            definition,
            expected: r.expected,
            line,
        };
        match entry.build(bounds) {
            Err(e) if !e.is_bound() => {
                return Err(CorpusError::Invalid {
                    origin: origin.to_string(),
                    line,
                    id: entry.id,
                    source: Box::new(e),
                });
            }
            _ => entries.push(entry),
        }
    }
    Ok(entries)
}

pub fn builtin_corpus(bounds: &Bounds) -> Result<Vec<CorpusEntry>, CorpusError> {
    parse_corpus_str(BUILTIN, "builtin", bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
        parse_corpus_str(text, "test", &Bounds::default())
    }

    #[test]
    fn builtin_parses() {
        let entries = builtin_corpus(&Bounds::default()).unwrap();
        assert_eq!(entries.len(), 19);
        assert_eq!(entries[0].id, "Z2");
        assert_eq!(entries[0].line, 8);
    }

    #[test]
    fn ring_orders() {
        let e = parse("[[entry]]\nid = \"a\"\nspec = \"Z6\"\n").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].build(&Bounds::default()).unwrap().ring_order(), Some(6));
        let e = parse("[[entry]]\nid = \"t\"\nspec = \"T2(F2)\"\n").unwrap();
        assert_eq!(e[0].build(&Bounds::default()).unwrap().ring_order(), Some(8));
    }

    #[test]
    fn spec_errors_point_into_the_file() {
        let err = parse("[[entry]]\nid = \"a\"\nspec = \"Z6 y\"\n").unwrap_err();
        match err {
            CorpusError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 12)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = "[[entry]]\nid = \"a\"\nspec = \"Z2\"\n[[entry]]\nid = \"a\"\nspec = \"Z3\"\n";
        assert!(matches!(parse(text), Err(CorpusError::DuplicateId { line: 5, .. })));
    }

    #[test]
    fn inline_ring_tables() {
        let text = r#"
[[entry]]
id = "z2"
spec = "ring"
[entry.ring]
labels = ["0", "1"]
add = [["0", "1"], ["1", "0"]]
mul = [["0", "0"], ["0", "1"]]
"#;
        let e = parse(text).unwrap();
        assert_eq!(e[0].build(&Bounds::default()).unwrap().order(), 2);

        let broken = text.replace(r#"mul = [["0", "0"], ["0", "1"]]"#, r#"mul = [["0", "0"], ["1", "1"]]"#);
        assert!(matches!(parse(&broken), Err(CorpusError::Invalid { line: 3, .. })));
    }

    #[test]
    fn invalid_quantale_reports_axiom() {
        let text = r#"
[[entry]]
id = "bad"
spec = "quantale"
[entry.quantale]
product = [["0", "0", "0"], ["0", "1", "m"], ["0", "m", "1"]]
[entry.quantale.lattice]
elements = ["0", "m", "1"]
covers = [["0", "m"], ["m", "1"]]
"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("ab <= a ^ b"), "{err}");
    }

    #[test]
    fn bound_breaches_are_kept() {
        let b = Bounds::default().with_overrides("module=8").unwrap();
        let e = parse_corpus_str("[[entry]]\nid = \"big\"\nspec = \"Z12\"\n", "t", &b).unwrap();
        assert!(e[0].build(&b).unwrap_err().is_bound());
    }
}
