//! Finite idiomatic quantales, module lattices and De Morgan law checkers.
//!
//! The crate is layered bottom-up:
//!
//! - [`lattice`]: finite lattices with meet/join tables and Heyting operations.
//! - [`quantale`]: product tables, annihilators, residuals and the annihilator laws.
//! - [`topology`]: finite spaces given by their open sets.
//! - [`spectra`]: prime spectra, the closure operator `μ`, nuclei, `Ψ(A)` and the
//!   regular core.
//! - [`ring`], [`module`], [`module_theory`]: finite rings and modules, submodule
//!   lattices, Hom-sets, the Bican product, `Ann_M`, `(N:L)` and the module-level
//!   theorem harnesses.
//! - [`expr`]: parser for constructor expressions such as `T2(F2)` or `F2^2`.
//! - [`bounds`]: size limits for the exhaustive constructions.

pub mod bounds;
pub mod expr;
pub mod lattice;
pub mod module;
pub mod module_theory;
pub mod quantale;
pub mod ring;
pub mod spectra;
pub mod topology;

pub use bounds::Bounds;
pub use lattice::{Elem, FiniteLattice, LatticeDocument, LatticeError};
pub use module::{FiniteModule, HomSet, SubmoduleLattice};
pub use module_theory::ModuleContext;
pub use quantale::{Mode, Quantale, QuantaleDocument, SubQuantale, Violation};
pub use ring::{AlgebraError, FiniteRing};
pub use topology::FiniteTopSpace;
