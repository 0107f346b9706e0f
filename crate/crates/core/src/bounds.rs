use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Size limits for the exhaustive constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub ring_order: usize,
    /// Applies to matrix and triangular constructions and to any
    /// explicit table that turns out noncommutative.
    pub noncommutative_ring_order: usize,
    pub module_order: usize,
    /// Cap on candidate generator images tried while enumerating a Hom-set.
    pub hom_candidates: usize,
    /// Cap on the number of submodules of a module.
    pub lattice_size: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            ring_order: 64,
            noncommutative_ring_order: 16,
            module_order: 64,
            hom_candidates: 1 << 20,
            lattice_size: 512,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad bounds override `{0}`: expected key=value with key one of ring, noncommutative_ring, module, hom_candidates, lattice")]
pub struct BoundsParseError(pub String);

impl Bounds {
    /// Applies comma-separated `key=value` overrides, e.g. `module=32,ring=16`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self, BoundsParseError> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || BoundsParseError(part.to_string());
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: usize = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "ring" => self.ring_order = value,
                "noncommutative_ring" => self.noncommutative_ring_order = value,
                "module" => self.module_order = value,
                "hom_candidates" => self.hom_candidates = value,
                "lattice" => self.lattice_size = value,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }
}

impl FromStr for Bounds {
    type Err = BoundsParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bounds::default().with_overrides(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b: Bounds = "module=32, ring=8".parse().unwrap();
        assert_eq!(b.module_order, 32);
        assert_eq!(b.ring_order, 8);
        assert_eq!(b.noncommutative_ring_order, 16);
        assert!("module".parse::<Bounds>().is_err());
        assert!("colour=3".parse::<Bounds>().is_err());
    }
}
