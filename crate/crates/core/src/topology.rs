//! Finite topological spaces given by an explicit family of open sets.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{escape, FiniteLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("the empty set is not open")]
    MissingEmpty,
    #[error("the whole space is not open")]
    MissingWhole,
    #[error("union of opens {0} and {1} is not open")]
    UnionNotOpen(String, String),
    #[error("intersection of opens {0} and {1} is not open")]
    IntersectionNotOpen(String, String),
    #[error("open set mentions point {0} outside the space")]
    UnknownPoint(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopSpace {
    labels: Vec<String>,
    opens: Vec<FixedBitSet>,
}

/// Point count, open count and separation flags of a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceSummary {
    pub points: Vec<String>,
    pub open_count: usize,
    pub extremely_disconnected: bool,
    pub hausdorff: bool,
}

impl FiniteTopSpace {
    /// Validates that `opens` is a topology on `labels.len()` points.
    /// Duplicate opens are merged; the stored family is sorted canonically.
    pub fn new(labels: Vec<String>, opens: Vec<FixedBitSet>) -> Result<Self, TopologyError> {
        let n = labels.len();
        let mut family: Vec<FixedBitSet> = Vec::with_capacity(opens.len());
        for mut o in opens {
            if let Some(p) = o.ones().find(|&p| p >= n) {
                return Err(TopologyError::UnknownPoint(p));
            }
            o.grow(n);
            let mut exact = FixedBitSet::with_capacity(n);
            exact.extend(o.ones());
            if !family.contains(&exact) {
                family.push(exact);
            }
        }
        family.sort_by_key(|o| (o.count_ones(..), o.ones().collect::<Vec<_>>()));
        let space = Self { labels, opens: family };
        if !space.opens.iter().any(|o| o.is_clear()) {
            return Err(TopologyError::MissingEmpty);
        }
        if !space.opens.iter().any(|o| o.count_ones(..) == n) {
            return Err(TopologyError::MissingWhole);
        }
        for a in &space.opens {
            for b in &space.opens {
                let mut u = a.clone();
                u.union_with(b);
                if !space.is_open(&u) {
                    return Err(TopologyError::UnionNotOpen(space.render(a), space.render(b)));
                }
                let mut i = a.clone();
                i.intersect_with(b);
                if !space.is_open(&i) {
                    return Err(TopologyError::IntersectionNotOpen(space.render(a), space.render(b)));
                }
            }
        }
        Ok(space)
    }

    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        assert!(n < 20, "discrete space too large to list opens");
        let opens = (0usize..1 << n)
            .map(|mask| {
                let mut s = FixedBitSet::with_capacity(n);
                s.extend((0..n).filter(|i| mask & (1 << i) != 0));
                s
            })
            .collect();
        Self::new(labels, opens).expect("powerset is a topology")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn opens(&self) -> &[FixedBitSet] {
        &self.opens
    }

    pub fn is_open(&self, set: &FixedBitSet) -> bool {
        self.opens.iter().any(|o| same_points(o, set))
    }

    /// Smallest closed superset: intersection of all closed supersets.
    pub fn closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let n = self.len();
        let mut out = FixedBitSet::with_capacity(n);
        out.insert_range(..);
        for o in &self.opens {
            // complement of o is closed; it contains `set` iff o misses `set`
            if o.is_disjoint(set) {
                for p in o.ones() {
                    out.set(p, false);
                }
            }
        }
        out
    }

    /// Closure of every open set is open.
    pub fn is_extremely_disconnected(&self) -> bool {
        self.opens.iter().all(|o| self.is_open(&self.closure(o)))
    }

    /// Distinct points have disjoint open neighbourhoods.
    pub fn is_hausdorff(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| {
                self.opens.iter().any(|u| {
                    u.contains(x) && !u.contains(y) && self.opens.iter().any(|v| v.contains(y) && u.is_disjoint(v))
                })
            })
        })
    }

    /// The frame of open sets ordered by inclusion.
    pub fn open_lattice(&self) -> FiniteLattice {
        let labels = self.opens.iter().map(|o| self.render(o)).collect();
        FiniteLattice::from_sets(labels, &self.opens).expect("a topology is a lattice")
    }

    /// A bijection `f` of points with `f(U)` open iff `U` open, if any.
    pub fn homeomorphism(&self, other: &FiniteTopSpace) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.opens.len() != other.opens.len() {
            return None;
        }
        let n = self.len();
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.search_homeomorphism(other, &mut perm, &mut used)
    }

    fn search_homeomorphism(
        &self,
        other: &FiniteTopSpace,
        perm: &mut Vec<usize>,
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        let n = self.len();
        if perm.len() == n {
            let maps_opens = self.opens.iter().all(|o| {
                let mut image = FixedBitSet::with_capacity(n);
                image.extend(o.ones().map(|p| perm[p]));
                other.is_open(&image)
            });
            return maps_opens.then(|| perm.clone());
        }
        let p = perm.len();
        let degree = |s: &FiniteTopSpace, x: usize| s.opens.iter().filter(|o| o.contains(x)).count();
        for q in 0..n {
            if used[q] || degree(self, p) != degree(other, q) {
                continue;
            }
            used[q] = true;
            perm.push(q);
            if let Some(found) = self.search_homeomorphism(other, perm, used) {
                return Some(found);
            }
            perm.pop();
            used[q] = false;
        }
        None
    }

    pub fn summary(&self) -> SpaceSummary {
        SpaceSummary {
            points: self.labels.clone(),
            open_count: self.opens.len(),
            extremely_disconnected: self.is_extremely_disconnected(),
            hausdorff: self.is_hausdorff(),
        }
    }

    /// Graphviz rendering of the specialization order `x <= y` iff
    /// `x` lies in the closure of `{y}`; only covering edges are drawn.
    pub fn to_dot(&self, name: &str) -> String {
        let n = self.len();
        let below: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(y);
                self.closure(&s)
            })
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  p{i} [label=\"{}\"];", escape(label));
        }
        for y in 0..n {
            for x in below[y].ones() {
                if x == y || below[x].contains(y) {
                    continue;
                }
                let covered = below[y]
                    .ones()
                    .any(|z| z != x && z != y && below[z].contains(x) && !below[x].contains(z));
                if !covered {
                    let _ = writeln!(out, "  p{x} -> p{y};");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn render(&self, set: &FixedBitSet) -> String {
        let names: Vec<&str> = set.ones().map(|p| self.labels[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn same_points(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    a.ones().eq(b.ones())
}
