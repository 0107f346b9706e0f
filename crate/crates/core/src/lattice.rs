//! Finite complete lattices.
//!
//! Elements are dense indices `0..n`. The order is stored as a bitset
//! reachability matrix, and binary meet and join tables are computed eagerly
//! at construction, so every lattice is immutable and `Sync` once built.
//! Structural predicates that cost a cubic scan (modularity, distributivity)
//! are memoized on first use behind a `OnceLock`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a lattice element.
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("unknown element id {0}")]
    UnknownElement(Elem),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("order is not antisymmetric: `{0}` <= `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),
    #[error("order is not transitive: `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("`{0}` and `{1}` have no meet")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no join")]
    NoJoin(String, String),
    #[error("operation requires a frame (distributive lattice)")]
    NotAFrame,
}

/// A finite lattice with precomputed order, meet and join tables.
#[derive(Debug)]
pub struct FiniteLattice {
    labels: Vec<String>,
    /// `up[a]` holds every `b` with `a <= b`.
    up: Vec<FixedBitSet>,
    /// `down[a]` holds every `b` with `b <= a`.
    down: Vec<FixedBitSet>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    modular: OnceLock<bool>,
    distributive: OnceLock<bool>,
}

impl Clone for FiniteLattice {
    fn clone(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            meet: self.meet.clone(),
            join: self.join.clone(),
            bottom: self.bottom,
            top: self.top,
            modular: self.modular.clone(),
            distributive: self.distributive.clone(),
        }
    }
}

impl PartialEq for FiniteLattice {
    /// Equality of labelled structures: same labels, same order.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Eq for FiniteLattice {}

impl FiniteLattice {
    /// Builds a lattice from labels and an order predicate `leq(a, b)`.
    ///
    /// The predicate must describe a partial order in which every pair has a
    /// meet and a join; otherwise the first violation is reported.
    pub fn from_order<F>(labels: Vec<String>, leq: F) -> Result<Self, LatticeError>
    where
        F: Fn(Elem, Elem) -> bool,
    {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut seen = HashMap::with_capacity(n);
        for label in &labels {
            if seen.insert(label.as_str(), ()).is_some() {
                return Err(LatticeError::DuplicateLabel(label.clone()));
            }
        }
        let up: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(n);
                s.extend((0..n).filter(|&b| leq(a, b)));
                s
            })
            .collect();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, up_a) in up.iter().enumerate() {
            for b in up_a.ones() {
                down[b].insert(a);
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(LatticeError::NotReflexive(labels[a].clone()));
            }
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return Err(LatticeError::NotAntisymmetric(labels[a].clone(), labels[b].clone()));
                }
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].difference(&up[a]).next().unwrap();
                    return Err(LatticeError::NotTransitive(
                        labels[a].clone(),
                        labels[b].clone(),
                        labels[c].clone(),
                    ));
                }
            }
        }

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower = intersect(&down[a], &down[b]);
                let m = greatest_in(&lower, &down)
                    .ok_or_else(|| LatticeError::NoMeet(labels[a].clone(), labels[b].clone()))?;
                let upper = intersect(&up[a], &up[b]);
                let j = greatest_in(&upper, &up)
                    .ok_or_else(|| LatticeError::NoJoin(labels[a].clone(), labels[b].clone()))?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        // A finite lattice with all binary meets is bounded; find the extremes.
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);

        Ok(Self {
            labels,
            up,
            down,
            meet,
            join,
            bottom,
            top,
            modular: OnceLock::new(),
            distributive: OnceLock::new(),
        })
    }

    /// Builds a lattice from its Hasse diagram, given as `(lower, upper)`
    /// covering pairs. The order is the reflexive-transitive closure.
    pub fn from_covers(labels: Vec<String>, covers: &[(Elem, Elem)]) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut reach = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in reach.iter_mut().enumerate() {
            row.insert(a);
        }
        for &(a, b) in covers {
            if a >= n {
                return Err(LatticeError::UnknownElement(a));
            }
            if b >= n {
                return Err(LatticeError::UnknownElement(b));
            }
            reach[a].insert(b);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = reach[k].clone();
            for row in reach.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_order(labels, |a, b| reach[a].contains(b))
    }

    /// Builds the lattice of a family of sets ordered by inclusion.
    pub fn from_sets(labels: Vec<String>, sets: &[FixedBitSet]) -> Result<Self, LatticeError> {
        Self::from_order(labels, |a, b| sets[a].is_subset(&sets[b]))
    }

    /// The chain `0 < 1 < ... < n-1`, labelled by position.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_order(labels, |a, b| a <= b).expect("chain is a lattice")
    }

    /// The powerset of `{1..k}`; element `i` is the subset with bitmask `i`.
    pub fn boolean(k: u32) -> Self {
        let n = 1usize << k;
        let labels = (0..n)
            .map(|mask| {
                let members: Vec<String> = (0..k)
                    .filter(|bit| mask & (1 << bit) != 0)
                    .map(|bit| (bit + 1).to_string())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        Self::from_order(labels, |a, b| a & b == a).expect("powerset is a lattice")
    }

    /// The diamond `M_3`: bottom, three pairwise incomparable atoms, top.
    pub fn diamond() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(labels, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3 is a lattice")
    }

    /// The pentagon `N_5`: `0 < a < c < 1` and `0 < b < 1`.
    pub fn pentagon() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(labels, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("N5 is a lattice")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<Elem, LatticeError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn check(&self, a: Elem) -> Result<Elem, LatticeError> {
        if a < self.len() {
            Ok(a)
        } else {
            Err(LatticeError::UnknownElement(a))
        }
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    pub fn try_meet(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        Ok(self.meet(self.check(a)?, self.check(b)?))
    }

    pub fn try_join(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        Ok(self.join(self.check(a)?, self.check(b)?))
    }

    /// Join of an arbitrary family; the empty join is the bottom.
    pub fn big_join<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary family; the empty meet is the top.
    pub fn big_meet<I: IntoIterator<Item = Elem>>(&self, xs: I) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Elements below `a`, as a bitset.
    pub fn down_set(&self, a: Elem) -> &FixedBitSet {
        &self.down[a]
    }

    /// Elements above `a`, as a bitset.
    pub fn up_set(&self, a: Elem) -> &FixedBitSet {
        &self.up[a]
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].ones() {
                if a == b {
                    continue;
                }
                let between = self.up[a].ones().any(|c| c != a && c != b && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Maximal elements of `L \ {top}`.
    pub fn coatoms(&self) -> Vec<Elem> {
        self.covers()
            .into_iter()
            .filter(|&(_, b)| b == self.top)
            .map(|(a, _)| a)
            .collect()
    }

    /// Checks `a <= b => (a v c) ^ b = a v (c ^ b)` over all triples.
    pub fn is_modular(&self) -> bool {
        *self.modular.get_or_init(|| self.modular_witness().is_none())
    }

    /// First triple `(a, b, c)` violating the modular law, in index order.
    pub fn modular_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.up[a].ones() {
                for c in self.elements() {
                    if self.meet(self.join(a, c), b) != self.join(a, self.meet(c, b)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Binary distributivity `a ^ (b v c) = (a ^ b) v (a ^ c)`.
    pub fn is_distributive(&self) -> bool {
        *self.distributive.get_or_init(|| self.distributive_witness().is_none())
    }

    pub fn distributive_witness(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                for c in b..self.len() {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Frame law: finite meets distribute over arbitrary joins. On a finite
    /// lattice this coincides with binary distributivity.
    pub fn is_frame(&self) -> bool {
        self.is_distributive()
    }

    /// Frame law quantified over every subset `X` (exponential in `len`).
    ///
    /// Used to cross-check [`is_frame`](Self::is_frame) on small lattices;
    /// returns `None` when the lattice has more than `max_len` elements.
    pub fn frame_law_all_subsets(&self, max_len: usize) -> Option<bool> {
        let n = self.len();
        if n > max_len || n >= usize::BITS as usize {
            return None;
        }
        for mask in 0usize..(1 << n) {
            let xs = || (0..n).filter(move |i| mask & (1 << i) != 0);
            let joined = self.big_join(xs());
            for a in self.elements() {
                if self.meet(a, joined) != self.big_join(xs().map(|x| self.meet(a, x))) {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Relative pseudocomplement `a => b = V{x : x ^ a <= b}`.
    pub fn heyting_implication(&self, a: Elem, b: Elem) -> Result<Elem, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        if !self.is_frame() {
            return Err(LatticeError::NotAFrame);
        }
        Ok(self.implication_unchecked(a, b))
    }

    pub(crate) fn implication_unchecked(&self, a: Elem, b: Elem) -> Elem {
        self.big_join(self.elements().filter(|&x| self.leq(self.meet(x, a), b)))
    }

    /// Pseudocomplement `a => 0`.
    pub fn negation(&self, a: Elem) -> Result<Elem, LatticeError> {
        self.heyting_implication(a, self.bottom)
    }

    /// Some `b` with `a ^ b = 0` and `a v b = 1`, lowest index first.
    pub fn complement(&self, a: Elem) -> Option<Elem> {
        self.elements()
            .find(|&b| self.meet(a, b) == self.bottom && self.join(a, b) == self.top)
    }

    pub fn has_complement(&self, a: Elem) -> bool {
        self.complement(a).is_some()
    }

    /// In a finite lattice every element is compact.
    pub fn compact_elements(&self) -> Vec<Elem> {
        self.elements().collect()
    }

    pub fn is_compact_lattice(&self) -> bool {
        true
    }

    /// Frame De Morgan law `~(a ^ b) = ~a v ~b`, first failing pair if any.
    pub fn frame_dml_witness(&self) -> Result<Option<(Elem, Elem)>, LatticeError> {
        if !self.is_frame() {
            return Err(LatticeError::NotAFrame);
        }
        let neg: Vec<Elem> = self
            .elements()
            .map(|a| self.implication_unchecked(a, self.bottom))
            .collect();
        for a in self.elements() {
            for b in a..self.len() {
                if neg[self.meet(a, b)] != self.join(neg[a], neg[b]) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn satisfies_frame_dml(&self) -> Result<bool, LatticeError> {
        Ok(self.frame_dml_witness()?.is_none())
    }

    /// The subset `members` with the induced order, if it is a lattice.
    ///
    /// Element `i` of the result corresponds to `members[i]`.
    pub fn induced(&self, members: &[Elem]) -> Result<FiniteLattice, LatticeError> {
        for &m in members {
            self.check(m)?;
        }
        let labels = members.iter().map(|&m| self.labels[m].clone()).collect();
        Self::from_order(labels, |a, b| self.leq(members[a], members[b]))
    }

    /// `true` when `f` is an order isomorphism from `self` onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteLattice, f: &[Elem]) -> bool {
        if self.len() != other.len() || f.len() != self.len() {
            return false;
        }
        let mut hit = FixedBitSet::with_capacity(other.len());
        for &y in f {
            if y >= other.len() || hit.contains(y) {
                return false;
            }
            hit.insert(y);
        }
        self.elements()
            .all(|a| self.elements().all(|b| self.leq(a, b) == other.leq(f[a], f[b])))
    }

    pub fn to_document(&self) -> LatticeDocument {
        LatticeDocument {
            elements: self.labels.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }

    pub fn from_document(doc: &LatticeDocument) -> Result<Self, LatticeError> {
        let index: HashMap<&str, Elem> = doc.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |l: &String| {
            index
                .get(l.as_str())
                .copied()
                .ok_or_else(|| LatticeError::UnknownLabel(l.clone()))
        };
        let covers = doc
            .covers
            .iter()
            .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::from_covers(doc.elements.clone(), &covers)
    }

    /// Graphviz rendering of the Hasse diagram, bottom at the bottom.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=plaintext];");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(label));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
        }
        out.push_str("}\n");
        out
    }
}

/// Serialized form of a lattice: element labels plus Hasse edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub elements: Vec<String>,
    /// `[lower, upper]` covering pairs.
    pub covers: Vec<[String; 2]>,
}

fn intersect(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.intersect_with(b);
    out
}

/// The element `g` of `set` whose cone (`cones[g]`) contains all of `set`.
fn greatest_in(set: &FixedBitSet, cones: &[FixedBitSet]) -> Option<Elem> {
    let g = set.ones().max_by_key(|&g| cones[g].count_ones(..))?;
    set.is_subset(&cones[g]).then_some(g)
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
