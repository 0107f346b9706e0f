//! Finite unital left modules, their submodule lattices and Hom-sets.
//!
//! Submodules are element subsets stored as [`FixedBitSet`]s of capacity
//! `|M|`; maps are stored as image tables indexed by element.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::bounds::Bounds;
use crate::lattice::FiniteLattice;
use crate::ring::{cartesian, greedy_label, AlgebraError, FiniteRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    name: String,
    labels: Vec<String>,
    add: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    /// `action[r * |M| + m] = r·m`
    action: Vec<usize>,
}

impl FiniteModule {
    /// Validates an abelian group table and a left action of `ring`.
    pub fn from_tables(
        ring: Arc<FiniteRing>,
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<usize>,
        action: Vec<usize>,
        bounds: &Bounds,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        let k = ring.len();
        if n > bounds.module_order {
            return Err(AlgebraError::Bound {
                what: "module",
                size: n,
                bound: bounds.module_order,
            });
        }
        if n == 0 || add.len() != n * n || action.len() != k * n {
            return Err(AlgebraError::Shape("module tables have the wrong size".into()));
        }
        if add.iter().chain(action.iter()).any(|&v| v >= n) {
            return Err(AlgebraError::Shape("table entry out of range".into()));
        }
        let s = "module";
        let w = |law, elems: &[usize]| AlgebraError::Axiom {
            structure: s,
            law,
            witness: elems.iter().map(|&e| labels[e].clone()).collect(),
        };
        let a = |x: usize, y: usize| add[x * n + y];
        let act = |r: usize, m: usize| action[r * n + m];
        let zero = (0..n)
            .find(|&e| (0..n).all(|x| a(e, x) == x))
            .ok_or_else(|| w("additive identity", &[]))?;
        let neg = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| a(x, y) == zero)
                    .ok_or_else(|| w("additive inverse", &[x]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for x in 0..n {
            for y in 0..n {
                if a(x, y) != a(y, x) {
                    return Err(w("m + n = n + m", &[x, y]));
                }
                for z in 0..n {
                    if a(a(x, y), z) != a(x, a(y, z)) {
                        return Err(w("(m + n) + p = m + (n + p)", &[x, y, z]));
                    }
                }
            }
        }
        // Ring labels and module labels live in different index spaces, so
        // witnesses are rendered by hand.
        let rw = |law, rs: &[usize], ms: &[usize]| AlgebraError::Axiom {
            structure: s,
            law,
            witness: rs
                .iter()
                .map(|&r| ring.label(r).to_string())
                .chain(ms.iter().map(|&m| labels[m].clone()))
                .collect(),
        };
        for m in 0..n {
            if act(ring.one(), m) != m {
                return Err(rw("1m = m", &[], &[m]));
            }
        }
        for r in 0..k {
            for x in 0..n {
                for y in 0..n {
                    if act(r, a(x, y)) != a(act(r, x), act(r, y)) {
                        return Err(rw("r(m + n) = rm + rn", &[r], &[x, y]));
                    }
                }
                for t in 0..k {
                    if act(ring.add(r, t), x) != a(act(r, x), act(t, x)) {
                        return Err(rw("(r + s)m = rm + sm", &[r, t], &[x]));
                    }
                    if act(ring.mul(r, t), x) != act(r, act(t, x)) {
                        return Err(rw("(rs)m = r(sm)", &[r, t], &[x]));
                    }
                }
            }
        }
        Ok(Self {
            ring,
            name: name.into(),
            labels,
            add,
            neg,
            zero,
            action,
        })
    }

    /// `R` as a left module over itself.
    pub fn regular(ring: Arc<FiniteRing>, bounds: &Bounds) -> Result<Self, AlgebraError> {
        let n = ring.len();
        let add = (0..n * n).map(|i| ring.add(i / n, i % n)).collect();
        let action = (0..n * n).map(|i| ring.mul(i / n, i % n)).collect();
        let name = ring.name().to_string();
        let labels = ring.labels().to_vec();
        Self::from_tables(ring, name, labels, add, action, bounds)
    }

    /// The free module `R^k` with componentwise operations.
    pub fn free(ring: Arc<FiniteRing>, k: usize, bounds: &Bounds) -> Result<Self, AlgebraError> {
        if k == 0 {
            return Err(AlgebraError::Shape("free module of rank 0".into()));
        }
        if k == 1 {
            return Self::regular(ring, bounds);
        }
        let size = ring.len().checked_pow(k as u32).unwrap_or(usize::MAX);
        if size > bounds.module_order {
            return Err(AlgebraError::Bound {
                what: "module",
                size,
                bound: bounds.module_order,
            });
        }
        let tuples = cartesian(&vec![ring.len(); k]);
        let index: HashMap<&[usize], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let n = tuples.len();
        let mut add = vec![0; n * n];
        for (i, x) in tuples.iter().enumerate() {
            for (j, y) in tuples.iter().enumerate() {
                let s: Vec<usize> = x.iter().zip(y).map(|(&a, &b)| ring.add(a, b)).collect();
                add[i * n + j] = index[s.as_slice()];
            }
        }
        let mut action = vec![0; ring.len() * n];
        for r in 0..ring.len() {
            for (j, y) in tuples.iter().enumerate() {
                let s: Vec<usize> = y.iter().map(|&b| ring.mul(r, b)).collect();
                action[r * n + j] = index[s.as_slice()];
            }
        }
        let labels = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&x| ring.label(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let name = format!("{}^{k}", ring.name());
        Self::from_tables(ring, name, labels, add, action, bounds)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn label(&self, m: usize) -> &str {
        &self.labels[m]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.len() + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    #[inline]
    pub fn act(&self, r: usize, m: usize) -> usize {
        self.action[r * self.len() + m]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn whole(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn zero_submodule(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert(self.zero);
        s
    }

    /// The submodule generated by `gens`: the additive span of all `r·g`.
    pub fn span(&self, gens: &FixedBitSet) -> FixedBitSet {
        let mut steps = self.empty_set();
        for g in gens.ones() {
            for r in 0..self.ring.len() {
                steps.insert(self.act(r, g));
            }
        }
        let steps: Vec<usize> = steps.ones().filter(|&s| s != self.zero).collect();
        let mut out = self.zero_submodule();
        let mut frontier = vec![self.zero];
        while let Some(x) = frontier.pop() {
            for &s in &steps {
                let y = self.add(x, s);
                if !out.contains(y) {
                    out.insert(y);
                    frontier.push(y);
                }
            }
        }
        out
    }

    /// `Rm`.
    pub fn cyclic(&self, m: usize) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend((0..self.ring.len()).map(|r| self.act(r, m)));
        s
    }

    pub fn sum(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut s = self.empty_set();
        for x in a.ones() {
            for y in b.ones() {
                s.insert(self.add(x, y));
            }
        }
        s
    }

    pub fn is_submodule(&self, set: &FixedBitSet) -> bool {
        set.contains(self.zero)
            && set.ones().all(|x| {
                set.ones().all(|y| set.contains(self.add(x, y)))
                    && (0..self.ring.len()).all(|r| set.contains(self.act(r, x)))
            })
    }

    /// Validates an element list as a submodule.
    pub fn submodule(&self, elems: &[usize]) -> Result<FixedBitSet, AlgebraError> {
        let mut s = self.empty_set();
        for &e in elems {
            if e >= self.len() {
                return Err(AlgebraError::NotASubmodule);
            }
            s.insert(e);
        }
        if self.is_submodule(&s) {
            Ok(s)
        } else {
            Err(AlgebraError::NotASubmodule)
        }
    }

    /// `(0)` for the zero submodule, otherwise `(g1,...)` for a greedy
    /// generating set in element order.
    pub fn submodule_label(&self, set: &FixedBitSet) -> String {
        greedy_label(set, &self.labels, |g| self.span(g))
    }

    /// A generating set chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = self.empty_set();
        let mut span = self.zero_submodule();
        for m in 0..self.len() {
            if !span.contains(m) {
                gens.insert(m);
                span = self.span(&gens);
            }
        }
        gens.ones().collect()
    }

    /// `Λ(M)`: every cyclic submodule, closed under pairwise sums.
    pub fn enumerate_submodules(&self, bounds: &Bounds) -> Result<SubmoduleLattice, AlgebraError> {
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut all: Vec<FixedBitSet> = Vec::new();
        let mut queue: Vec<FixedBitSet> = (0..self.len()).map(|m| self.cyclic(m)).collect();
        while let Some(s) = queue.pop() {
            if seen.contains(&s) {
                continue;
            }
            if all.len() >= bounds.lattice_size {
                return Err(AlgebraError::Bound {
                    what: "submodule lattice",
                    size: all.len() + 1,
                    bound: bounds.lattice_size,
                });
            }
            for t in &all {
                let u = self.sum(&s, t);
                if !seen.contains(&u) {
                    queue.push(u);
                }
            }
            seen.insert(s.clone());
            all.push(s);
        }
        all.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        let labels = all.iter().map(|s| self.submodule_label(s)).collect();
        let lattice = FiniteLattice::from_sets(labels, &all)?;
        Ok(SubmoduleLattice::new(all, lattice))
    }

    /// All homomorphisms `M -> K` for a submodule `K`.
    ///
    /// A map is fixed by the images of [`generators`](Self::generators).
    /// Each generator image is drawn from the elements of `K` that are
    /// killed by every ring element killing the generator; a candidate is
    /// accepted iff propagating `f(m + r·g) = f(m) + r·f(g)` from `0` never
    /// assigns two values to one element.
    pub fn hom_set(&self, target: &FixedBitSet, bounds: &Bounds) -> Result<HomSet, AlgebraError> {
        if !self.is_submodule(target) {
            return Err(AlgebraError::NotASubmodule);
        }
        let gens = self.generators();
        let k = self.ring.len();
        let choices: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                target
                    .ones()
                    .filter(|&v| (0..k).all(|r| self.act(r, g) != self.zero || self.act(r, v) == self.zero))
                    .collect()
            })
            .collect();
        let candidates = choices
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
            .unwrap_or(usize::MAX);
        if candidates > bounds.hom_candidates {
            return Err(AlgebraError::Bound {
                what: "Hom-set candidate space",
                size: candidates,
                bound: bounds.hom_candidates,
            });
        }
        let mut maps = Vec::new();
        for pick in cartesian(&choices.iter().map(Vec::len).collect::<Vec<_>>()) {
            let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if let Some(f) = self.extend(&gens, &images) {
                maps.push(f);
            }
        }
        maps.sort();
        Ok(HomSet { maps })
    }

    fn extend(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        const UNSET: usize = usize::MAX;
        let mut f = vec![UNSET; self.len()];
        f[self.zero] = self.zero;
        let mut frontier = vec![self.zero];
        while let Some(m) = frontier.pop() {
            for (&g, &v) in gens.iter().zip(images) {
                for r in 0..self.ring.len() {
                    let t = self.add(m, self.act(r, g));
                    let value = self.add(f[m], self.act(r, v));
                    if f[t] == UNSET {
                        f[t] = value;
                        frontier.push(t);
                    } else if f[t] != value {
                        return None;
                    }
                }
            }
        }
        Some(f)
    }

    /// Whether `f` is additive and action-equivariant.
    pub fn is_homomorphism(&self, f: &[usize]) -> bool {
        let n = self.len();
        f.len() == n
            && (0..n).all(|x| {
                (0..n).all(|y| f[self.add(x, y)] == self.add(f[x], f[y]))
                    && (0..self.ring.len()).all(|r| f[self.act(r, x)] == self.act(r, f[x]))
            })
    }

    /// `f(S)` as a set.
    pub fn image(&self, f: &[usize], set: &FixedBitSet) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend(set.ones().map(|m| f[m]));
        s
    }

    pub fn kernel(&self, f: &[usize]) -> FixedBitSet {
        let mut s = self.empty_set();
        s.extend((0..self.len()).filter(|&m| f[m] == self.zero));
        s
    }
}

/// Maps `M -> K`, sorted by image table; the zero map is always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSet {
    pub maps: Vec<Vec<usize>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// `Λ(M)` with element sets sorted by size, then by members.
#[derive(Debug, Clone)]
pub struct SubmoduleLattice {
    pub sets: Vec<FixedBitSet>,
    pub lattice: Arc<FiniteLattice>,
    index: HashMap<FixedBitSet, usize>,
}

impl SubmoduleLattice {
    fn new(sets: Vec<FixedBitSet>, lattice: FiniteLattice) -> Self {
        let index = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self {
            sets,
            lattice: Arc::new(lattice),
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: &FixedBitSet) -> Option<usize> {
        self.index.get(set).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Bounds {
        Bounds::default()
    }

    fn regular(ring: FiniteRing) -> FiniteModule {
        FiniteModule::regular(Arc::new(ring), &b()).unwrap()
    }

    #[test]
    fn klein_group_submodules() {
        let f2 = Arc::new(FiniteRing::fp(2, &b()).unwrap());
        let m = FiniteModule::free(f2, 2, &b()).unwrap();
        let subs = m.enumerate_submodules(&b()).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(m.hom_set(&m.whole(), &b()).unwrap().len(), 16);
        assert_eq!(m.hom_set(&m.zero_submodule(), &b()).unwrap().maps, vec![vec![0; 4]]);
    }

    #[test]
    fn z4_homs_into_2z4() {
        let m = regular(FiniteRing::zn(4, &b()).unwrap());
        let target = m.submodule(&[0, 2]).unwrap();
        let homs = m.hom_set(&target, &b()).unwrap();
        assert_eq!(homs.maps, vec![vec![0, 0, 0, 0], vec![0, 2, 0, 2]]);
        assert!(homs.maps.iter().all(|f| m.is_homomorphism(f)));
    }

    #[test]
    fn hom_enumeration_matches_function_space_scan() {
        // Every function Z6 -> Z6, filtered by the homomorphism test.
        let m = regular(FiniteRing::zn(6, &b()).unwrap());
        let all = cartesian(&[6; 6]);
        let brute: Vec<Vec<usize>> = all.into_iter().filter(|f| m.is_homomorphism(f)).collect();
        assert_eq!(m.hom_set(&m.whole(), &b()).unwrap().maps, brute);
    }

    #[test]
    fn ideal_lattices() {
        let z6 = regular(FiniteRing::zn(6, &b()).unwrap());
        let subs = z6.enumerate_submodules(&b()).unwrap();
        let labels: Vec<&str> = subs.lattice.labels().iter().map(|s| s.as_str()).collect();
        assert_eq!(labels, vec!["(0)", "(3)", "(2)", "(1)"]);
        let f3 = regular(FiniteRing::fp(3, &b()).unwrap());
        assert_eq!(f3.enumerate_submodules(&b()).unwrap().len(), 2);
    }

    #[test]
    fn bounds_are_enforced() {
        let f2 = Arc::new(FiniteRing::fp(2, &b()).unwrap());
        let err = FiniteModule::free(f2.clone(), 7, &b()).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::Bound {
                what: "module",
                size: 128,
                bound: 64
            }
        );
        let tight = Bounds {
            hom_candidates: 10,
            ..b()
        };
        let m = FiniteModule::free(f2, 2, &b()).unwrap();
        assert!(matches!(m.hom_set(&m.whole(), &tight), Err(AlgebraError::Bound { .. })));
        let tiny = Bounds { lattice_size: 3, ..b() };
        assert!(m.enumerate_submodules(&tiny).is_err());
    }

    #[test]
    fn rejects_bad_action() {
        let f2 = Arc::new(FiniteRing::fp(2, &b()).unwrap());
        // 1·m = 0 breaks unitality.
        let err = FiniteModule::from_tables(
            f2,
            "bad",
            vec!["0".into(), "1".into()],
            vec![0, 1, 1, 0],
            vec![0, 0, 0, 0],
            &b(),
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::Axiom { law: "1m = m", .. }));
    }
}
