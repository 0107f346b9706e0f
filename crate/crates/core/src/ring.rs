//! Finite rings with identity, given by full addition and multiplication
//! tables.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::bounds::Bounds;
use crate::lattice::{FiniteLattice, LatticeError};
use crate::quantale::{Mode, Quantale, QuantaleError, Violation};
use crate::spectra::SpectraError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{structure} axiom `{law}` fails at ({})", witness.join(", "))]
    Axiom {
        structure: &'static str,
        law: &'static str,
        witness: Vec<String>,
    },
    #[error("{what} has {size} elements, over the bound of {bound}")]
    Bound {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("{0} is not a prime")]
    NotPrime(usize),
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("element set is not a submodule")]
    NotASubmodule,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("internal invariant broken: {0}")]
    Invariant(&'static str),
}

fn axiom(structure: &'static str, law: &'static str, labels: &[String], elems: &[usize]) -> AlgebraError {
    AlgebraError::Axiom {
        structure,
        law,
        witness: elems.iter().map(|&e| labels[e].clone()).collect(),
    }
}

/// A finite associative ring with identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    name: String,
    labels: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteRing {
    /// Validates explicit tables (row-major, `n x n`).
    pub fn from_tables(
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<usize>,
        mul: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::Shape("a ring needs at least one element".into()));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(AlgebraError::Shape(format!("tables must have {} entries", n * n)));
        }
        if add.iter().chain(mul.iter()).any(|&v| v >= n) {
            return Err(AlgebraError::Shape("table entry out of range".into()));
        }
        let s = "ring";
        let a = |x: usize, y: usize| add[x * n + y];
        let m = |x: usize, y: usize| mul[x * n + y];
        let zero = (0..n)
            .find(|&e| (0..n).all(|x| a(e, x) == x))
            .ok_or_else(|| axiom(s, "additive identity", &labels, &[]))?;
        let one = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| axiom(s, "multiplicative identity", &labels, &[]))?;
        let neg = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| a(x, y) == zero)
                    .ok_or_else(|| axiom(s, "additive inverse", &labels, &[x]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for x in 0..n {
            for y in 0..n {
                if a(x, y) != a(y, x) {
                    return Err(axiom(s, "x + y = y + x", &labels, &[x, y]));
                }
                for z in 0..n {
                    if a(a(x, y), z) != a(x, a(y, z)) {
                        return Err(axiom(s, "(x + y) + z = x + (y + z)", &labels, &[x, y, z]));
                    }
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(axiom(s, "(xy)z = x(yz)", &labels, &[x, y, z]));
                    }
                    if m(x, a(y, z)) != a(m(x, y), m(x, z)) {
                        return Err(axiom(s, "x(y + z) = xy + xz", &labels, &[x, y, z]));
                    }
                    if m(a(x, y), z) != a(m(x, z), m(y, z)) {
                        return Err(axiom(s, "(x + y)z = xz + yz", &labels, &[x, y, z]));
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            labels,
            add,
            mul,
            neg,
            zero,
            one,
        })
    }

    fn build<T, FA, FM>(
        name: String,
        elems: Vec<T>,
        label: impl Fn(&T) -> String,
        add: FA,
        mul: FM,
    ) -> Result<Self, AlgebraError>
    where
        T: Eq + std::hash::Hash + Clone,
        FA: Fn(&T, &T) -> T,
        FM: Fn(&T, &T) -> T,
    {
        let index: HashMap<T, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut at = vec![0; n * n];
        let mut mt = vec![0; n * n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                at[i * n + j] = index[&add(x, y)];
                mt[i * n + j] = index[&mul(x, y)];
            }
        }
        Self::from_tables(name, elems.iter().map(label).collect(), at, mt)
    }

    /// `Z/nZ`.
    pub fn zn(n: usize, bounds: &Bounds) -> Result<Self, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::Shape("Z_n needs n >= 2".into()));
        }
        check_bound("ring", n, bounds.ring_order)?;
        Self::build(
            format!("Z{n}"),
            (0..n).collect(),
            |x| x.to_string(),
            |x, y| (x + y) % n,
            |x, y| (x * y) % n,
        )
    }

    /// The prime field `F_p`.
    pub fn fp(p: usize, bounds: &Bounds) -> Result<Self, AlgebraError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(AlgebraError::NotPrime(p));
        }
        let mut r = Self::zn(p, bounds)?;
        r.name = format!("F{p}");
        Ok(r)
    }

    /// Direct product with componentwise operations; labels are tuples.
    pub fn product(factors: &[FiniteRing], bounds: &Bounds) -> Result<Self, AlgebraError> {
        if factors.is_empty() {
            return Err(AlgebraError::Shape("empty product".into()));
        }
        let size = factors
            .iter()
            .try_fold(1usize, |acc, r| acc.checked_mul(r.len()))
            .unwrap_or(usize::MAX);
        check_bound("ring", size, bounds.ring_order)?;
        let tuples = cartesian(&factors.iter().map(|r| r.len()).collect::<Vec<_>>());
        let name = factors.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join("x");
        let ring = Self::build(
            name,
            tuples,
            |t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, r)| r.label(x)).collect();
                format!("({})", parts.join(","))
            },
            |x, y| x.iter().zip(y).zip(factors).map(|((&a, &b), r)| r.add(a, b)).collect(),
            |x, y| x.iter().zip(y).zip(factors).map(|((&a, &b), r)| r.mul(a, b)).collect(),
        )?;
        check_noncommutative(&ring, bounds)?;
        Ok(ring)
    }

    /// The full 2x2 matrix ring over `base`.
    pub fn matrix2(base: &FiniteRing, bounds: &Bounds) -> Result<Self, AlgebraError> {
        let size = base.len().checked_pow(4).unwrap_or(usize::MAX);
        check_bound("noncommutative ring", size, bounds.noncommutative_ring_order)?;
        check_bound("ring", size, bounds.ring_order)?;
        let k = base.len();
        let r = base;
        Self::build(
            format!("M2({})", base.name),
            cartesian(&[k, k, k, k]),
            |e| {
                format!(
                    "[{} {}; {} {}]",
                    r.label(e[0]),
                    r.label(e[1]),
                    r.label(e[2]),
                    r.label(e[3])
                )
            },
            |x, y| (0..4).map(|i| r.add(x[i], y[i])).collect::<Vec<_>>(),
            |x, y| mat_mul(r, x, y),
        )
    }

    /// Upper triangular 2x2 matrices over `F_p`.
    pub fn upper_triangular2(p: usize, bounds: &Bounds) -> Result<Self, AlgebraError> {
        let base = Self::fp(p, bounds)?;
        let size = p.checked_pow(3).unwrap_or(usize::MAX);
        check_bound("noncommutative ring", size, bounds.noncommutative_ring_order)?;
        check_bound("ring", size, bounds.ring_order)?;
        let r = &base;
        let zero = r.zero();
        Self::build(
            format!("T2(F{p})"),
            cartesian(&[p, p, p]),
            |e| format!("[{} {}; 0 {}]", r.label(e[0]), r.label(e[1]), r.label(e[2])),
            |x, y| (0..3).map(|i| r.add(x[i], y[i])).collect::<Vec<_>>(),
            |x, y| {
                let full = mat_mul(r, &[x[0], x[1], zero, x[2]], &[y[0], y[1], zero, y[2]]);
                vec![full[0], full[1], full[3]]
            },
        )
    }

    /// `F_p[x]/(x^2)`, elements `a + bx`.
    pub fn dual_numbers(p: usize, bounds: &Bounds) -> Result<Self, AlgebraError> {
        let base = Self::fp(p, bounds)?;
        check_bound("ring", p * p, bounds.ring_order)?;
        let r = &base;
        Self::build(
            format!("F{p}[x]/(x^2)"),
            cartesian(&[p, p]),
            |e| match (e[0], e[1]) {
                (a, 0) => a.to_string(),
                (0, 1) => "x".to_string(),
                (0, b) => format!("{b}x"),
                (a, 1) => format!("{a}+x"),
                (a, b) => format!("{a}+{b}x"),
            },
            |x, y| vec![r.add(x[0], y[0]), r.add(x[1], y[1])],
            |x, y| vec![r.mul(x[0], y[0]), r.add(r.mul(x[0], y[1]), r.mul(x[1], y[0]))],
        )
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

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.len() + y]
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.len() + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Additive closure of a set of elements.
    pub fn additive_span(&self, gens: &FixedBitSet) -> FixedBitSet {
        let n = self.len();
        let mut out = FixedBitSet::with_capacity(n);
        out.insert(self.zero);
        let mut frontier = vec![self.zero];
        let gens: Vec<usize> = gens.ones().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.add(x, g);
                if !out.contains(y) {
                    out.insert(y);
                    frontier.push(y);
                }
            }
        }
        out
    }

    /// Two-sided ideal generated by a set.
    pub fn ideal_closure(&self, gens: &FixedBitSet) -> FixedBitSet {
        let n = self.len();
        let mut products = FixedBitSet::with_capacity(n);
        for g in gens.ones() {
            for r in 0..n {
                for s in 0..n {
                    products.insert(self.mul(self.mul(r, g), s));
                }
            }
        }
        self.additive_span(&products)
    }

    /// All two-sided ideals, smallest first.
    pub fn ideals(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<FixedBitSet> = (0..n)
            .map(|x| {
                let mut g = FixedBitSet::with_capacity(n);
                g.insert(x);
                self.ideal_closure(&g)
            })
            .collect();
        let mut all: Vec<FixedBitSet> = Vec::new();
        while let Some(i) = queue.pop() {
            if found.insert(i.ones().collect()) {
                for j in all.clone() {
                    let mut u = i.clone();
                    u.union_with(&j);
                    queue.push(self.additive_span(&u));
                }
                all.push(i);
            }
        }
        all.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        all
    }

    /// The quantale of two-sided ideals under `IJ = span{ij}`, built
    /// directly from the ring tables.
    pub fn ideal_quantale(&self) -> Result<(Quantale, Vec<FixedBitSet>), AlgebraError> {
        let ideals = self.ideals();
        let labels = ideals
            .iter()
            .map(|i| greedy_label(i, &self.labels, |g| self.ideal_closure(g)))
            .collect();
        let lattice = Arc::new(FiniteLattice::from_sets(labels, &ideals)?);
        let k = ideals.len();
        let index: HashMap<Vec<usize>, usize> = ideals
            .iter()
            .enumerate()
            .map(|(i, s)| (s.ones().collect(), i))
            .collect();
        let mut table = vec![0; k * k];
        for (a, ia) in ideals.iter().enumerate() {
            for (b, ib) in ideals.iter().enumerate() {
                let mut prods = FixedBitSet::with_capacity(self.len());
                for x in ia.ones() {
                    for y in ib.ones() {
                        prods.insert(self.mul(x, y));
                    }
                }
                let span: Vec<usize> = self.additive_span(&prods).ones().collect();
                table[a * k + b] = index[&span];
            }
        }
        Ok((Quantale::new(lattice, table, Mode::Iq)?, ideals))
    }
}

fn check_bound(what: &'static str, size: usize, bound: usize) -> Result<(), AlgebraError> {
    if size > bound {
        Err(AlgebraError::Bound { what, size, bound })
    } else {
        Ok(())
    }
}

fn check_noncommutative(ring: &FiniteRing, bounds: &Bounds) -> Result<(), AlgebraError> {
    if !ring.is_commutative() {
        check_bound("noncommutative ring", ring.len(), bounds.noncommutative_ring_order)?;
    }
    Ok(())
}

/// Validates an explicit ring and applies the noncommutative bound.
pub fn ring_from_tables(
    name: &str,
    labels: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    bounds: &Bounds,
) -> Result<FiniteRing, AlgebraError> {
    check_bound("ring", labels.len(), bounds.ring_order)?;
    let ring = FiniteRing::from_tables(name, labels, add, mul)?;
    check_noncommutative(&ring, bounds)?;
    Ok(ring)
}

fn mat_mul(r: &FiniteRing, x: &[usize], y: &[usize]) -> Vec<usize> {
    let dot = |a: usize, b: usize, c: usize, d: usize| r.add(r.mul(a, b), r.mul(c, d));
    vec![
        dot(x[0], y[0], x[1], y[2]),
        dot(x[0], y[1], x[1], y[3]),
        dot(x[2], y[0], x[3], y[2]),
        dot(x[2], y[1], x[3], y[3]),
    ]
}

/// All tuples with `t[i] < sizes[i]`, in lexicographic order.
pub(crate) fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..s).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Names a closed set by a greedy generating set taken in index order:
/// `(0)` for the zero set, `(g1,g2,...)` otherwise.
pub(crate) fn greedy_label<F>(set: &FixedBitSet, labels: &[String], closure: F) -> String
where
    F: Fn(&FixedBitSet) -> FixedBitSet,
{
    let mut gens = FixedBitSet::with_capacity(labels.len());
    let mut span = closure(&gens);
    let mut names = Vec::new();
    for x in set.ones() {
        if !span.contains(x) {
            gens.insert(x);
            names.push(labels[x].as_str());
            span = closure(&gens);
        }
    }
    if names.is_empty() {
        "(0)".to_string()
    } else {
        format!("({})", names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Bounds {
        Bounds::default()
    }

    #[test]
    fn zn_and_fields() {
        let z6 = FiniteRing::zn(6, &b()).unwrap();
        assert_eq!(z6.len(), 6);
        assert!(z6.is_commutative());
        assert_eq!(z6.mul(2, 3), 0);
        assert!(matches!(FiniteRing::fp(4, &b()), Err(AlgebraError::NotPrime(4))));
    }

    #[test]
    fn constructions_have_expected_sizes() {
        let f2 = FiniteRing::fp(2, &b()).unwrap();
        let t2 = FiniteRing::upper_triangular2(2, &b()).unwrap();
        assert_eq!(t2.len(), 8);
        assert!(!t2.is_commutative());
        let m2 = FiniteRing::matrix2(&f2, &b()).unwrap();
        assert_eq!(m2.len(), 16);
        assert!(!m2.is_commutative());
        let d = FiniteRing::dual_numbers(2, &b()).unwrap();
        assert_eq!(d.labels(), &["0", "x", "1", "1+x"]);
        let p = FiniteRing::product(&[f2.clone(), f2.clone(), f2], &b()).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.label(p.one()), "(1,1,1)");
    }

    #[test]
    fn noncommutative_bound() {
        let f3 = FiniteRing::fp(3, &b()).unwrap();
        let err = FiniteRing::matrix2(&f3, &b()).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::Bound {
                what: "noncommutative ring",
                size: 81,
                bound: 16
            }
        );
    }

    #[test]
    fn explicit_tables_are_validated() {
        // Z_2 addition with a multiplication that is not distributive.
        let labels = vec!["0".to_string(), "1".to_string()];
        let add = vec![0, 1, 1, 0];
        let mul = vec![1, 0, 0, 1];
        let err = FiniteRing::from_tables("bad", labels, add, mul).unwrap_err();
        assert!(matches!(err, AlgebraError::Axiom { .. }));
    }

    #[test]
    fn ideals_of_small_rings() {
        let z12 = FiniteRing::zn(12, &b()).unwrap();
        assert_eq!(z12.ideals().len(), 6);
        let (q, _) = FiniteRing::zn(6, &b()).unwrap().ideal_quantale().unwrap();
        let labels: Vec<&str> = q.lattice().labels().iter().map(|s| s.as_str()).collect();
        assert_eq!(labels, vec!["(0)", "(3)", "(2)", "(1)"]);
        let t2 = FiniteRing::upper_triangular2(2, &b()).unwrap();
        assert_eq!(t2.ideals().len(), 5);
        let f2 = FiniteRing::fp(2, &b()).unwrap();
        assert_eq!(FiniteRing::matrix2(&f2, &b()).unwrap().ideals().len(), 2);
    }
}
