//! Products on finite lattices: quantales, idiomatic quantales, annihilators,
//! residuals and the De Morgan law checkers.
//!
//! All theorem-level checks use left annihilators `ann(a) = V{x : xa = 0}`.
//! Counterexamples are reported for the first failing tuple in element index
//! order, so reproducers are stable across runs.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice, LatticeDocument, LatticeError};

/// How much structure [`Quantale::new`] demands of a product table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Associative and monotone in each variable. Distributivity over
    /// directed joins is exactly monotonicity on a finite carrier.
    Quasi,
    /// Associative and distributive over all joins in both variables.
    Quantale,
    /// A quantale on a modular lattice with `ab <= a ^ b`.
    Iq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    TableShape,
    Associativity,
    Monotonicity,
    EmptyJoin,
    LeftJoinDistributivity,
    RightJoinDistributivity,
    Modularity,
    TwoSided,
    JoinClosure,
    ProductClosure,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::TableShape => "table shape",
            Axiom::Associativity => "associativity",
            Axiom::Monotonicity => "monotonicity",
            Axiom::EmptyJoin => "empty-join distributivity",
            Axiom::LeftJoinDistributivity => "(a v b)c = ac v bc",
            Axiom::RightJoinDistributivity => "c(a v b) = ca v cb",
            Axiom::Modularity => "modularity",
            Axiom::TwoSided => "ab <= a ^ b",
            Axiom::JoinClosure => "closure under joins",
            Axiom::ProductClosure => "closure under products",
        };
        f.write_str(name)
    }
}

/// A violated axiom together with the witnessing element labels.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{axiom} fails at ({})", witness.join(", "))]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
}

impl Violation {
    fn new(lattice: &FiniteLattice, axiom: Axiom, elems: &[Elem]) -> Self {
        Self {
            axiom,
            witness: elems.iter().map(|&e| lattice.label(e).to_string()).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantaleError {
    #[error(transparent)]
    Violation(#[from] Violation),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
}

/// A finite lattice with a validated associative product table.
#[derive(Debug, Clone)]
pub struct Quantale {
    lattice: Arc<FiniteLattice>,
    product: Vec<Elem>,
    mode: Mode,
    two_sided: bool,
}

impl Quantale {
    /// Validates `table` (row-major, `table[a * n + b] = a·b`) under `mode`.
    pub fn new(lattice: Arc<FiniteLattice>, table: Vec<Elem>, mode: Mode) -> Result<Self, Violation> {
        let n = lattice.len();
        if table.len() != n * n {
            return Err(Violation {
                axiom: Axiom::TableShape,
                witness: vec![format!("{} entries, expected {}", table.len(), n * n)],
            });
        }
        if let Some(pos) = table.iter().position(|&v| v >= n) {
            return Err(Violation::new(&lattice, Axiom::TableShape, &[pos / n, pos % n]));
        }
        let mul = |a: Elem, b: Elem| table[a * n + b];

        let two_sided_witness = two_sided_witness(&lattice, &table);
        if mode == Mode::Iq {
            if let Some((a, b)) = two_sided_witness {
                return Err(Violation::new(&lattice, Axiom::TwoSided, &[a, b]));
            }
            if let Some((a, b, c)) = lattice.modular_witness() {
                return Err(Violation::new(&lattice, Axiom::Modularity, &[a, b, c]));
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Violation::new(&lattice, Axiom::Associativity, &[a, b, c]));
                    }
                }
            }
        }

        match mode {
            Mode::Quasi => {
                for a in 0..n {
                    for b in lattice.up_set(a).ones() {
                        for c in 0..n {
                            if !lattice.leq(mul(a, c), mul(b, c)) || !lattice.leq(mul(c, a), mul(c, b)) {
                                return Err(Violation::new(&lattice, Axiom::Monotonicity, &[a, b, c]));
                            }
                        }
                    }
                }
            }
            Mode::Quantale | Mode::Iq => {
                let zero = lattice.bottom();
                for a in 0..n {
                    if mul(zero, a) != zero || mul(a, zero) != zero {
                        return Err(Violation::new(&lattice, Axiom::EmptyJoin, &[a]));
                    }
                }
                for a in 0..n {
                    for b in a..n {
                        let ab = lattice.join(a, b);
                        for c in 0..n {
                            if mul(ab, c) != lattice.join(mul(a, c), mul(b, c)) {
                                return Err(Violation::new(&lattice, Axiom::LeftJoinDistributivity, &[a, b, c]));
                            }
                            if mul(c, ab) != lattice.join(mul(c, a), mul(c, b)) {
                                return Err(Violation::new(&lattice, Axiom::RightJoinDistributivity, &[a, b, c]));
                            }
                        }
                    }
                }
            }
        }

        Ok(Self {
            lattice,
            product: table,
            mode,
            two_sided: two_sided_witness.is_none(),
        })
    }

    /// The lattice with `a·b = a ^ b`. Valid as a quantale only on frames.
    pub fn with_meet(lattice: Arc<FiniteLattice>, mode: Mode) -> Result<Self, Violation> {
        let n = lattice.len();
        let table = (0..n * n).map(|i| lattice.meet(i / n, i % n)).collect();
        Self::new(lattice, table, mode)
    }

    /// Builds a quantale from a document with a label matrix.
    pub fn from_document(doc: &QuantaleDocument) -> Result<Self, QuantaleError> {
        let lattice = Arc::new(FiniteLattice::from_document(&doc.lattice)?);
        let n = lattice.len();
        if doc.product.len() != n || doc.product.iter().any(|row| row.len() != n) {
            return Err(Violation {
                axiom: Axiom::TableShape,
                witness: vec![format!("product must be a {n}x{n} matrix")],
            }
            .into());
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &doc.product {
            for label in row {
                table.push(lattice.index_of(label)?);
            }
        }
        Ok(Self::new(lattice, table, doc.mode.unwrap_or(Mode::Iq))?)
    }

    pub fn to_document(&self) -> QuantaleDocument {
        let l = &self.lattice;
        QuantaleDocument {
            lattice: l.to_document(),
            product: l
                .elements()
                .map(|a| l.elements().map(|b| l.label(self.product(a, b)).to_string()).collect())
                .collect(),
            mode: Some(self.mode),
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn table(&self) -> &[Elem] {
        &self.product
    }

    #[inline]
    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        self.product[a * self.len() + b]
    }

    /// Whether `ab <= a ^ b` holds everywhere.
    pub fn is_two_sided(&self) -> bool {
        self.two_sided
    }

    pub fn is_iq(&self) -> bool {
        self.two_sided && self.lattice.is_modular()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a..n).all(|b| self.product(a, b) == self.product(b, a)))
    }

    fn bottom(&self) -> Elem {
        self.lattice.bottom()
    }

    fn top(&self) -> Elem {
        self.lattice.top()
    }

    /// Left annihilator `(0:a) = V{x : xa = 0}`.
    pub fn ann_left(&self, a: Elem) -> Elem {
        self.residual_left(self.bottom(), a)
    }

    /// Right annihilator `(a:0) = V{x : ax = 0}`.
    pub fn ann_right(&self, a: Elem) -> Elem {
        self.residual_right(a, self.bottom())
    }

    /// `(a:b) = V{x : ax <= b}`, right adjoint of `a·_`.
    pub fn residual_right(&self, a: Elem, b: Elem) -> Elem {
        let l = &self.lattice;
        l.big_join(l.elements().filter(|&x| l.leq(self.product(a, x), b)))
    }

    /// `(b:a) = V{x : xa <= b}`, right adjoint of `_·a`.
    pub fn residual_left(&self, b: Elem, a: Elem) -> Elem {
        let l = &self.lattice;
        l.big_join(l.elements().filter(|&x| l.leq(self.product(x, a), b)))
    }

    /// Left annihilators of every element, indexed by element.
    pub fn annihilators(&self) -> Vec<Elem> {
        self.lattice.elements().map(|a| self.ann_left(a)).collect()
    }

    /// First `a != 0` with `a² = 0`.
    pub fn semiprime_witness(&self) -> Option<Elem> {
        self.lattice
            .elements()
            .find(|&a| a != self.bottom() && self.product(a, a) == self.bottom())
    }

    pub fn is_semiprime(&self) -> bool {
        self.semiprime_witness().is_none()
    }

    /// Checks the three annihilator laws over all pairs.
    pub fn check_dml_laws(&self) -> DmlLaws {
        let l = &self.lattice;
        let ann = self.annihilators();
        let first = |f: &dyn Fn(Elem, Elem) -> bool| -> LawCheck {
            for a in l.elements() {
                for b in l.elements() {
                    if !f(a, b) {
                        return LawCheck::fails(a, b);
                    }
                }
            }
            LawCheck::holds()
        };
        DmlLaws {
            law1: first(&|a, b| ann[l.join(a, b)] == l.meet(ann[a], ann[b])),
            law2: first(&|a, b| ann[self.product(a, b)] == l.join(ann[a], ann[b])),
            dml: first(&|a, b| ann[l.meet(a, b)] == l.join(ann[a], ann[b])),
        }
    }

    pub fn satisfies_dml(&self) -> bool {
        self.check_dml_laws().dml.holds
    }

    /// For every `a v b = 1` there are `a', b'` with `a v b' = 1 = a' v b`
    /// and `a'b' = 0`.
    pub fn is_normal(&self) -> bool {
        self.normal_witness().is_none()
    }

    pub fn normal_witness(&self) -> Option<(Elem, Elem)> {
        let l = &self.lattice;
        let top = self.top();
        for a in l.elements() {
            for b in l.elements() {
                if l.join(a, b) != top {
                    continue;
                }
                let found = l.elements().filter(|&b2| l.join(a, b2) == top).any(|b2| {
                    l.elements()
                        .filter(|&a2| l.join(a2, b) == top)
                        .any(|a2| self.product(a2, b2) == self.bottom())
                });
                if !found {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Evaluates the three conditions of the semiprime/DML equivalence
    /// independently.
    pub fn annihilator_equivalence(&self) -> Result<AnnihilatorEquivalence, QuantaleError> {
        if !self.is_iq() {
            return Err(QuantaleError::Precondition(
                "requires an idiomatic quantale with ab <= a ^ b",
            ));
        }
        let laws = self.check_dml_laws();
        let l = &self.lattice;
        let ann = self.annihilators();
        let complemented = l.elements().all(|a| l.has_complement(ann[a]));
        let c1 = self.is_semiprime() && laws.dml.holds;
        let c2 = laws.law2.holds;
        let c3 = complemented && laws.dml.holds;
        Ok(AnnihilatorEquivalence {
            semiprime_and_dml: c1,
            law2_all_pairs: c2,
            ann_complemented_and_dml: c3,
            all_agree: c1 == c2 && c2 == c3,
        })
    }

    /// First pair with `ann(ab) != ann(a ^ b)`.
    pub fn product_annihilator_violation(&self) -> Result<Option<(Elem, Elem)>, QuantaleError> {
        if !self.is_semiprime() {
            return Err(QuantaleError::Precondition("requires a semiprime quantale"));
        }
        let l = &self.lattice;
        let ann = self.annihilators();
        Ok(pairs(l.len()).find(|&(a, b)| ann[self.product(a, b)] != ann[l.meet(a, b)]))
    }

    /// First pair with `ab = 0` but `ba != 0` or `a ^ b != 0`.
    pub fn zero_product_asymmetry(&self) -> Result<Option<(Elem, Elem)>, QuantaleError> {
        if !self.is_semiprime() {
            return Err(QuantaleError::Precondition("requires a semiprime quantale"));
        }
        let l = &self.lattice;
        let zero = self.bottom();
        Ok(pairs(l.len())
            .find(|&(a, b)| self.product(a, b) == zero && (self.product(b, a) != zero || l.meet(a, b) != zero)))
    }

    /// Renders element ids as labels.
    pub fn labels_of(&self, elems: &[Elem]) -> Vec<String> {
        elems.iter().map(|&e| self.lattice.label(e).to_string()).collect()
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (Elem, Elem)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn two_sided_witness(lattice: &FiniteLattice, table: &[Elem]) -> Option<(Elem, Elem)> {
    let n = lattice.len();
    pairs(n).find(|&(a, b)| !lattice.leq(table[a * n + b], lattice.meet(a, b)))
}

/// Outcome of a law quantified over all pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    pub counterexample: Option<(Elem, Elem)>,
}

impl LawCheck {
    fn holds() -> Self {
        Self {
            holds: true,
            counterexample: None,
        }
    }

    fn fails(a: Elem, b: Elem) -> Self {
        Self {
            holds: false,
            counterexample: Some((a, b)),
        }
    }
}

/// The annihilator laws: (1) `ann(a v b) = ann a ^ ann b`,
/// (2) `ann(ab) = ann a v ann b`, DML `ann(a ^ b) = ann a v ann b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DmlLaws {
    pub law1: LawCheck,
    pub law2: LawCheck,
    pub dml: LawCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnnihilatorEquivalence {
    pub semiprime_and_dml: bool,
    pub law2_all_pairs: bool,
    pub ann_complemented_and_dml: bool,
    pub all_agree: bool,
}

/// A subset of a quantale closed under products and arbitrary joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubQuantale {
    members: Vec<Elem>,
    mask: FixedBitSet,
}

impl SubQuantale {
    pub fn new(parent: &Quantale, mut members: Vec<Elem>) -> Result<Self, QuantaleError> {
        let l = parent.lattice();
        for &m in &members {
            l.check(m)?;
        }
        members.sort_unstable();
        members.dedup();
        let mut mask = FixedBitSet::with_capacity(l.len());
        mask.extend(members.iter().copied());
        if !mask.contains(l.bottom()) {
            return Err(Violation::new(l, Axiom::JoinClosure, &[]).into());
        }
        for &a in &members {
            for &b in &members {
                if !mask.contains(l.join(a, b)) {
                    return Err(Violation::new(l, Axiom::JoinClosure, &[a, b]).into());
                }
                if !mask.contains(parent.product(a, b)) {
                    return Err(Violation::new(l, Axiom::ProductClosure, &[a, b]).into());
                }
            }
        }
        Ok(Self { members, mask })
    }

    pub fn whole(parent: &Quantale) -> Self {
        let members: Vec<Elem> = parent.lattice().elements().collect();
        let mut mask = FixedBitSet::with_capacity(members.len());
        mask.insert_range(..);
        Self { members, mask }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.mask.contains(a)
    }

    /// Condition (⋆): `0, 1` belong and `1b, b1 <= b` for every member.
    pub fn satisfies_star(&self, parent: &Quantale) -> bool {
        let l = parent.lattice();
        let top = l.top();
        self.contains(l.bottom())
            && self.contains(top)
            && self
                .members
                .iter()
                .all(|&b| l.leq(parent.product(top, b), b) && l.leq(parent.product(b, top), b))
    }
}

/// Serialized quantale: lattice plus a label matrix `product[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantaleDocument {
    pub lattice: LatticeDocument,
    pub product: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}
