//! Fully invariant submodules, the Bican product `N_M K`, annihilators
//! `Ann_M(K)`, colons `(N:L)` and the module-level De Morgan harnesses.
//!
//! [`ModuleContext`] enumerates `Λ(M)` and `End(M)` once. Every `Hom(M, K)`
//! is read off `End(M)` as the endomorphisms with image inside `K`.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::bounds::Bounds;
use crate::lattice::FiniteLattice;
use crate::module::{FiniteModule, SubmoduleLattice};
use crate::quantale::{Axiom, Mode, Quantale, SubQuantale, Violation};
use crate::ring::AlgebraError;
use crate::spectra::{mu_nucleus, spectrum_space};

/// A law quantified over tuples of fully invariant submodules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Law {
    pub holds: bool,
    /// Labels of the first failing tuple in index order.
    pub counterexample: Option<Vec<String>>,
}

impl Law {
    fn from_witness(witness: Option<Vec<String>>) -> Self {
        Self {
            holds: witness.is_none(),
            counterexample: witness,
        }
    }
}

/// `(N:L)` together with a flag for inputs outside `Λ^fi(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colon {
    pub members: FixedBitSet,
    pub relaxed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdmlChecks {
    pub sdml: Law,
    pub sdml1: Law,
    pub sdml2: Law,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemOutcome {
    pub item: u8,
    pub status: ItemStatus,
    pub witness: Option<Vec<String>>,
}

/// The six colon properties, with the hypotheses gating items 5 and 6.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColonProperties {
    /// `N = M_M N` for every fully invariant `N`.
    pub self_generator: bool,
    /// `Hom(M, L + K) = Hom(M, L) + Hom(M, K)` for fully invariant `L, K`.
    pub hom_split: bool,
    pub items: Vec<ItemOutcome>,
}

impl ColonProperties {
    pub fn holds(&self) -> bool {
        self.items.iter().all(|i| i.status != ItemStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdmlVariants {
    pub sdml: bool,
    pub sdml1: bool,
    pub sdml2: bool,
    pub sdml2_implies_sdml: bool,
    /// `None` when the self-generator or Hom-splitting hypothesis fails.
    pub sdml2_implies_distributive: Option<bool>,
    /// `None` when `Λ^fi(M)` is not a quantale under the Bican product.
    pub variants_agree: Option<bool>,
}

impl SdmlVariants {
    pub fn holds(&self) -> bool {
        self.sdml2_implies_sdml && self.sdml2_implies_distributive != Some(false) && self.variants_agree != Some(false)
    }
}

/// Commutative product plus each SDML variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsanoConditions {
    pub commutative_product: bool,
    pub sdml: bool,
    pub sdml1: bool,
    pub sdml2: bool,
}

impl AsanoConditions {
    pub fn conditions(&self) -> [bool; 3] {
        let c = self.commutative_product;
        [c && self.sdml, c && self.sdml1, c && self.sdml2]
    }

    pub fn agree(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&x| x == c[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaerCharacterization {
    pub semiprime_and_dml: bool,
    pub retractable_and_ann_product: bool,
    pub retractable_and_ann_decomposition: bool,
    pub retractable_baer_central: bool,
    pub semiprime_and_sp_dml: bool,
    pub semiprime_and_spec_extremely_disconnected: bool,
    pub all_agree: bool,
    pub semiprime_witness: Option<String>,
    pub dml_counterexample: Option<Vec<String>>,
}

impl BaerCharacterization {
    pub fn conditions(&self) -> [bool; 6] {
        [
            self.semiprime_and_dml,
            self.retractable_and_ann_product,
            self.retractable_and_ann_decomposition,
            self.retractable_baer_central,
            self.semiprime_and_sp_dml,
            self.semiprime_and_spec_extremely_disconnected,
        ]
    }
}

/// `Ψ(M)` from its definition and as the fixed points of `Ler`.
#[derive(Debug, Clone)]
pub struct PsiModule {
    /// Indices into `Λ^fi(M)`.
    pub direct: Vec<usize>,
    pub ler_fixed: Vec<usize>,
    pub lattice: FiniteLattice,
}

impl PsiModule {
    pub fn agree(&self) -> bool {
        self.direct == self.ler_fixed
    }
}

/// The two readings of `SP(M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpComparison {
    /// Semiprime fully invariant submodules together with `M`.
    pub semiprime_submodules: Vec<String>,
    /// Fixed points of `μ` on `Λ^fi(M)`.
    pub mu_fixed: Vec<String>,
    pub equal: bool,
}

type TripleCheck<'a> = Box<dyn Fn(usize, usize, usize) -> bool + 'a>;

#[derive(Debug, Clone)]
pub struct ModuleContext {
    module: Arc<FiniteModule>,
    subs: SubmoduleLattice,
    end: Vec<Vec<usize>>,
    /// Per submodule, the endomorphisms with image inside it.
    hom: Vec<Vec<usize>>,
    fi: Vec<usize>,
    fi_of: Vec<Option<usize>>,
    fi_lattice: Arc<FiniteLattice>,
    /// Over `Λ^fi` indices.
    product: Vec<usize>,
    ann: Vec<usize>,
    colon: Vec<usize>,
    quantale: Result<Quantale, Violation>,
    /// Per element `m`, the `Λ` index of `Ann_M(Rm)`.
    ann_cyclic: Vec<usize>,
}

impl ModuleContext {
    pub fn new(module: Arc<FiniteModule>, bounds: &Bounds) -> Result<Self, AlgebraError> {
        let subs = module.enumerate_submodules(bounds)?;
        let end = module.hom_set(&module.whole(), bounds)?.maps;
        let hom: Vec<Vec<usize>> = subs
            .sets
            .iter()
            .map(|k| {
                (0..end.len())
                    .filter(|&f| end[f].iter().all(|&v| k.contains(v)))
                    .collect()
            })
            .collect();
        let fi: Vec<usize> = (0..subs.len())
            .filter(|&i| {
                end.iter()
                    .all(|f| subs.sets[i].ones().all(|m| subs.sets[i].contains(f[m])))
            })
            .collect();
        let mut fi_of = vec![None; subs.len()];
        for (j, &i) in fi.iter().enumerate() {
            fi_of[i] = Some(j);
        }
        let fi_lattice = Arc::new(subs.lattice.induced(&fi)?);
        let mut ctx = Self {
            module,
            subs,
            end,
            hom,
            fi,
            fi_of,
            fi_lattice,
            product: Vec::new(),
            ann: Vec::new(),
            colon: Vec::new(),
            quantale: Err(Violation {
                axiom: Axiom::TableShape,
                witness: Vec::new(),
            }),
            ann_cyclic: Vec::new(),
        };
        ctx.fill_tables()?;
        Ok(ctx)
    }

    fn fill_tables(&mut self) -> Result<(), AlgebraError> {
        let k = self.fi.len();
        let mut product = vec![0; k * k];
        let mut not_fi = None;
        for a in 0..k {
            for b in 0..k {
                let p = self.bican_product(self.fi_set(a), self.fi_set(b));
                let lambda = self.lambda_index(&p)?;
                match self.fi_of[lambda] {
                    Some(j) => product[a * k + b] = j,
                    None => {
                        not_fi.get_or_insert((a, b));
                    }
                }
            }
        }
        let ann = (0..k)
            .map(|a| {
                let s = self.annihilator(self.fi_set(a));
                self.fi_index(&s)
                    .ok_or(AlgebraError::Invariant("Ann_M(K) is not fully invariant"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut colon = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                let c = self.colon_set(self.fi_set(a), self.fi[b]);
                colon[a * k + b] = self
                    .fi_index(&c)
                    .ok_or(AlgebraError::Invariant("(N:L) is not fully invariant"))?;
            }
        }
        let ann_cyclic = (0..self.module.len())
            .map(|m| {
                let s = self.annihilator(&self.module.cyclic(m));
                self.lambda_index(&s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.quantale = match not_fi {
            Some((a, b)) => Err(Violation {
                axiom: Axiom::ProductClosure,
                witness: vec![self.fi_label(a).to_string(), self.fi_label(b).to_string()],
            }),
            None => Quantale::new(self.fi_lattice.clone(), product.clone(), Mode::Iq),
        };
        self.product = product;
        self.ann = ann;
        self.colon = colon;
        self.ann_cyclic = ann_cyclic;
        Ok(())
    }

    fn lambda_index(&self, set: &FixedBitSet) -> Result<usize, AlgebraError> {
        self.subs.index_of(set).ok_or(AlgebraError::NotASubmodule)
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    /// `Λ(M)`.
    pub fn submodules(&self) -> &SubmoduleLattice {
        &self.subs
    }

    /// `End(M)`, sorted by image table.
    pub fn endomorphisms(&self) -> &[Vec<usize>] {
        &self.end
    }

    /// `Hom(M, K)` viewed inside `End(M)`.
    pub fn hom_into(&self, k: &FixedBitSet) -> Vec<&[usize]> {
        match self.subs.index_of(k) {
            Some(i) => self.hom[i].iter().map(|&f| self.end[f].as_slice()).collect(),
            None => self
                .end
                .iter()
                .filter(|f| f.iter().all(|&v| k.contains(v)))
                .map(Vec::as_slice)
                .collect(),
        }
    }

    /// `Λ^fi(M)` as indices into [`submodules`](Self::submodules).
    pub fn fully_invariant(&self) -> &[usize] {
        &self.fi
    }

    /// `Λ^fi(M)`; element `i` is the submodule `fi_set(i)`.
    pub fn fi_lattice(&self) -> &Arc<FiniteLattice> {
        &self.fi_lattice
    }

    pub fn fi_len(&self) -> usize {
        self.fi.len()
    }

    pub fn fi_set(&self, i: usize) -> &FixedBitSet {
        &self.subs.sets[self.fi[i]]
    }

    pub fn fi_label(&self, i: usize) -> &str {
        self.fi_lattice.label(i)
    }

    pub fn fi_index(&self, set: &FixedBitSet) -> Option<usize> {
        self.subs.index_of(set).and_then(|i| self.fi_of[i])
    }

    pub fn is_fully_invariant(&self, set: &FixedBitSet) -> bool {
        self.end.iter().all(|f| set.ones().all(|m| set.contains(f[m])))
    }

    fn labels(&self, fis: &[usize]) -> Vec<String> {
        fis.iter().map(|&i| self.fi_label(i).to_string()).collect()
    }

    /// `N_M K`: the submodule generated by all `f(N)`, `f ∈ Hom(M, K)`.
    pub fn bican_product(&self, n: &FixedBitSet, k: &FixedBitSet) -> FixedBitSet {
        let mut images = self.module.empty_set();
        for f in self.hom_into(k) {
            images.extend(n.ones().map(|m| f[m]));
        }
        self.module.span(&images)
    }

    /// `Ann_M(K)`: the intersection of the kernels of all `f: M -> K`.
    pub fn annihilator(&self, k: &FixedBitSet) -> FixedBitSet {
        let mut out = self.module.whole();
        for f in self.hom_into(k) {
            out.intersect_with(&self.module.kernel(f));
        }
        out
    }

    fn colon_set(&self, n: &FixedBitSet, l_index: usize) -> FixedBitSet {
        let maps = &self.hom[l_index];
        let mut s = self.module.empty_set();
        s.extend((0..self.module.len()).filter(|&m| maps.iter().all(|&f| n.contains(self.end[f][m]))));
        s
    }

    /// `(N:L) = {m : f(m) ∈ N for all f ∈ Hom(M, L)}`.
    pub fn colon(&self, n: &FixedBitSet, l: &FixedBitSet) -> Colon {
        let relaxed = self.fi_index(n).is_none() || self.fi_index(l).is_none();
        let maps = self.hom_into(l);
        let mut members = self.module.empty_set();
        members.extend((0..self.module.len()).filter(|&m| maps.iter().all(|f| n.contains(f[m]))));
        Colon { members, relaxed }
    }

    /// `Λ^fi(M)` under the Bican product, or the first failed axiom.
    pub fn fi_quantale(&self) -> Result<&Quantale, &Violation> {
        self.quantale.as_ref()
    }

    /// `Λ(M)` under the Bican product, validated as a quasi-quantale.
    pub fn submodule_quantale(&self) -> Result<Quantale, Violation> {
        let n = self.subs.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = self.bican_product(&self.subs.sets[a], &self.subs.sets[b]);
                table[a * n + b] = self.subs.index_of(&p).expect("products are submodules");
            }
        }
        Quantale::new(self.subs.lattice.clone(), table, Mode::Quasi)
    }

    fn quantale_or_precondition(&self) -> Result<&Quantale, AlgebraError> {
        self.quantale
            .as_ref()
            .map_err(|_| AlgebraError::Precondition("Λ^fi(M) is not a quantale under the Bican product"))
    }

    /// Index-level product on `Λ^fi`.
    pub fn product_fi(&self, a: usize, b: usize) -> usize {
        self.product[a * self.fi.len() + b]
    }

    pub fn ann_fi(&self, a: usize) -> usize {
        self.ann[a]
    }

    pub fn colon_fi(&self, n: usize, l: usize) -> usize {
        self.colon[n * self.fi.len() + l]
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.fi.len();
        (0..k).flat_map(move |a| (0..k).map(move |b| (a, b)))
    }

    fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let k = self.fi.len();
        self.pairs().flat_map(move |(a, b)| (0..k).map(move |c| (a, b, c)))
    }

    /// A nonzero fully invariant `N` with `N_M N = 0`.
    pub fn semiprime_witness(&self) -> Option<usize> {
        let zero = self.fi_lattice.bottom();
        (0..self.fi.len()).find(|&n| n != zero && self.product_fi(n, n) == zero)
    }

    pub fn is_semiprime_module(&self) -> bool {
        self.semiprime_witness().is_none()
    }

    fn proper_fi(&self, n: &FixedBitSet) -> Result<usize, AlgebraError> {
        let i = self
            .fi_index(n)
            .ok_or(AlgebraError::Precondition("submodule must be fully invariant"))?;
        if i == self.fi_lattice.top() {
            return Err(AlgebraError::Precondition("submodule must be proper"));
        }
        Ok(i)
    }

    /// `L_M K ≤ N` forces `L ≤ N` or `K ≤ N`, over fully invariant `L, K`.
    pub fn is_prime_submodule(&self, n: &FixedBitSet) -> Result<bool, AlgebraError> {
        let n = self.proper_fi(n)?;
        let l = &self.fi_lattice;
        Ok(self
            .pairs()
            .all(|(a, b)| !l.leq(self.product_fi(a, b), n) || l.leq(a, n) || l.leq(b, n)))
    }

    /// `L_M L ≤ N` forces `L ≤ N`, over fully invariant `L`.
    pub fn is_semiprime_submodule(&self, n: &FixedBitSet) -> Result<bool, AlgebraError> {
        let n = self.proper_fi(n)?;
        Ok(self.semiprime_fi(n))
    }

    fn semiprime_fi(&self, n: usize) -> bool {
        let l = &self.fi_lattice;
        (0..self.fi.len()).all(|a| !l.leq(self.product_fi(a, a), n) || l.leq(a, n))
    }

    /// Every nonzero fully invariant `K` receives a nonzero map from `M`.
    pub fn is_fi_retractable(&self) -> bool {
        let zero = self.module.zero();
        (0..self.fi.len()).filter(|&k| k != self.fi_lattice.bottom()).all(|k| {
            self.hom[self.fi[k]]
                .iter()
                .any(|&f| self.end[f].iter().any(|&v| v != zero))
        })
    }

    /// Submodules `L` with `N ∩ L = 0` and `N + L = M`, as `Λ` indices.
    pub fn complements(&self, n: &FixedBitSet) -> Vec<usize> {
        let lat = &self.subs.lattice;
        match self.subs.index_of(n) {
            Some(i) => lat
                .elements()
                .filter(|&l| lat.meet(i, l) == lat.bottom() && lat.join(i, l) == lat.top())
                .collect(),
            None => Vec::new(),
        }
    }

    /// `Ann_M(N)` is a direct summand for every fully invariant `N`.
    pub fn is_fi_baer(&self) -> bool {
        (0..self.fi.len()).all(|n| !self.complements(self.fi_set(self.ann[n])).is_empty())
    }

    /// The projection onto `a` along `l` for `M = a ⊕ l`.
    pub fn projection(&self, a: &FixedBitSet, l: &FixedBitSet) -> Vec<usize> {
        let mut pi = vec![self.module.zero(); self.module.len()];
        for x in a.ones() {
            for y in l.ones() {
                pi[self.module.add(x, y)] = x;
            }
        }
        pi
    }

    pub fn is_central(&self, e: &[usize]) -> bool {
        self.end
            .iter()
            .all(|f| (0..self.module.len()).all(|m| f[e[m]] == e[f[m]]))
    }

    /// `Ann_M(N ∩ L) = Ann_M(N) + Ann_M(L)` over fully invariant pairs.
    pub fn module_dml(&self) -> Law {
        let l = &self.fi_lattice;
        Law::from_witness(
            self.pairs()
                .find(|&(a, b)| self.ann[l.meet(a, b)] != l.join(self.ann[a], self.ann[b]))
                .map(|(a, b)| self.labels(&[a, b])),
        )
    }

    pub fn sdml_checks(&self) -> SdmlChecks {
        let l = &self.fi_lattice;
        let c = |a, b| self.colon_fi(a, b);
        let sdml = self
            .pairs()
            .find(|&(n, m)| l.join(c(n, m), c(m, n)) != l.top())
            .map(|(n, m)| self.labels(&[n, m]));
        let sdml1 = self
            .triples()
            .find(|&(n, m, k)| c(l.join(n, m), k) != l.join(c(n, k), c(m, k)))
            .map(|(n, m, k)| self.labels(&[n, m, k]));
        let sdml2 = self
            .triples()
            .find(|&(n, m, k)| c(n, l.meet(m, k)) != l.join(c(n, m), c(n, k)))
            .map(|(n, m, k)| self.labels(&[n, m, k]));
        SdmlChecks {
            sdml: Law::from_witness(sdml),
            sdml1: Law::from_witness(sdml1),
            sdml2: Law::from_witness(sdml2),
        }
    }

    /// `N = M_M N` for every fully invariant `N`.
    pub fn is_self_generator(&self) -> bool {
        let top = self.fi_lattice.top();
        (0..self.fi.len()).all(|n| self.product_fi(top, n) == n)
    }

    /// `Hom(M, L + K) = Hom(M, L) + Hom(M, K)` for fully invariant `L, K`.
    pub fn hom_splits(&self) -> bool {
        let m = &self.module;
        self.pairs().all(|(a, b)| {
            let sum = self.fi[self.fi_lattice.join(a, b)];
            let sums: HashSet<Vec<usize>> = self.hom[self.fi[a]]
                .iter()
                .flat_map(|&g| {
                    self.hom[self.fi[b]]
                        .iter()
                        .map(move |&h| (0..m.len()).map(|x| m.add(self.end[g][x], self.end[h][x])).collect())
                })
                .collect();
            self.hom[sum].iter().all(|&f| sums.contains(&self.end[f]))
        })
    }

    pub fn colon_properties(&self) -> ColonProperties {
        let l = &self.fi_lattice;
        let c = |a, b| self.colon_fi(a, b);
        let top = l.top();
        let self_generator = self.is_self_generator();
        let hom_split = self.hom_splits();
        let find = |pred: &dyn Fn(usize, usize, usize) -> bool| {
            self.triples()
                .find(|&(n, m, k)| !pred(n, m, k))
                .map(|(n, m, k)| self.labels(&[n, m, k]))
        };
        let checks: [(bool, TripleCheck<'_>); 6] = [
            (true, Box::new(|n, m, _| !l.leq(m, n) || c(n, m) == top)),
            (
                true,
                Box::new(|n, m, k| !l.leq(m, n) || (l.leq(c(m, k), c(n, k)) && l.leq(c(k, n), c(k, m)))),
            ),
            (true, Box::new(|n, m, k| c(l.meet(n, m), k) == l.meet(c(n, k), c(m, k)))),
            (
                true,
                Box::new(|n, m, k| l.leq(c(n, l.join(m, k)), l.meet(c(n, m), c(n, k)))),
            ),
            (self_generator, Box::new(|n, m, _| c(n, m) != top || l.leq(m, n))),
            (
                hom_split,
                Box::new(|n, m, k| l.leq(l.meet(c(n, m), c(n, k)), c(n, l.join(m, k)))),
            ),
        ];
        let items = checks
            .iter()
            .enumerate()
            .map(|(i, (enabled, pred))| {
                let item = i as u8 + 1;
                if !enabled {
                    return ItemOutcome {
                        item,
                        status: ItemStatus::Skipped,
                        witness: None,
                    };
                }
                let witness = find(pred.as_ref());
                ItemOutcome {
                    item,
                    status: if witness.is_none() {
                        ItemStatus::Pass
                    } else {
                        ItemStatus::Fail
                    },
                    witness,
                }
            })
            .collect();
        ColonProperties {
            self_generator,
            hom_split,
            items,
        }
    }

    pub fn sdml_variants(&self) -> SdmlVariants {
        let s = self.sdml_checks();
        let (sdml, sdml1, sdml2) = (s.sdml.holds, s.sdml1.holds, s.sdml2.holds);
        let hypotheses = self.is_self_generator() && self.hom_splits();
        SdmlVariants {
            sdml,
            sdml1,
            sdml2,
            sdml2_implies_sdml: !sdml2 || sdml,
            sdml2_implies_distributive: hypotheses.then(|| !sdml2 || self.fi_lattice.is_distributive()),
            variants_agree: self.quantale.is_ok().then_some(sdml == sdml1 && sdml1 == sdml2),
        }
    }

    pub fn asano_conditions(&self) -> AsanoConditions {
        let s = self.sdml_checks();
        AsanoConditions {
            commutative_product: self
                .pairs()
                .all(|(a, b)| self.product_fi(a, b) == self.product_fi(b, a)),
            sdml: s.sdml.holds,
            sdml1: s.sdml1.holds,
            sdml2: s.sdml2.holds,
        }
    }

    /// `Ler(N) = {m : N + Ann_M(Rm) = M}`.
    pub fn ler(&self, n: &FixedBitSet) -> FixedBitSet {
        let m = &self.module;
        let mut out = m.empty_set();
        out.extend((0..m.len()).filter(|&x| m.sum(n, &self.subs.sets[self.ann_cyclic[x]]).count_ones(..) == m.len()));
        out
    }

    /// `Ψ(M)`: fully invariant `N` with `N + Ann_M(Rn) = M` for all `n ∈ N`.
    pub fn psi_module(&self) -> Result<PsiModule, AlgebraError> {
        let m = &self.module;
        let full = |n: &FixedBitSet, x: usize| m.sum(n, &self.subs.sets[self.ann_cyclic[x]]).count_ones(..) == m.len();
        let direct: Vec<usize> = (0..self.fi.len())
            .filter(|&i| self.fi_set(i).ones().all(|x| full(self.fi_set(i), x)))
            .collect();
        let ler_fixed: Vec<usize> = (0..self.fi.len())
            .filter(|&i| &self.ler(self.fi_set(i)) == self.fi_set(i))
            .collect();
        let lattice = self.fi_lattice.induced(&direct)?;
        Ok(PsiModule {
            direct,
            ler_fixed,
            lattice,
        })
    }

    /// The six conditions characterizing semiprime modules with DML.
    pub fn baer_characterization(&self) -> Result<BaerCharacterization, AlgebraError> {
        let q = self.quantale_or_precondition()?;
        let l = &self.fi_lattice;
        let k = self.fi.len();
        let semiprime_witness = self.semiprime_witness();
        let semiprime = semiprime_witness.is_none();
        let retractable = self.is_fi_retractable();
        let dml = self.module_dml();

        let ann_product = self
            .pairs()
            .all(|(a, b)| self.ann[self.product_fi(a, b)] == l.join(self.ann[a], self.ann[b]));
        let decomposition = (0..k).all(|n| {
            let (a, aa) = (self.ann[n], self.ann[self.ann[n]]);
            l.meet(a, aa) == l.bottom() && l.join(a, aa) == l.top()
        });
        let central = (0..k).all(|n| {
            let a = self.fi_set(self.ann[n]);
            self.complements(a)
                .iter()
                .any(|&c| self.is_central(&self.projection(a, &self.subs.sets[c])))
        });

        let whole = SubQuantale::whole(q);
        let sp_dml = if semiprime {
            let sp = mu_nucleus(q, &whole)?.quotient()?;
            sp.is_frame() && sp.satisfies_frame_dml()?
        } else {
            false
        };
        let spec_ed = semiprime && spectrum_space(q, &whole)?.space.is_extremely_disconnected();

        let mut report = BaerCharacterization {
            semiprime_and_dml: semiprime && dml.holds,
            retractable_and_ann_product: retractable && ann_product,
            retractable_and_ann_decomposition: retractable && decomposition,
            retractable_baer_central: retractable && self.is_fi_baer() && central,
            semiprime_and_sp_dml: sp_dml,
            semiprime_and_spec_extremely_disconnected: spec_ed,
            all_agree: false,
            semiprime_witness: semiprime_witness.map(|n| self.fi_label(n).to_string()),
            dml_counterexample: dml.counterexample,
        };
        let c = report.conditions();
        report.all_agree = c.iter().all(|&x| x == c[0]);
        Ok(report)
    }

    /// `Ann_M(K)` is fully invariant, kills `K`, and contains every
    /// submodule `X` with `X_M K = 0`. Returns the first offending `K`.
    pub fn ann_maximality_violation(&self) -> Option<String> {
        let zero = self.module.zero_submodule();
        (0..self.subs.len())
            .find(|&k| {
                let kset = &self.subs.sets[k];
                let ann = self.annihilator(kset);
                !self.is_fully_invariant(&ann)
                    || self.bican_product(&ann, kset) != zero
                    || self
                        .subs
                        .sets
                        .iter()
                        .any(|x| self.bican_product(x, kset) == zero && !x.is_subset(&ann))
            })
            .map(|k| self.subs.lattice.label(k).to_string())
    }

    fn semiprime_quantale(&self) -> Result<&Quantale, AlgebraError> {
        let q = self.quantale_or_precondition()?;
        if !self.is_semiprime_module() {
            return Err(AlgebraError::Precondition("module must be semiprime"));
        }
        Ok(q)
    }

    /// `N_M L = 0` forces `L_M N = 0` and `N ∩ L = 0`.
    pub fn semiprime_lemma_violation(&self) -> Result<Option<Vec<String>>, AlgebraError> {
        self.semiprime_quantale()?;
        let l = &self.fi_lattice;
        let zero = l.bottom();
        Ok(self
            .pairs()
            .find(|&(a, b)| self.product_fi(a, b) == zero && (self.product_fi(b, a) != zero || l.meet(a, b) != zero))
            .map(|(a, b)| self.labels(&[a, b])))
    }

    /// `Ann_M(N ∩ L) = Ann_M(N_M L)`.
    pub fn annprodinter_violation(&self) -> Result<Option<Vec<String>>, AlgebraError> {
        self.semiprime_quantale()?;
        let l = &self.fi_lattice;
        Ok(self
            .pairs()
            .find(|&(a, b)| self.ann[l.meet(a, b)] != self.ann[self.product_fi(a, b)])
            .map(|(a, b)| self.labels(&[a, b])))
    }

    /// For `M = N ⊕ L` with `N` fully invariant, `L` is fully invariant.
    pub fn prop_semi_violation(&self) -> Result<Option<Vec<String>>, AlgebraError> {
        self.semiprime_quantale()?;
        for n in 0..self.fi.len() {
            for c in self.complements(self.fi_set(n)) {
                if self.fi_of[c].is_none() {
                    return Ok(Some(vec![
                        self.fi_label(n).to_string(),
                        self.subs.lattice.label(c).to_string(),
                    ]));
                }
            }
        }
        Ok(None)
    }

    /// For `M = N ⊕ L` with both fully invariant, the projection onto `N`
    /// commutes with every endomorphism.
    pub fn idempotent_violation(&self) -> Option<Vec<String>> {
        for n in 0..self.fi.len() {
            for c in self.complements(self.fi_set(n)) {
                if let Some(cf) = self.fi_of[c] {
                    if !self.is_central(&self.projection(self.fi_set(n), &self.subs.sets[c])) {
                        return Some(self.labels(&[n, cf]));
                    }
                }
            }
        }
        None
    }

    /// Compares the semiprime fully invariant submodules (with `M`) to the
    /// `μ`-fixed points of `Λ^fi(M)`.
    pub fn sp_comparison(&self) -> Result<SpComparison, AlgebraError> {
        let q = self.quantale_or_precondition()?;
        let top = self.fi_lattice.top();
        let semiprime: Vec<usize> = (0..self.fi.len())
            .filter(|&n| n == top || self.semiprime_fi(n))
            .collect();
        let mu = mu_nucleus(q, &SubQuantale::whole(q))?;
        let fixed = mu.fixed_elems();
        Ok(SpComparison {
            equal: semiprime == fixed,
            semiprime_submodules: self.labels(&semiprime),
            mu_fixed: self.labels(&fixed),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteRing;

    fn b() -> Bounds {
        Bounds::default()
    }

    fn regular(ring: FiniteRing) -> ModuleContext {
        let m = FiniteModule::regular(Arc::new(ring), &b()).unwrap();
        ModuleContext::new(Arc::new(m), &b()).unwrap()
    }

    fn zn(n: usize) -> ModuleContext {
        regular(FiniteRing::zn(n, &b()).unwrap())
    }

    fn klein() -> ModuleContext {
        let f2 = Arc::new(FiniteRing::fp(2, &b()).unwrap());
        let m = FiniteModule::free(f2, 2, &b()).unwrap();
        ModuleContext::new(Arc::new(m), &b()).unwrap()
    }

    fn set(ctx: &ModuleContext, elems: &[usize]) -> FixedBitSet {
        ctx.module().submodule(elems).unwrap()
    }

    #[test]
    fn bican_product_on_the_klein_group() {
        let ctx = klein();
        let m = ctx.module();
        let first = set(&ctx, &[0, 2]); // (0,0), (1,0)
        assert_eq!(m.label(2), "(1,0)");
        assert_eq!(ctx.bican_product(&first, &m.whole()), m.whole());
        assert!(!ctx.is_fully_invariant(&first));
        assert_eq!(ctx.fi_len(), 2);
        assert_eq!(ctx.annihilator(&first), m.zero_submodule());
        assert_eq!(ctx.bican_product(&first, &m.zero_submodule()), m.zero_submodule());
        // Λ(M) under the Bican product violates condition (⋆).
        let q = ctx.submodule_quantale().unwrap();
        assert!(!SubQuantale::whole(&q).satisfies_star(&q));
    }

    #[test]
    fn z6_products_annihilators_and_colons() {
        let ctx = zn(6);
        let two = set(&ctx, &[0, 2, 4]);
        let three = set(&ctx, &[0, 3]);
        let zero = ctx.module().zero_submodule();
        assert_eq!(ctx.bican_product(&two, &three), zero);
        assert_eq!(ctx.annihilator(&two), three);
        assert_eq!(ctx.fi_len(), 4);
        assert!(ctx.fi_quantale().is_ok());
        assert!(ctx.module_dml().holds);
        assert!(ctx.sdml_checks().sdml.holds);
        assert!(ctx.is_fi_baer() && ctx.is_fi_retractable());
        assert_eq!(ctx.colon(&two, &zero).members, ctx.module().whole());
    }

    #[test]
    fn z12_colon_anchor() {
        let ctx = zn(12);
        let two = set(&ctx, &[0, 2, 4, 6, 8, 10]);
        let three = set(&ctx, &[0, 3, 6, 9]);
        let c23 = ctx.colon(&two, &three);
        let c32 = ctx.colon(&three, &two);
        assert!(!c23.relaxed);
        assert_eq!(c23.members, two);
        assert_eq!(c32.members, three);
        assert_eq!(ctx.module().sum(&c23.members, &c32.members), ctx.module().whole());
        assert!(ctx.sdml_checks().sdml.holds);
    }

    #[test]
    fn z4_is_not_semiprime() {
        let ctx = zn(4);
        let w = ctx.semiprime_witness().unwrap();
        assert_eq!(ctx.fi_label(w), "(2)");
        assert!(!ctx.is_fi_baer());
        let r = ctx.baer_characterization().unwrap();
        assert_eq!(r.conditions(), [false; 6]);
        assert!(r.all_agree);
    }

    #[test]
    fn baer_characterization_on_semiprime_rings() {
        for ctx in [
            zn(6),
            regular(FiniteRing::matrix2(&FiniteRing::fp(2, &b()).unwrap(), &b()).unwrap()),
        ] {
            let r = ctx.baer_characterization().unwrap();
            assert_eq!(r.conditions(), [true; 6]);
        }
    }

    #[test]
    fn t2_is_not_semiprime() {
        let ctx = regular(FiniteRing::upper_triangular2(2, &b()).unwrap());
        assert_eq!(ctx.fi_len(), 5);
        let w = ctx.semiprime_witness().unwrap();
        assert_eq!(ctx.fi_set(w).count_ones(..), 2);
        let r = ctx.baer_characterization().unwrap();
        assert_eq!(r.conditions(), [false; 6]);
    }

    #[test]
    fn prime_and_semiprime_submodules() {
        let ctx = zn(6);
        let two = set(&ctx, &[0, 2, 4]);
        assert!(ctx.is_prime_submodule(&two).unwrap());
        assert!(!ctx.is_prime_submodule(&ctx.module().zero_submodule()).unwrap());
        assert!(ctx.is_semiprime_submodule(&ctx.module().zero_submodule()).unwrap());
        assert!(ctx.is_prime_submodule(&ctx.module().whole()).is_err());
        let f3 = regular(FiniteRing::fp(3, &b()).unwrap());
        assert!(f3.is_prime_submodule(&f3.module().zero_submodule()).unwrap());
    }

    #[test]
    fn psi_and_ler() {
        let ctx = zn(6);
        let psi = ctx.psi_module().unwrap();
        assert_eq!(psi.direct.len(), 4);
        assert!(psi.agree());
        assert_eq!(ctx.ler(&ctx.module().whole()), ctx.module().whole());
    }

    #[test]
    fn colon_properties_on_z12() {
        let r = zn(12).colon_properties();
        assert!(r.self_generator && r.hom_split);
        assert!(r.holds(), "{r:?}");
        assert!(r.items.iter().all(|i| i.status == ItemStatus::Pass));
    }
}
