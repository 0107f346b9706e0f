//! Prime spectra, the closure operator `μ = U_* ∘ U`, nuclei and their
//! quotients, the rather-below operator `r`, the frame `Ψ(A)` of its fixed
//! points, the regular core, and points of finite frames.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Elem, FiniteLattice, LatticeError};
use crate::quantale::{Quantale, QuantaleError, SubQuantale};
use crate::topology::{FiniteTopSpace, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Quantale(#[from] QuantaleError),
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("map is not {law} at ({})", witness.join(", "))]
    NotANucleus { law: &'static str, witness: Vec<String> },
}

/// A self-map of a finite lattice, checked against the nucleus laws.
#[derive(Debug, Clone)]
pub struct NucleusMap {
    carrier: Arc<FiniteLattice>,
    map: Vec<Elem>,
}

/// First failures of each nucleus law (`None` means the law holds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NucleusCheck {
    pub inflationary: Option<Elem>,
    pub monotone: Option<(Elem, Elem)>,
    pub idempotent: Option<Elem>,
    pub prenucleus: Option<(Elem, Elem)>,
}

impl NucleusCheck {
    pub fn is_closure_operator(&self) -> bool {
        self.inflationary.is_none() && self.monotone.is_none() && self.idempotent.is_none()
    }

    pub fn is_nucleus(&self) -> bool {
        self.inflationary.is_none() && self.idempotent.is_none() && self.prenucleus.is_none()
    }
}

impl NucleusMap {
    /// A validated nucleus: inflationary, idempotent, meet-preserving.
    pub fn new(carrier: Arc<FiniteLattice>, map: Vec<Elem>) -> Result<Self, SpectraError> {
        let n = Self::unchecked(carrier, map)?;
        let c = n.check();
        let fail = |law, elems: &[Elem]| SpectraError::NotANucleus {
            law,
            witness: elems.iter().map(|&e| n.carrier.label(e).to_string()).collect(),
        };
        if let Some(a) = c.inflationary {
            return Err(fail("inflationary", &[a]));
        }
        if let Some(a) = c.idempotent {
            return Err(fail("idempotent", &[a]));
        }
        if let Some((a, b)) = c.prenucleus {
            return Err(fail("meet-preserving", &[a, b]));
        }
        Ok(n)
    }

    /// Wraps a map without checking any law; see [`check`](Self::check).
    pub fn unchecked(carrier: Arc<FiniteLattice>, map: Vec<Elem>) -> Result<Self, SpectraError> {
        if map.len() != carrier.len() {
            return Err(SpectraError::Precondition("map must be total on the carrier"));
        }
        for &m in &map {
            carrier.check(m)?;
        }
        Ok(Self { carrier, map })
    }

    pub fn identity(carrier: Arc<FiniteLattice>) -> Self {
        let map = carrier.elements().collect();
        Self { carrier, map }
    }

    pub fn carrier(&self) -> &FiniteLattice {
        &self.carrier
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn check(&self) -> NucleusCheck {
        let l = &*self.carrier;
        let j = &self.map;
        let mut out = NucleusCheck {
            inflationary: l.elements().find(|&a| !l.leq(a, j[a])),
            idempotent: l.elements().find(|&a| j[j[a]] != j[a]),
            ..NucleusCheck::default()
        };
        'mono: for a in l.elements() {
            for b in l.up_set(a).ones() {
                if !l.leq(j[a], j[b]) {
                    out.monotone = Some((a, b));
                    break 'mono;
                }
            }
        }
        'meet: for a in l.elements() {
            for b in a..l.len() {
                if j[l.meet(a, b)] != l.meet(j[a], j[b]) {
                    out.prenucleus = Some((a, b));
                    break 'meet;
                }
            }
        }
        out
    }

    pub fn fixed_points(&self) -> Vec<Elem> {
        self.carrier.elements().filter(|&a| self.map[a] == a).collect()
    }

    /// Fixed points with the induced order. For a closure operator the join
    /// of two fixed points is `map(a v b)` and meets are inherited.
    pub fn quotient(&self) -> Result<FiniteLattice, SpectraError> {
        if !self.check().is_closure_operator() {
            return Err(SpectraError::Precondition("quotient requires a closure operator"));
        }
        Ok(self.carrier.induced(&self.fixed_points())?)
    }
}

/// Elements `p != 1` such that `ab <= p` with `a, b` in `sub` forces
/// `a <= p` or `b <= p`.
pub fn primes_relative(q: &Quantale, sub: &SubQuantale) -> Vec<Elem> {
    let l = q.lattice();
    let members = sub.members();
    l.elements()
        .filter(|&p| p != l.top())
        .filter(|&p| {
            members.iter().all(|&a| {
                members
                    .iter()
                    .all(|&b| !l.leq(q.product(a, b), p) || l.leq(a, p) || l.leq(b, p))
            })
        })
        .collect()
}

/// A prime spectrum relative to a subquantale, with its open-set topology.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Prime elements, in index order; point `i` of `space` is `points[i]`.
    pub points: Vec<Elem>,
    pub space: FiniteTopSpace,
    members: Vec<Elem>,
    opens_of: Vec<FixedBitSet>,
}

impl Spectrum {
    /// Members of the subquantale, in index order.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    /// `U(b)` for the `i`-th member of the subquantale.
    pub fn open_of_member(&self, i: usize) -> &FixedBitSet {
        &self.opens_of[i]
    }
}

fn u_set(q: &Quantale, points: &[Elem], b: Elem) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(points.len());
    s.extend(
        points
            .iter()
            .enumerate()
            .filter(|(_, &p)| !q.lattice().leq(b, p))
            .map(|(i, _)| i),
    );
    s
}

/// `Spec_B(A)` with opens `U(b) = {p : b ≰ p}`. The family is checked to be
/// a topology rather than assumed.
pub fn spectrum_space(q: &Quantale, sub: &SubQuantale) -> Result<Spectrum, SpectraError> {
    if !sub.satisfies_star(q) {
        return Err(SpectraError::Precondition("subquantale must satisfy condition (⋆)"));
    }
    let points = primes_relative(q, sub);
    let labels = points.iter().map(|&p| q.lattice().label(p).to_string()).collect();
    let members = sub.members().to_vec();
    let opens_of: Vec<FixedBitSet> = members.iter().map(|&b| u_set(q, &points, b)).collect();
    let space = FiniteTopSpace::new(labels, opens_of.clone())?;
    Ok(Spectrum {
        points,
        space,
        members,
        opens_of,
    })
}

/// The closure operator `μ` on a subquantale, realised on the lattice of
/// its members.
#[derive(Debug, Clone)]
pub struct Mu {
    pub spectrum: Spectrum,
    /// Nucleus candidate on the induced lattice of the subquantale; index `i`
    /// stands for `spectrum.members()[i]`.
    pub map: NucleusMap,
}

impl Mu {
    pub fn members(&self) -> &[Elem] {
        self.spectrum.members()
    }

    /// `μ(a)` for an element `a` of the subquantale, as an element of `A`.
    pub fn apply_elem(&self, a: Elem) -> Option<Elem> {
        let i = self.members().iter().position(|&m| m == a)?;
        Some(self.members()[self.map.apply(i)])
    }

    /// Fixed points of `μ` as elements of `A`.
    pub fn fixed_elems(&self) -> Vec<Elem> {
        self.map.fixed_points().into_iter().map(|i| self.members()[i]).collect()
    }

    /// `A_μ` with the induced order.
    pub fn quotient(&self) -> Result<FiniteLattice, SpectraError> {
        self.map.quotient()
    }
}

/// `μ(b) = V{x ∈ B : U(x) ⊆ U(b)}`.
pub fn mu_nucleus(q: &Quantale, sub: &SubQuantale) -> Result<Mu, SpectraError> {
    let spectrum = spectrum_space(q, sub)?;
    let members = spectrum.members().to_vec();
    let carrier = if members.len() == q.len() {
        q.lattice_arc().clone()
    } else {
        Arc::new(q.lattice().induced(&members)?)
    };
    let map: Vec<Elem> = (0..members.len())
        .map(|i| {
            let target = spectrum.open_of_member(i);
            let joined = q.lattice().big_join(
                (0..members.len())
                    .filter(|&x| spectrum.open_of_member(x).is_subset(target))
                    .map(|x| members[x]),
            );
            members
                .iter()
                .position(|&m| m == joined)
                .expect("subquantale is closed under joins")
        })
        .collect();
    let map = NucleusMap::unchecked(carrier, map)?;
    Ok(Mu { spectrum, map })
}

/// Result of comparing `A_μ` with the open-set frame of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MuOpenIso {
    pub fixed_points: usize,
    pub opens: usize,
    pub bijective: bool,
    pub order_isomorphism: bool,
}

/// Checks that `b ↦ U(b)` restricted to `μ`-fixed points is an order
/// isomorphism onto the opens of the spectrum.
pub fn mu_open_isomorphism(mu: &Mu) -> MuOpenIso {
    let fixed = mu.map.fixed_points();
    let images: Vec<&FixedBitSet> = fixed.iter().map(|&i| mu.spectrum.open_of_member(i)).collect();
    let opens = mu.spectrum.space.opens();
    let injective = images
        .iter()
        .enumerate()
        .all(|(i, a)| images[..i].iter().all(|b| !a.ones().eq(b.ones())));
    let surjective = opens.iter().all(|o| images.iter().any(|u| u.ones().eq(o.ones())));
    let bijective = injective && surjective && fixed.len() == opens.len();
    let carrier = mu.map.carrier();
    let order_isomorphism = bijective
        && fixed.iter().enumerate().all(|(i, &a)| {
            fixed
                .iter()
                .enumerate()
                .all(|(k, &b)| carrier.leq(a, b) == images[i].is_subset(images[k]))
        });
    MuOpenIso {
        fixed_points: fixed.len(),
        opens: opens.len(),
        bijective,
        order_isomorphism,
    }
}

/// `a ↦ ann(ann(a))`, unchecked; it is a nucleus when DML holds.
pub fn annann_map(q: &Quantale) -> Result<NucleusMap, SpectraError> {
    let ann = q.annihilators();
    let map = q.lattice().elements().map(|a| ann[ann[a]]).collect();
    NucleusMap::unchecked(q.lattice_arc().clone(), map)
}

/// `x ≼ a` iff `ann(x) v a = 1`.
pub fn rather_below(q: &Quantale, x: Elem, a: Elem) -> bool {
    let l = q.lattice();
    l.join(q.ann_left(x), a) == l.top()
}

/// `r(a) = V{x : x ≼ a}` for every element.
pub fn r_operator(q: &Quantale) -> Vec<Elem> {
    let l = q.lattice();
    let ann = q.annihilators();
    l.elements()
        .map(|a| l.big_join(l.elements().filter(|&x| l.join(ann[x], a) == l.top())))
        .collect()
}

/// A stage of the regular-core iteration: a join-closed subset of `A` with
/// its induced lattice.
#[derive(Debug, Clone)]
pub struct Stage {
    pub members: Vec<Elem>,
    pub lattice: FiniteLattice,
}

/// `r` computed inside a stage. The product of two members is projected to
/// the largest member below it; annihilators and joins are those of the
/// stage. On the full carrier this is exactly [`r_operator`].
fn stage_r(q: &Quantale, members: &[Elem], ls: &FiniteLattice) -> Vec<usize> {
    let l = q.lattice();
    let below = |t: Elem| ls.big_join((0..members.len()).filter(|&i| l.leq(members[i], t)));
    let n = members.len();
    let prod: Vec<usize> = (0..n * n)
        .map(|k| below(q.product(members[k / n], members[k % n])))
        .collect();
    let ann: Vec<usize> = (0..n)
        .map(|x| ls.big_join((0..n).filter(|&y| prod[y * n + x] == ls.bottom())))
        .collect();
    (0..n)
        .map(|a| ls.big_join((0..n).filter(|&x| ls.join(ann[x], a) == ls.top())))
        .collect()
}

/// `Ψ(A) = {a : r(a) = a}` with the induced order.
pub fn psi(q: &Quantale) -> Result<Stage, SpectraError> {
    let r = r_operator(q);
    let members: Vec<Elem> = q.lattice().elements().filter(|&a| r[a] == a).collect();
    let lattice = q.lattice().induced(&members)?;
    Ok(Stage { members, lattice })
}

#[derive(Debug, Clone)]
pub struct RegularCore {
    /// `stages[0] = A`, `stages[k+1]` = fixed points of `r` within `stages[k]`.
    pub stages: Vec<Vec<Elem>>,
    /// Least `k` with `stages[k + 1] == stages[k]`.
    pub stabilized_at: usize,
    pub core: Stage,
}

/// Iterates `Ψ` until it stabilizes; at most `|A|` rounds on a finite carrier.
pub fn regular_core(q: &Quantale) -> Result<RegularCore, SpectraError> {
    let mut current: Vec<Elem> = q.lattice().elements().collect();
    let mut lattice = q.lattice().clone();
    let mut stages = vec![current.clone()];
    loop {
        let r = stage_r(q, &current, &lattice);
        let next: Vec<Elem> = (0..current.len()).filter(|&i| r[i] == i).map(|i| current[i]).collect();
        if next == current {
            let stabilized_at = stages.len() - 1;
            return Ok(RegularCore {
                stages,
                stabilized_at,
                core: Stage {
                    members: current,
                    lattice,
                },
            });
        }
        lattice = q.lattice().induced(&next)?;
        current = next;
        stages.push(current.clone());
    }
}

/// Every `a` is the join of `{x : ¬x v a = 1}`, using the frame's own
/// negation.
pub fn is_regular_frame(f: &FiniteLattice) -> Result<bool, SpectraError> {
    if !f.is_frame() {
        return Err(LatticeError::NotAFrame.into());
    }
    let neg: Vec<Elem> = f.elements().map(|x| f.negation(x)).collect::<Result<_, _>>()?;
    Ok(f.elements()
        .all(|a| f.big_join(f.elements().filter(|&x| f.join(neg[x], a) == f.top())) == a))
}

/// The points of a finite frame: its meet-prime elements.
#[derive(Debug, Clone)]
pub struct FramePoints {
    pub points: Vec<Elem>,
    pub space: FiniteTopSpace,
}

/// `pt F`: primes `p != 1` of `F` with opens `U(a) = {p : a ≰ p}`.
pub fn frame_points(f: &FiniteLattice) -> Result<FramePoints, SpectraError> {
    if !f.is_frame() {
        return Err(LatticeError::NotAFrame.into());
    }
    let points: Vec<Elem> = f
        .elements()
        .filter(|&p| p != f.top())
        .filter(|&p| {
            f.elements().all(|a| {
                f.elements()
                    .all(|b| !f.leq(f.meet(a, b), p) || f.leq(a, p) || f.leq(b, p))
            })
        })
        .collect();
    let labels = points.iter().map(|&p| f.label(p).to_string()).collect();
    let opens = f
        .elements()
        .map(|a| {
            let mut s = FixedBitSet::with_capacity(points.len());
            s.extend((0..points.len()).filter(|&i| !f.leq(a, points[i])));
            s
        })
        .collect();
    Ok(FramePoints {
        space: FiniteTopSpace::new(labels, opens)?,
        points,
    })
}

/// `Max(A)`: the maximal elements of `A \ {1}` with opens `U(b) ∩ Max`.
pub fn max_space(q: &Quantale) -> Result<FiniteTopSpace, SpectraError> {
    let l = q.lattice();
    let points = l.coatoms();
    let labels = points.iter().map(|&p| l.label(p).to_string()).collect();
    let opens = l.elements().map(|b| u_set(q, &points, b)).collect();
    Ok(FiniteTopSpace::new(labels, opens)?)
}

/// The five conditions of the semiprime De Morgan characterization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralDmlReport {
    pub dml: bool,
    pub law2: bool,
    pub ann_complemented_and_dml: bool,
    pub spectrum_frame_dml: bool,
    pub spectrum_extremely_disconnected: bool,
    pub all_agree: bool,
    pub spectrum_points: usize,
    pub spectrum_opens: usize,
}

impl SpectralDmlReport {
    pub fn conditions(&self) -> [bool; 5] {
        [
            self.dml,
            self.law2,
            self.ann_complemented_and_dml,
            self.spectrum_frame_dml,
            self.spectrum_extremely_disconnected,
        ]
    }
}

pub fn spectral_dml_equivalence(q: &Quantale) -> Result<SpectralDmlReport, SpectraError> {
    if !q.is_iq() || !q.is_semiprime() {
        return Err(SpectraError::Precondition("requires a semiprime idiomatic quantale"));
    }
    let laws = q.check_dml_laws();
    let l = q.lattice();
    let ann = q.annihilators();
    let complemented = l.elements().all(|a| l.has_complement(ann[a]));
    let spectrum = spectrum_space(q, &SubQuantale::whole(q))?;
    let opens = spectrum.space.open_lattice();
    let c = [
        laws.dml.holds,
        laws.law2.holds,
        complemented && laws.dml.holds,
        opens.satisfies_frame_dml()?,
        spectrum.space.is_extremely_disconnected(),
    ];
    Ok(SpectralDmlReport {
        dml: c[0],
        law2: c[1],
        ann_complemented_and_dml: c[2],
        spectrum_frame_dml: c[3],
        spectrum_extremely_disconnected: c[4],
        all_agree: c.iter().all(|&x| x == c[0]),
        spectrum_points: spectrum.points.len(),
        spectrum_opens: spectrum.space.opens().len(),
    })
}

/// First `a` with `μ(ann(a)) != ann(a)`; requires a semiprime iq.
pub fn mu_unfixed_annihilator(q: &Quantale) -> Result<Option<Elem>, SpectraError> {
    if !q.is_iq() || !q.is_semiprime() {
        return Err(SpectraError::Precondition("requires a semiprime idiomatic quantale"));
    }
    let mu = mu_nucleus(q, &SubQuantale::whole(q))?;
    let ann = q.annihilators();
    Ok(q.lattice().elements().find(|&a| mu.map.apply(ann[a]) != ann[a]))
}

/// First `a` with `ann(a) != ann(μ(a))`; requires `μ(0) = 0`.
pub fn mu_unpreserved_annihilator(q: &Quantale) -> Result<Option<Elem>, SpectraError> {
    let mu = mu_nucleus(q, &SubQuantale::whole(q))?;
    let zero = q.lattice().bottom();
    if mu.map.apply(zero) != zero {
        return Err(SpectraError::Precondition("requires μ(0) = 0"));
    }
    let ann = q.annihilators();
    Ok(q.lattice().elements().find(|&a| ann[a] != ann[mu.map.apply(a)]))
}

/// First `a` with `r(ann(a)) != ann(a)`; requires complemented annihilators.
pub fn r_unfixed_annihilator(q: &Quantale) -> Result<Option<Elem>, SpectraError> {
    let l = q.lattice();
    let ann = q.annihilators();
    if !l.elements().all(|a| l.has_complement(ann[a])) {
        return Err(SpectraError::Precondition(
            "requires every annihilator to be complemented",
        ));
    }
    let r = r_operator(q);
    Ok(l.elements().find(|&a| r[ann[a]] != ann[a]))
}

/// Inside `A_μ` the frame negation agrees with the annihilator.
pub fn mu_negation_agrees(q: &Quantale) -> Result<bool, SpectraError> {
    let mu = mu_nucleus(q, &SubQuantale::whole(q))?;
    let fixed = mu.fixed_elems();
    let quotient = mu.quotient()?;
    if !quotient.is_frame() {
        return Ok(false);
    }
    for (i, &a) in fixed.iter().enumerate() {
        let neg = fixed[quotient.negation(i)?];
        if neg != q.ann_left(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Regularity facts about `Ψ(A)` for semiprime iq satisfying DML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiRegularity {
    pub psi_size: usize,
    pub psi_is_frame: bool,
    pub psi_frame_dml: bool,
    pub psi_regular: bool,
    pub core_stabilized_at: usize,
    pub holds: bool,
}

pub fn psi_regularity(q: &Quantale) -> Result<PsiRegularity, SpectraError> {
    if !q.is_iq() || !q.is_semiprime() || !q.satisfies_dml() {
        return Err(SpectraError::Precondition("requires a semiprime iq satisfying DML"));
    }
    let stage = psi(q)?;
    let is_frame = stage.lattice.is_frame();
    let frame_dml = is_frame && stage.lattice.satisfies_frame_dml()?;
    let regular = is_frame && is_regular_frame(&stage.lattice)?;
    let core = regular_core(q)?;
    Ok(PsiRegularity {
        psi_size: stage.members.len(),
        psi_is_frame: is_frame,
        psi_frame_dml: frame_dml,
        psi_regular: regular,
        core_stabilized_at: core.stabilized_at,
        holds: is_frame && frame_dml && regular && core.stabilized_at <= 1,
    })
}

/// Points of `Ψ(A)` for compact normal semiprime iq with DML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiPoints {
    pub points: usize,
    pub extremely_disconnected: bool,
    pub hausdorff: bool,
    /// Whether `pt Ψ(A)` is homeomorphic to `Max(A)`.
    pub homeomorphic_to_max: bool,
}

pub fn psi_points(q: &Quantale) -> Result<PsiPoints, SpectraError> {
    if !q.is_iq() || !q.is_semiprime() || !q.satisfies_dml() || !q.is_normal() {
        return Err(SpectraError::Precondition(
            "requires a compact normal semiprime iq with DML",
        ));
    }
    let stage = psi(q)?;
    let pts = frame_points(&stage.lattice)?;
    let max = max_space(q)?;
    Ok(PsiPoints {
        points: pts.points.len(),
        extremely_disconnected: pts.space.is_extremely_disconnected(),
        hausdorff: pts.space.is_hausdorff(),
        homeomorphic_to_max: pts.space.homeomorphism(&max).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Mode;

    fn meet_quantale(l: FiniteLattice) -> Quantale {
        Quantale::with_meet(Arc::new(l), Mode::Iq).unwrap()
    }

    #[test]
    fn two_element_quantale_has_prime_zero() {
        let q = meet_quantale(FiniteLattice::chain(2));
        assert_eq!(primes_relative(&q, &SubQuantale::whole(&q)), vec![0]);
        let s = spectrum_space(&q, &SubQuantale::whole(&q)).unwrap();
        assert_eq!(s.space.len(), 1);
        assert_eq!(s.space.opens().len(), 2);
    }

    #[test]
    fn regular_frames() {
        assert!(is_regular_frame(&FiniteLattice::boolean(3)).unwrap());
        assert!(!is_regular_frame(&FiniteLattice::chain(3)).unwrap());
        assert!(is_regular_frame(&FiniteLattice::chain(2)).unwrap());
        assert!(is_regular_frame(&FiniteLattice::diamond()).is_err());
    }

    #[test]
    fn points_of_small_frames() {
        let b = frame_points(&FiniteLattice::boolean(2)).unwrap();
        assert_eq!(b.points.len(), 2);
        assert_eq!(b.space.opens().len(), 4);
        assert_eq!(frame_points(&FiniteLattice::chain(2)).unwrap().points, vec![0]);
    }

    #[test]
    fn boolean_regular_core_is_itself() {
        let q = meet_quantale(FiniteLattice::boolean(2));
        let core = regular_core(&q).unwrap();
        assert_eq!(core.core.members, vec![0, 1, 2, 3]);
        assert_eq!(core.stabilized_at, 0);
        let one = meet_quantale(FiniteLattice::chain(1));
        assert_eq!(regular_core(&one).unwrap().core.members, vec![0]);
    }

    #[test]
    fn chain_regular_core_collapses() {
        // In the 3-chain with meet, ann(m) = 0 so only 0 and 1 are r-fixed.
        let q = meet_quantale(FiniteLattice::chain(3));
        let core = regular_core(&q).unwrap();
        assert_eq!(core.core.members, vec![0, 2]);
        assert!(is_regular_frame(&core.core.lattice).unwrap());
    }

    #[test]
    fn stage_zero_r_matches_direct_r() {
        let q = meet_quantale(FiniteLattice::chain(4));
        let all: Vec<Elem> = q.lattice().elements().collect();
        assert_eq!(stage_r(&q, &all, q.lattice()), r_operator(&q));
    }

    #[test]
    fn identity_nucleus_quotient_is_carrier() {
        let l = Arc::new(FiniteLattice::diamond());
        let id = NucleusMap::identity(l.clone());
        assert!(id.check().is_nucleus());
        assert_eq!(&id.quotient().unwrap(), &*l);
    }

    #[test]
    fn double_negation_on_boolean_is_identity() {
        let l = Arc::new(FiniteLattice::boolean(2));
        let map = l
            .elements()
            .map(|a| l.negation(l.negation(a).unwrap()).unwrap())
            .collect();
        let n = NucleusMap::new(l.clone(), map).unwrap();
        assert_eq!(n.quotient().unwrap().len(), 4);
    }

    #[test]
    fn nucleus_validation_reports_law() {
        let l = Arc::new(FiniteLattice::chain(3));
        let err = NucleusMap::new(l.clone(), vec![0, 0, 2]).unwrap_err();
        assert!(matches!(
            err,
            SpectraError::NotANucleus {
                law: "inflationary",
                ..
            }
        ));
        assert!(NucleusMap::unchecked(l, vec![0, 1]).is_err());
    }
}
