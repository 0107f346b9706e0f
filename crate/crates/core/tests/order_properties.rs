use std::sync::Arc;

use dml_core::quantale::SubQuantale;
use dml_core::spectra::{mu_nucleus, mu_open_isomorphism, spectral_dml_equivalence};
use dml_core::{FiniteLattice, FiniteRing, Mode, Quantale};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;

const BITS: usize = 5;
const FULL: u32 = (1 << BITS) - 1;

/// Closes a family of subsets of a 5-set under the given operations and
/// adds the whole set, which yields a lattice ordered by inclusion.
fn family(masks: &[u32], unions: bool) -> Vec<u32> {
    let mut fam: Vec<u32> = masks.iter().map(|m| m & FULL).collect();
    fam.push(FULL);
    if unions {
        fam.push(0);
    }
    loop {
        let mut next = fam.clone();
        for &a in &fam {
            for &b in &fam {
                next.push(a & b);
                if unions {
                    next.push(a | b);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if next == fam {
            return fam;
        }
        fam = next;
    }
}

fn lattice_of(fam: &[u32]) -> FiniteLattice {
    let sets: Vec<FixedBitSet> = fam
        .iter()
        .map(|&m| {
            let mut s = FixedBitSet::with_capacity(BITS);
            s.extend((0..BITS).filter(|b| m & (1 << b) != 0));
            s
        })
        .collect();
    let labels = fam.iter().map(|m| format!("{m:05b}")).collect();
    FiniteLattice::from_sets(labels, &sets).unwrap()
}

fn closure_system() -> impl Strategy<Value = FiniteLattice> {
    prop::collection::vec(0u32..=FULL, 0..6).prop_map(|m| lattice_of(&family(&m, false)))
}

fn ring_of_sets() -> impl Strategy<Value = FiniteLattice> {
    prop::collection::vec(0u32..=FULL, 0..4).prop_map(|m| lattice_of(&family(&m, true)))
}

fn squarefree(n: usize) -> bool {
    (2..=n).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p * p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws(l in closure_system()) {
        for a in l.elements() {
            prop_assert_eq!(l.meet(a, a), a);
            for b in l.elements() {
                prop_assert_eq!(l.meet(a, b), l.meet(b, a));
                prop_assert_eq!(l.join(a, b), l.join(b, a));
                prop_assert_eq!(l.meet(a, l.join(a, b)), a);
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(l.leq(a, b), l.meet(a, b) == a);
                for c in l.elements() {
                    prop_assert_eq!(l.meet(l.meet(a, b), c), l.meet(a, l.meet(b, c)));
                }
            }
        }
        prop_assert_eq!(l.big_join(l.elements()), l.top());
        prop_assert_eq!(l.big_meet(std::iter::empty()), l.top());
    }

    #[test]
    fn modularity_matches_triple_scan(l in closure_system()) {
        let brute = l.elements().all(|a| l.elements().all(|b| l.elements().all(|c| {
            !l.leq(a, c) || l.join(a, l.meet(b, c)) == l.meet(l.join(a, b), c)
        })));
        prop_assert_eq!(l.is_modular(), brute);
    }

    #[test]
    fn frame_law_over_all_subsets_matches_binary_distributivity(l in closure_system()) {
        if let Some(all) = l.frame_law_all_subsets(14) {
            prop_assert_eq!(all, l.is_frame());
        }
    }

    #[test]
    fn heyting_adjunction(l in ring_of_sets()) {
        prop_assert!(l.is_frame());
        for a in l.elements() {
            for b in l.elements() {
                let imp = l.heyting_implication(a, b).unwrap();
                for c in l.elements() {
                    prop_assert_eq!(l.leq(c, imp), l.leq(l.meet(c, a), b));
                }
            }
        }
    }

    #[test]
    fn meet_quantales_on_frames(l in ring_of_sets()) {
        let q = Quantale::with_meet(Arc::new(l), Mode::Iq).unwrap();
        let lat = q.lattice();
        for a in lat.elements() {
            for b in lat.elements() {
                let r = q.residual_right(a, b);
                let s = q.residual_left(b, a);
                for x in lat.elements() {
                    prop_assert_eq!(lat.leq(q.product(a, x), b), lat.leq(x, r));
                    prop_assert_eq!(lat.leq(q.product(x, a), b), lat.leq(x, s));
                }
            }
        }
        prop_assert!(q.annihilator_equivalence().unwrap().all_agree);
        let t = spectral_dml_equivalence(&q).unwrap();
        prop_assert!(t.all_agree, "{:?}", t);
        prop_assert_eq!(t.dml, q.lattice().satisfies_frame_dml().unwrap());
        let iso = mu_open_isomorphism(&mu_nucleus(&q, &SubQuantale::whole(&q)).unwrap());
        prop_assert!(iso.order_isomorphism);
    }

    #[test]
    fn zn_ideal_quantales(n in 2usize..=40) {
        let (q, _) = FiniteRing::zn(n, &Default::default()).unwrap().ideal_quantale().unwrap();
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        prop_assert_eq!(q.len(), divisors);
        prop_assert_eq!(q.is_semiprime(), squarefree(n));
        prop_assert!(q.annihilator_equivalence().unwrap().all_agree);
        let l = q.lattice();
        for a in l.elements() {
            let ann = q.ann_left(a);
            for x in l.elements() {
                prop_assert_eq!(q.product(x, a) == l.bottom(), l.leq(x, ann));
            }
        }
        if q.is_semiprime() {
            prop_assert!(spectral_dml_equivalence(&q).unwrap().all_agree);
            prop_assert!(q.satisfies_dml());
        }
    }
}

#[test]
fn pentagon_is_not_modular() {
    let n5 = FiniteLattice::pentagon();
    assert!(!n5.is_modular());
    assert!(Quantale::with_meet(Arc::new(n5), Mode::Iq).is_err());
}

/// With every product zero, `1·1 = 0` makes the chain non-semiprime while
/// the two annihilator conditions hold trivially (`ann(x) = 1`). The
/// three-way equivalence needs products that are not identically zero.
#[test]
fn zero_product_chain_splits_the_equivalence() {
    let chain = Arc::new(FiniteLattice::chain(2));
    let q = Quantale::new(chain, vec![0; 4], Mode::Iq).unwrap();
    let r = q.annihilator_equivalence().unwrap();
    assert!(!r.semiprime_and_dml);
    assert!(r.law2_all_pairs && r.ann_complemented_and_dml);
    assert!(!r.all_agree);
}
