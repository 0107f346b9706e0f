//! Module-level operations checked against arithmetic and brute-force
//! oracles that do not go through Hom-set enumeration.

use std::sync::Arc;

use dml_core::expr::Expr;
use dml_core::module_theory::ItemStatus;
use dml_core::spectra::r_operator;
use dml_core::{Bounds, FiniteModule, FiniteRing, ModuleContext};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;

const CORPUS: [&str; 14] = [
    "Z2",
    "Z3",
    "Z4",
    "Z6",
    "Z8",
    "Z12",
    "F2",
    "F3",
    "F2xF2",
    "Z2xZ2xZ2",
    "M2(F2)",
    "T2(F2)",
    "F2[x]/(x^2)",
    "F2^2",
];

fn context(spec: &str) -> ModuleContext {
    let b = Bounds::default();
    let m = Expr::parse(spec).unwrap().build_module(&b).unwrap().unwrap();
    ModuleContext::new(Arc::new(m), &b).unwrap()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `dZ_n` as a set of residues.
fn multiples(n: usize, d: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend((0..n).filter(|x| x % d == 0));
    s
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Every subset of `M` that passes the submodule test; only for tiny `M`.
fn brute_submodules(m: &FiniteModule) -> Vec<FixedBitSet> {
    let n = m.len();
    let mut out: Vec<FixedBitSet> = (0u32..1 << n)
        .map(|mask| {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend((0..n).filter(|i| mask & (1 << i) != 0));
            s
        })
        .filter(|s| m.is_submodule(s))
        .collect();
    out.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Over `Z_n`: ideals are `dZ_n`, `(a)(b) = (gcd(ab, n))`,
    /// `Ann((d)) = (n/d)` and `((a):(b)) = (a / gcd(a, b))`.
    #[test]
    fn zn_operations_match_arithmetic(n in 2usize..=36) {
        let ctx = context(&format!("Z{n}"));
        let divs = divisors(n);
        prop_assert_eq!(ctx.submodules().len(), divs.len());
        prop_assert_eq!(ctx.fi_len(), divs.len());
        for &a in &divs {
            let ia = multiples(n, a);
            prop_assert_eq!(ctx.annihilator(&ia), multiples(n, n / a));
            for &b in &divs {
                let ib = multiples(n, b);
                prop_assert_eq!(ctx.bican_product(&ia, &ib), multiples(n, gcd(a * b, n)));
                prop_assert_eq!(ctx.colon(&ia, &ib).members, multiples(n, a / gcd(a, b)));
            }
        }
        let squarefree = divs.iter().all(|&d| d == 1 || n % (d * d) != 0);
        prop_assert_eq!(ctx.is_semiprime_module(), squarefree);
        let t = ctx.baer_characterization().unwrap();
        prop_assert!(t.all_agree);
        prop_assert_eq!(t.semiprime_and_dml, squarefree);
    }
}

#[test]
fn submodule_enumeration_matches_subset_scan() {
    for spec in CORPUS {
        let ctx = context(spec);
        if ctx.module().len() > 16 {
            continue;
        }
        assert_eq!(ctx.submodules().sets, brute_submodules(ctx.module()), "{spec}");
    }
}

#[test]
fn klein_group_counts() {
    let ctx = context("F2^2");
    assert_eq!(ctx.submodules().len(), 5);
    // Functions on four points that are additive; the action of F2 adds
    // nothing beyond additivity.
    let m = ctx.module();
    let mut additive = 0;
    for code in 0..4usize.pow(4) {
        let f: Vec<usize> = (0..4).map(|i| code / 4usize.pow(i) % 4).collect();
        if (0..4).all(|x| (0..4).all(|y| f[m.add(x, y)] == m.add(f[x], f[y]))) {
            additive += 1;
        }
    }
    assert_eq!(additive, 16);
    assert_eq!(ctx.endomorphisms().len(), 16);
    assert_eq!(ctx.fi_len(), 2);
}

#[test]
fn hom_sets_agree_with_endomorphism_filter() {
    let b = Bounds::default();
    for spec in CORPUS {
        let ctx = context(spec);
        for k in &ctx.submodules().sets {
            let direct = ctx.module().hom_set(k, &b).unwrap().maps;
            let filtered: Vec<Vec<usize>> = ctx.hom_into(k).into_iter().map(<[usize]>::to_vec).collect();
            assert_eq!(direct, filtered, "{spec}");
            assert!(direct.contains(&vec![ctx.module().zero(); ctx.module().len()]));
        }
    }
}

/// On `M = R` the Bican product is the ideal product and `Ann_M` is the
/// left annihilator, both computed from the ring tables directly.
#[test]
fn regular_modules_match_ideal_quantales() {
    let b = Bounds::default();
    for spec in CORPUS.iter().filter(|s| !s.contains('^')) {
        let ctx = context(spec);
        let ring = Expr::parse(spec).unwrap();
        let ring = match ring {
            Expr::Module { ring, .. } => ring.build(&b).unwrap(),
            _ => unreachable!(),
        };
        let (q, ideals) = ring.ideal_quantale().unwrap();
        assert_eq!(ideals.len(), ctx.fi_len(), "{spec}");
        let pos: Vec<usize> = ideals.iter().map(|i| ctx.fi_index(i).unwrap()).collect();
        for a in 0..ideals.len() {
            assert_eq!(pos[q.ann_left(a)], ctx.ann_fi(pos[a]), "{spec}");
            for c in 0..ideals.len() {
                assert_eq!(pos[q.product(a, c)], ctx.product_fi(pos[a], pos[c]), "{spec}");
            }
        }
    }
}

#[test]
fn ler_coincides_with_r_on_regular_modules() {
    for spec in CORPUS.iter().filter(|s| !s.contains('^')) {
        let ctx = context(spec);
        let q = ctx.fi_quantale().unwrap();
        let r = r_operator(q);
        for (n, &rn) in r.iter().enumerate() {
            assert_eq!(ctx.fi_index(&ctx.ler(ctx.fi_set(n))), Some(rn), "{spec}");
        }
        assert!(ctx.psi_module().unwrap().agree(), "{spec}");
    }
}

#[test]
fn annihilators_are_maximal() {
    for spec in CORPUS {
        assert_eq!(context(spec).ann_maximality_violation(), None, "{spec}");
    }
}

#[test]
fn semiprime_lemmas_hold() {
    for spec in CORPUS {
        let ctx = context(spec);
        assert_eq!(ctx.idempotent_violation(), None, "{spec}");
        if ctx.is_semiprime_module() {
            assert!(ctx.is_fi_retractable(), "{spec}");
            assert_eq!(ctx.semiprime_lemma_violation().unwrap(), None, "{spec}");
            assert_eq!(ctx.annprodinter_violation().unwrap(), None, "{spec}");
            assert_eq!(ctx.prop_semi_violation().unwrap(), None, "{spec}");
        } else {
            assert!(ctx.semiprime_lemma_violation().is_err());
        }
    }
}

#[test]
fn semiprime_submodules_are_the_mu_fixed_points() {
    for spec in CORPUS {
        let sp = context(spec).sp_comparison().unwrap();
        assert!(sp.equal, "{spec}: {sp:?}");
    }
}

#[test]
fn colon_and_sdml_properties() {
    for spec in CORPUS {
        let ctx = context(spec);
        let p62 = ctx.colon_properties();
        assert!(p62.holds(), "{spec}: {p62:?}");
        assert!(p62.items[..4].iter().all(|i| i.status == ItemStatus::Pass));
        let p63 = ctx.sdml_variants();
        assert!(p63.holds(), "{spec}: {p63:?}");
        let asano = ctx.asano_conditions();
        if asano.commutative_product {
            assert!(asano.agree(), "{spec}");
        }
    }
}

#[test]
fn baer_characterization_anchors() {
    for (spec, expected) in [("Z6", true), ("M2(F2)", true), ("Z4", false), ("T2(F2)", false)] {
        let r = context(spec).baer_characterization().unwrap();
        assert_eq!(r.conditions(), [expected; 6], "{spec}");
    }
}

#[test]
fn t2_strictly_upper_ideal_squares_to_zero() {
    let ctx = context("T2(F2)");
    let w = ctx.semiprime_witness().unwrap();
    let members: Vec<&str> = ctx.fi_set(w).ones().map(|m| ctx.module().label(m)).collect();
    assert_eq!(members, ["[0 0; 0 0]", "[0 1; 0 0]"]);
    assert_eq!(ctx.product_fi(w, w), ctx.fi_lattice().bottom());
}

#[test]
fn z2_module_over_itself_is_simple() {
    let f2 = Arc::new(FiniteRing::fp(2, &Bounds::default()).unwrap());
    let m = FiniteModule::regular(f2, &Bounds::default()).unwrap();
    let ctx = ModuleContext::new(Arc::new(m), &Bounds::default()).unwrap();
    assert_eq!(ctx.submodules().len(), 2);
    assert!(ctx.is_prime_submodule(&ctx.module().zero_submodule()).unwrap());
    assert!(ctx.is_fi_baer());
}
