//! Acceptance criteria over the builtin corpus. Each test prints one
//! `PASS`/`FAIL` line; run with `--nocapture` to see them.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dml_cli::{builtin_corpus, Structure};
use dml_core::quantale::Axiom;
use dml_core::spectra::{
    mu_nucleus, mu_open_isomorphism, mu_unfixed_annihilator, mu_unpreserved_annihilator, psi_points, psi_regularity,
    r_unfixed_annihilator, spectral_dml_equivalence, SpectraError,
};
use dml_core::{Bounds, FiniteLattice, FiniteModule, Mode, ModuleContext, Quantale, SubQuantale};
use fixedbitset::FixedBitSet;

struct Member {
    id: String,
    quantale: Quantale,
}

fn bounds() -> Bounds {
    Bounds::default()
}

fn modules() -> Vec<(String, ModuleContext)> {
    builtin_corpus(&bounds())
        .unwrap()
        .into_iter()
        .filter_map(|e| match e.build(&bounds()).unwrap() {
            Structure::Module(m) => Some((e.id, ModuleContext::new(m, &bounds()).unwrap())),
            Structure::Quantale(_) => None,
        })
        .collect()
}

/// Ideal quantales of the builtin rings, `Λ^fi` of the other modules, and
/// the hand-built quantales.
fn quantales() -> Vec<Member> {
    builtin_corpus(&bounds())
        .unwrap()
        .into_iter()
        .map(|e| {
            let quantale = match e.build(&bounds()).unwrap() {
                Structure::Quantale(q) => (*q).clone(),
                Structure::Module(m) if m.len() == m.ring().len() => m.ring().ideal_quantale().unwrap().0,
                Structure::Module(m) => ModuleContext::new(m, &bounds()).unwrap().fi_quantale().unwrap().clone(),
            };
            Member { id: e.id, quantale }
        })
        .collect()
}

fn verdict(n: u32, what: &str, limit: Option<Duration>, start: Instant, checked: usize, failures: &[String]) {
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = failures.is_empty() && in_time;
    let limit = limit.map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
    println!(
        "{} criterion {n}: {what} [{checked} checked, {} failures, {:.3}s{limit}]",
        if pass { "PASS" } else { "FAIL" },
        failures.len(),
        elapsed.as_secs_f64(),
    );
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
    assert!(in_time, "criterion {n} exceeded its time limit");
}

fn element(m: &FiniteModule, label: &str) -> usize {
    m.labels().iter().position(|l| l == label).unwrap()
}

#[test]
fn criterion_01_bican_product_on_klein_group() {
    let start = Instant::now();
    let (_, ctx) = modules().into_iter().find(|(id, _)| id == "Z2+Z2").unwrap();
    let m = ctx.module();
    let first = m.submodule(&[element(m, "(0,0)"), element(m, "(1,0)")]).unwrap();
    let mut failures = Vec::new();
    if ctx.bican_product(&first, &m.whole()) != m.whole() {
        failures.push("(Z2+0)_M M != M".to_string());
    }
    if ctx.is_fully_invariant(&first) {
        failures.push("Z2+0 is fully invariant".to_string());
    }
    verdict(
        1,
        "Bican product (Z2+0)_M M = M, Z2+0 not fully invariant",
        Some(Duration::from_secs(1)),
        start,
        2,
        &failures,
    );
}

#[test]
fn criterion_02_semiprime_dml_equivalence() {
    let start = Instant::now();
    let members = quantales();
    let failures: Vec<String> = members
        .iter()
        .filter(|m| !m.quantale.annihilator_equivalence().unwrap().all_agree)
        .map(|m| m.id.clone())
        .collect();
    verdict(
        2,
        "three annihilator conditions agree on every iq",
        Some(Duration::from_secs(10)),
        start,
        members.len(),
        &failures,
    );
}

#[test]
fn criterion_03_spectral_dml_equivalence() {
    let start = Instant::now();
    let members: Vec<Member> = quantales().into_iter().filter(|m| m.quantale.is_semiprime()).collect();
    let mut outcomes = std::collections::BTreeSet::new();
    let failures: Vec<String> = members
        .iter()
        .filter_map(|m| {
            let r = spectral_dml_equivalence(&m.quantale).unwrap();
            outcomes.insert(r.dml);
            (!r.all_agree).then(|| format!("{}: {r:?}", m.id))
        })
        .collect();
    // Both outcomes occur, so agreement is not vacuous.
    assert_eq!(outcomes.len(), 2);
    verdict(
        3,
        "five spectral conditions agree on semiprime members",
        Some(Duration::from_secs(30)),
        start,
        members.len(),
        &failures,
    );
}

#[test]
fn criterion_04_annihilator_lemmas() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for m in quantales() {
        let q = &m.quantale;
        if q.is_semiprime() {
            checked += 3;
            if let Some(w) = q.product_annihilator_violation().unwrap() {
                failures.push(format!("{}: ann(ab) != ann(a ^ b) at {w:?}", m.id));
            }
            if let Some(w) = q.zero_product_asymmetry().unwrap() {
                failures.push(format!("{}: ab = 0 asymmetric at {w:?}", m.id));
            }
            if let Some(w) = mu_unfixed_annihilator(q).unwrap() {
                failures.push(format!("{}: μ moves ann at {w}", m.id));
            }
        }
        match mu_unpreserved_annihilator(q) {
            Ok(w) => {
                checked += 1;
                if let Some(w) = w {
                    failures.push(format!("{}: ann(a) != ann(μa) at {w}", m.id));
                }
            }
            Err(SpectraError::Precondition(_)) => {}
            Err(e) => failures.push(format!("{}: {e}", m.id)),
        }
        match r_unfixed_annihilator(q) {
            Ok(w) => {
                checked += 1;
                if let Some(w) = w {
                    failures.push(format!("{}: r moves ann at {w}", m.id));
                }
            }
            Err(SpectraError::Precondition(_)) => {}
            Err(e) => failures.push(format!("{}: {e}", m.id)),
        }
    }
    verdict(4, "annihilator, μ and r lemmas", None, start, checked, &failures);
}

#[test]
fn criterion_05_mu_fixed_points_are_the_opens() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for m in quantales() {
        let whole = SubQuantale::whole(&m.quantale);
        if !whole.satisfies_star(&m.quantale) {
            continue;
        }
        checked += 1;
        let iso = mu_open_isomorphism(&mu_nucleus(&m.quantale, &whole).unwrap());
        if !(iso.bijective && iso.order_isomorphism) {
            failures.push(format!("{}: {iso:?}", m.id));
        }
        if m.id == "Z6" && (iso.fixed_points, iso.opens) != (4, 4) {
            failures.push(format!("Z6 anchor: {iso:?}"));
        }
    }
    verdict(
        5,
        "b -> U(b) is an order isomorphism from A_μ onto the opens",
        None,
        start,
        checked,
        &failures,
    );
}

#[test]
fn criterion_06_psi_is_regular() {
    let start = Instant::now();
    let members: Vec<Member> = quantales()
        .into_iter()
        .filter(|m| m.quantale.is_semiprime() && m.quantale.satisfies_dml())
        .collect();
    let failures: Vec<String> = members
        .iter()
        .filter_map(|m| {
            let r = psi_regularity(&m.quantale).unwrap();
            (!r.holds).then(|| format!("{}: {r:?}", m.id))
        })
        .collect();
    verdict(
        6,
        "Ψ is a regular DML frame and the regular core stabilizes by stage 1",
        None,
        start,
        members.len(),
        &failures,
    );
}

#[test]
fn criterion_07_points_of_psi() {
    let start = Instant::now();
    let members: Vec<Member> = quantales()
        .into_iter()
        .filter(|m| {
            let q = &m.quantale;
            q.is_semiprime() && q.satisfies_dml() && q.is_normal() && q.lattice().is_compact_lattice()
        })
        .collect();
    let failures: Vec<String> = members
        .iter()
        .filter_map(|m| {
            let r = psi_points(&m.quantale).unwrap();
            (!(r.extremely_disconnected && r.hausdorff)).then(|| format!("{}: {r:?}", m.id))
        })
        .collect();
    verdict(
        7,
        "pt Ψ is extremely disconnected and Hausdorff",
        None,
        start,
        members.len(),
        &failures,
    );
}

#[test]
fn criterion_08_baer_characterization() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mods = modules();
    for (id, ctx) in &mods {
        let r = ctx.baer_characterization().unwrap();
        if !r.all_agree {
            failures.push(format!("{id}: {:?}", r.conditions()));
        }
        let anchor = match id.as_str() {
            "Z6" | "M2(F2)" => Some(true),
            "Z4" | "T2(F2)" => Some(false),
            _ => None,
        };
        if let Some(a) = anchor {
            if r.conditions() != [a; 6] {
                failures.push(format!("{id} anchor: {:?}", r.conditions()));
            }
        }
    }
    verdict(
        8,
        "six module conditions agree, with anchors",
        Some(Duration::from_secs(60)),
        start,
        mods.len(),
        &failures,
    );
}

/// `{r : r·b ∈ aZ12 for every multiple b of y}` by direct residue arithmetic.
fn z12_colon(a: usize, y: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(12);
    s.extend((0..12).filter(|r| (0..12).all(|k| (r * (k * y % 12) % 12).is_multiple_of(a))));
    s
}

#[test]
fn criterion_09_colon_properties() {
    use dml_core::module_theory::ItemStatus;
    let start = Instant::now();
    let mut failures = Vec::new();
    let mods = modules();
    for (id, ctx) in &mods {
        let r = ctx.colon_properties();
        for item in &r.items {
            let ok = match item.item {
                1..=4 => item.status == ItemStatus::Pass,
                _ => item.status != ItemStatus::Fail,
            };
            if !ok {
                failures.push(format!("{id}: item {} {:?} {:?}", item.item, item.status, item.witness));
            }
        }
    }
    let (_, z12) = mods.iter().find(|(id, _)| id == "Z12").unwrap();
    let m = z12.module();
    let two = m.cyclic(element(m, "2"));
    let three = m.cyclic(element(m, "3"));
    let c23 = z12.colon(&two, &three).members;
    let c32 = z12.colon(&three, &two).members;
    if c23 != z12_colon(2, 3) || c32 != z12_colon(3, 2) {
        failures.push("Z12 colons differ from residue arithmetic".into());
    }
    if c23 != two || c32 != three || m.sum(&c23, &c32) != m.whole() {
        failures.push("Z12 anchor ((2):(3)) + ((3):(2)) = Z12".into());
    }
    verdict(
        9,
        "colon properties, with the Z12 anchor",
        None,
        start,
        mods.len() + 1,
        &failures,
    );
}

#[test]
fn criterion_10_sdml_variants() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mods = modules();
    for (id, ctx) in &mods {
        let r = ctx.sdml_variants();
        if !r.sdml2_implies_sdml || r.variants_agree == Some(false) {
            failures.push(format!("{id}: {r:?}"));
        }
        if r.sdml2 {
            let l = ctx.fi_lattice();
            if !(l.is_distributive() && l.is_frame()) {
                failures.push(format!("{id}: sdml2 with non-distributive fi lattice"));
            }
        }
    }
    verdict(10, "SDML variants", None, start, mods.len(), &failures);
}

#[test]
fn criterion_11_negative_controls() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mods = modules();
    for (id, expected) in [("Z4", vec!["0", "2"]), ("T2(F2)", vec!["[0 0; 0 0]", "[0 1; 0 0]"])] {
        let (_, ctx) = mods.iter().find(|(i, _)| i == id).unwrap();
        match ctx.semiprime_witness() {
            Some(w) => {
                let members: Vec<&str> = ctx.fi_set(w).ones().map(|m| ctx.module().label(m)).collect();
                if members != expected || ctx.product_fi(w, w) != ctx.fi_lattice().bottom() {
                    failures.push(format!("{id}: witness {members:?} does not square to zero"));
                }
            }
            None => failures.push(format!("{id} not flagged")),
        }
    }
    if FiniteLattice::pentagon().is_modular() {
        failures.push("N5 accepted as modular".into());
    }
    // m·m = 1 on the three-chain 0 < m < 1
    let chain = Arc::new(FiniteLattice::chain(3));
    let (zero, mid, top) = (chain.bottom(), 1, chain.top());
    assert!(chain.leq(zero, mid) && chain.leq(mid, top));
    let mut table = vec![zero; 9];
    for a in [mid, top] {
        for b in [mid, top] {
            table[a * 3 + b] = top;
        }
    }
    match Quantale::new(chain, table, Mode::Iq) {
        Err(v) if v.axiom == Axiom::TwoSided => {}
        other => failures.push(format!("bad table not rejected as two-sided: {other:?}")),
    }
    verdict(11, "negative controls fail as expected", None, start, 4, &failures);
}

fn stable_run(jobs: &str) -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_dml"))
        .args(["run", "--stable-only", "--jobs", jobs])
        .env_remove("DML_BOUNDS")
        .output()
        .unwrap();
    (out.stdout, out.status.success())
}

#[test]
fn criterion_12_determinism() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (a, ok_a) = stable_run("1");
    let (b, ok_b) = stable_run("4");
    if !(ok_a && ok_b) {
        failures.push("builtin run exited nonzero".into());
    }
    if a.is_empty() || a != b {
        failures.push("stable sections differ".into());
    }
    verdict(
        12,
        "two runs give byte-identical stable reports",
        None,
        start,
        2,
        &failures,
    );
}
