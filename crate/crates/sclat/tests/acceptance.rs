//! Acceptance suite: one test per criterion, each printing a pass line with
//! the size of the sweep it covered.

use rand::{Rng, SeedableRng};
use sclat::element::LatticeElement;
use sclat::formula::{parse_formula, parse_sentence};
use sclat::logic::{
    decide_sentence, enumerate_bases, eval_formula, mu, sat_qf, theory_equal, DecideOptions,
    EnumOptions, ModelBase, SatOptions, Verdict,
};
use sclat::scaled::{CheckMode, ScaledBase, Substructure};
use sclat::signature::{apply_signature, enumerate_signatures, signature_of, tower_decompose};
use sclat::{AscBase, Signature, SpecialLinearSet};
use std::collections::{BTreeMap, BTreeSet};

fn sweep(d: u32, max_irr: usize) -> Vec<ScaledBase> {
    enumerate_bases(&EnumOptions::new(d, max_irr))
        .unwrap()
        .into_iter()
        .map(|m| match m {
            ModelBase::Sc(b) => b,
            ModelBase::Asc(_) => unreachable!(),
        })
        .collect()
}

fn asc_sweep(d: u32, max_irr: usize, k_cap: &[u32]) -> Vec<AscBase> {
    let mut opts = EnumOptions::new(d, max_irr);
    opts.asc = true;
    opts.k_cap = k_cap.iter().copied().collect();
    enumerate_bases(&opts)
        .unwrap()
        .into_iter()
        .map(|m| match m {
            ModelBase::Asc(a) => a,
            ModelBase::Sc(_) => unreachable!(),
        })
        .collect()
}

fn point_base(d: u32, label: u32) -> ScaledBase {
    ScaledBase::point(d, label).unwrap()
}

#[test]
fn criterion_1_axiom_conformance() {
    let bases = sweep(2, 5);
    for base in &bases {
        let report = base.check_axioms(CheckMode::Exhaustive).unwrap();
        assert!(report.exhaustive);
        for v in &report.verdicts {
            let must_hold = v.name.starts_with("SS")
                || v.name.starts_with("TC")
                || v.name == "unique-pure-decomposition";
            if must_hold {
                assert!(
                    v.pass,
                    "{} failed on {:?} (labels {:?}): {:?}",
                    v.name,
                    base.poset().names(),
                    base.labels(),
                    v.witness
                );
            }
        }
        // The chain-dimension axiomatization agrees with the classification.
        let alt = ["SC1", "SC2", "SC3"]
            .iter()
            .all(|n| report.verdict(n).unwrap().pass);
        assert_eq!(alt, report.scaled, "on {:?}", base.poset().names());
        assert_eq!(report.verdict("SC0").unwrap().pass, report.scaled);

        // Prime extraction is idempotent up to isomorphism.
        let prime = base.prime_substructure().unwrap().induced.base;
        let again = prime.prime_substructure().unwrap().induced.base;
        assert!(prime.is_isomorphic(&again));
    }
    println!(
        "criterion 1 (axiom conformance, all schemes): PASS over {} bases",
        bases.len()
    );
}

#[test]
fn criterion_2_mu_bound() {
    assert_eq!(mu(1, 0).unwrap(), 2u32.into());
    assert_eq!(mu(2, 0).unwrap(), 4u32.into());
    assert_eq!(mu(0, 1).unwrap(), 5u32.into());
    assert_eq!(mu(1, 1).unwrap(), 18u32.into());

    let pool: Vec<ScaledBase> = sweep(1, 5);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5c1a7);
    let mut checked = 0;
    while checked < 200 {
        let base = &pool[rng.gen_range(0..pool.len())];
        let elems = base.all_elements().unwrap();
        if elems.is_empty() {
            continue;
        }
        let n = rng.gen_range(1..=2usize);
        let tuple: Vec<LatticeElement> =
            (0..n).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
        let closure = Substructure::closure(base, &tuple).unwrap();
        let irr = closure.irreducibles().len();
        let bound = mu(n as u64, 1).unwrap();
        assert!(
            num_bigint::BigUint::from(irr) <= bound,
            "closure of {n} elements has {irr} irreducibles, above mu"
        );
        checked += 1;
    }
    println!("criterion 2 (mu bound): PASS, exact values plus {checked} seeded draws");
}

/// Independent oracle: raw tuples checked against the two defining clauses.
fn signature_oracle(base: &ScaledBase) -> BTreeSet<(u64, u64, u64, u32)> {
    let mut out = BTreeSet::new();
    let elems: Vec<LatticeElement> = base.all_elements().unwrap();
    for irr in Substructure::full(base).unwrap().irreducibles() {
        let strictly_below: Vec<&LatticeElement> = elems
            .iter()
            .filter(|h| h.leq(&irr).unwrap() && **h != irr)
            .collect();
        let pred = strictly_below
            .iter()
            .fold(base.zero(), |acc, h| acc.join(h).unwrap());
        let sg = base.scdim(&irr).unwrap().finite().unwrap();
        for h in &strictly_below {
            // Single-generator clause: scdim h < q < scdim g, h < g.
            for q in 0..sg {
                if base.scdim(h).unwrap().lt(q) {
                    out.insert(canonical_sig_key(base, &irr, h, h, q));
                }
            }
        }
        // Splitting clause: q = scdim g and h1 v h2 is the predecessor.
        for h1 in &strictly_below {
            for h2 in &strictly_below {
                if h1.join(h2).unwrap() == pred {
                    out.insert(canonical_sig_key(base, &irr, h1, h2, sg));
                }
            }
        }
    }
    out
}

fn canonical_sig_key(
    base: &ScaledBase,
    g: &LatticeElement,
    h1: &LatticeElement,
    h2: &LatticeElement,
    q: u32,
) -> (u64, u64, u64, u32) {
    let m = |e: &LatticeElement| -> u64 {
        let names = e.points();
        base.poset()
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| names.contains(n))
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    };
    let (a, b) = (m(h1), m(h2));
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    (m(g), a, b, q)
}

#[test]
fn criterion_3_signature_calculus() {
    let bases = sweep(2, 4);
    let mut total_sigs = 0usize;
    for base in &bases {
        let sigs = enumerate_signatures(base).unwrap();
        // (a) completeness against the brute-force oracle.
        let got: BTreeSet<_> = sigs
            .iter()
            .map(|s| canonical_sig_key(base, &s.g, &s.h1, &s.h2, s.q))
            .collect();
        assert_eq!(got.len(), sigs.len(), "duplicate signatures");
        assert_eq!(got, signature_oracle(base), "on {:?}", base.poset().names());

        let all_elems = base.all_elements().unwrap();
        let mut over_base_canons: BTreeSet<Vec<u8>> = BTreeSet::new();
        for sig in &sigs {
            let ext = apply_signature(base, sig).unwrap();
            // (d) the irreducible count grows by exactly one.
            assert_eq!(ext.map.target.poset().len(), base.poset().len() + 1);
            // (b) the signature of the new tuple over the image is sig.
            let image = ext.map.image().unwrap();
            let recovered = signature_of(&image, &ext.x1, &ext.x2).unwrap();
            let back = |e: &LatticeElement| -> LatticeElement {
                ext.map.preimage(e).unwrap().expect("image element")
            };
            let recovered_in_base = Signature::new(
                back(&recovered.g),
                back(&recovered.h1),
                back(&recovered.h2),
                recovered.q,
            );
            assert_eq!(&recovered_in_base, sig);
            // (c) distinct signatures give non-isomorphic extensions over the
            // base; pinning every element of the image makes the canonical
            // form an isomorphism-over-base invariant.
            let pinned: Vec<LatticeElement> = all_elems
                .iter()
                .map(|e| ext.map.map_element(e).unwrap())
                .collect();
            let canon = ext
                .map
                .target
                .canonical_form_with_pinned(&pinned)
                .unwrap();
            assert!(
                over_base_canons.insert(canon),
                "two signatures produced isomorphic extensions over the base"
            );
        }
        assert_eq!(over_base_canons.len(), sigs.len());
        total_sigs += sigs.len();

        // (e) tower length equals the irreducible difference, from the prime
        // substructure up.
        let prime = base.prime_substructure().unwrap();
        let prime_irr = prime.irreducibles().len();
        let steps = tower_decompose(base, &prime).unwrap();
        assert_eq!(steps.len(), base.poset().len() - prime_irr);
    }

    // Minimal proper extensions are exactly the primitive ones (irreducible
    // count difference one), exhaustively over substructure pairs.
    for base in sweep(2, 3) {
        let subs = all_substructures(&base);
        let full_irr = base.poset().len();
        for s in &subs {
            if s.len() == base.all_elements().unwrap().len() {
                continue;
            }
            let s_elems: BTreeSet<Vec<String>> =
                s.elements().iter().map(|e| e.points()).collect();
            let minimal = !subs.iter().any(|t| {
                let t_elems: BTreeSet<Vec<String>> =
                    t.elements().iter().map(|e| e.points()).collect();
                t_elems.len() > s_elems.len()
                    && t_elems.len() < base.all_elements().unwrap().len()
                    && s_elems.is_subset(&t_elems)
            });
            let card_one = full_irr == s.irreducibles().len() + 1;
            let primitive = is_primitive_over(&base, s);
            assert_eq!(minimal, card_one, "minimal <=> +1 irreducible");
            assert_eq!(primitive, card_one, "primitive <=> +1 irreducible");
        }
    }
    println!("criterion 3 (signature calculus): PASS, {total_sigs} signatures round-tripped");
}

/// Every operation-closed element family: candidate generator sets are all
/// element subsets (a closed family is the join-closure of its own
/// irreducibles, which need not be ambient-irreducible).
fn all_substructures(base: &ScaledBase) -> Vec<Substructure> {
    let elems = base.all_elements().unwrap();
    let mut seen: BTreeSet<Vec<Vec<String>>> = BTreeSet::new();
    let mut out = Vec::new();
    for set in 0u64..(1 << elems.len()) {
        let mut family: Vec<LatticeElement> = vec![base.zero(), base.one()];
        for (i, e) in elems.iter().enumerate() {
            if set & (1 << i) != 0 {
                family.push(e.clone());
            }
        }
        // Join-closure of the chosen generators.
        loop {
            let mut grew = false;
            let snapshot = family.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let j = a.join(b).unwrap();
                    if !family.contains(&j) {
                        family.push(j);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if let Ok(sub) = Substructure::verified(base, &family) {
            let key: Vec<Vec<String>> = sub.elements().iter().map(|e| e.points()).collect();
            if seen.insert(key) {
                out.push(sub);
            }
        }
    }
    out
}

fn is_primitive_over(base: &ScaledBase, s: &Substructure) -> bool {
    let elems = base.all_elements().unwrap();
    for x1 in &elems {
        for x2 in &elems {
            if signature_of(s, x1, x2).is_ok() {
                let mut gens = s.elements();
                gens.push(x1.clone());
                gens.push(x2.clone());
                let closed = Substructure::closure(base, &gens).unwrap();
                if closed.len() == elems.len() {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn criterion_4_splitting() {
    let bases = sweep(2, 3);
    let mut checked = 0usize;
    for base in &bases {
        let elems = base.all_elements().unwrap();
        for a in &elems {
            if a.is_zero() {
                continue;
            }
            for b1 in &elems {
                for b2 in &elems {
                    let join = b1.join(b2).unwrap();
                    if !join.strongly_below(a).unwrap() {
                        continue;
                    }
                    let split = sclat::splitting_extension(base, a, b1, b2).unwrap();
                    checked += 1;
                    // The construction asserts its postconditions internally;
                    // re-check the split identities here from the outside.
                    let t = &split.map.target;
                    let af = split.map.map_element(a).unwrap();
                    let b1f = split.map.map_element(b1).unwrap();
                    let b2f = split.map.map_element(b2).unwrap();
                    assert_eq!(af.tc_diff(&split.a2).unwrap(), split.a1);
                    assert_eq!(af.tc_diff(&split.a1).unwrap(), split.a2);
                    assert_eq!(
                        split.a1.meet(&split.a2).unwrap(),
                        b1f.meet(&b2f).unwrap()
                    );
                    assert!(b1f.leq(&split.a1).unwrap());
                    assert!(b2f.leq(&split.a2).unwrap());
                    // With no zero-dimensional part, the sc-dimension-0 atom
                    // set is unchanged.
                    if base.ck(a, 0).unwrap().is_zero() {
                        // Elements that are atoms of sc-dimension 0.
                        let atoms0 = |b: &ScaledBase| {
                            let mut v: Vec<String> = b
                                .poset()
                                .names()
                                .iter()
                                .enumerate()
                                .filter(|(i, n)| {
                                    b.label(*i) == 0
                                        && b.element(&[n.as_str()]).unwrap().points().len() == 1
                                })
                                .map(|(_, n)| n.clone())
                                .collect();
                            v.sort();
                            v
                        };
                        assert_eq!(atoms0(base), atoms0(t));
                    }
                }
            }
        }
    }
    println!("criterion 4 (splitting): PASS over {checked} valid triples");
}

#[test]
fn criterion_5_linear_representation() {
    let mut reps = 0usize;
    for base in sweep(2, 4) {
        let rep = sclat::represent(&base).unwrap();
        let report = rep.verify().unwrap();
        assert!(report.embedding, "failures: {:?}", report.failures);
        assert!(report.consistent);
        for (e, image) in rep.entries() {
            assert_eq!(base.scdim(&e).unwrap(), image.scdim(), "scdim preserved");
            // The geometric chain dimension agrees with the component
            // dimension on every image.
            assert_eq!(image.scdim(), image.krull_dim());
        }
        assert_eq!(
            rep.x.scdim(),
            base.scdim(&base.one()).unwrap(),
            "carrier dimension"
        );
        reps += 1;
    }

    let mut asc_reps = 0usize;
    for asc in asc_sweep(2, 4, &[1, 2, 3]) {
        for n_floor in [0u32, 3] {
            let rep = sclat::represent_asc(&asc, n_floor).unwrap();
            let pairs: Vec<(LatticeElement, SpecialLinearSet)> = rep
                .entries()
                .into_iter()
                .map(|(e, s)| (e, s.clone()))
                .collect();
            let target = sclat::SlsLattice {
                carrier: rep.x.clone(),
            };
            let report = sclat::embed_check(asc.base(), &target, &pairs).unwrap();
            assert!(report.embedding, "failures: {:?}", report.failures);
            // With every atom counted the map preserves counts outright.
            if asc.is_standard() {
                let strict = sclat::embed_check_asc(&asc, &target, &pairs).unwrap();
                assert!(strict.embedding, "failures: {:?}", strict.failures);
            }
            // Count clauses: counted atoms map to exactly that many points,
            // uncounted atoms to at least n_floor points.
            let p = asc.base().poset();
            for i in 0..p.len() {
                let e = asc.base().element(&[p.name(i)]).unwrap();
                if e.points().len() != 1 || asc.base().label(i) != 0 {
                    continue;
                }
                let image = rep.image_of(&e).unwrap();
                let w = asc.weights()[i];
                if w > 0 {
                    assert_eq!(image.components().len() as u32, w);
                } else {
                    assert!(image.components().len() as u32 >= n_floor);
                }
            }
            asc_reps += 1;
        }
    }
    println!(
        "criterion 5 (linear representation): PASS over {reps} plain and {asc_reps} counted runs"
    );
}

#[test]
fn criterion_6_decision_regression() {
    struct SatCase {
        formula: &'static str,
        d: u32,
        asc: bool,
        expect: Verdict,
    }
    let sat_cases = [
        SatCase { formula: "C0(x) /\\ C1(x) != 0", d: 1, asc: false, expect: Verdict::Unsat },
        SatCase { formula: "x != 0 /\\ C1(x) = x", d: 1, asc: false, expect: Verdict::Sat },
        SatCase { formula: "x != 0 /\\ C1(x) = x", d: 0, asc: false, expect: Verdict::Unsat },
        SatCase { formula: "!(C0(x) /\\ C1(x) != 0)", d: 1, asc: false, expect: Verdict::Sat },
        SatCase { formula: "!(x != 0 /\\ C1(x) = x)", d: 1, asc: false, expect: Verdict::Sat },
        SatCase { formula: "x = 0 \\/ x != 0", d: 1, asc: false, expect: Verdict::Sat },
        SatCase { formula: "x != x", d: 0, asc: false, expect: Verdict::Unsat },
        SatCase { formula: "x <= y /\\ y <= x /\\ x != y", d: 0, asc: false, expect: Verdict::Unsat },
        SatCase { formula: "At2(x) /\\ C1(x) = x", d: 1, asc: true, expect: Verdict::Unsat },
        SatCase { formula: "At3(x)", d: 0, asc: true, expect: Verdict::Sat },
    ];
    for case in &sat_cases {
        let f = parse_formula(case.formula).unwrap();
        for cap in [4usize, 5, 6] {
            let mut opts = SatOptions::new(case.d);
            opts.irr_ceiling = cap;
            opts.asc = case.asc;
            let out = sat_qf(&f, &opts).unwrap();
            assert_eq!(out.verdict, case.expect, "{} at cap {cap}", case.formula);
            if let Some(w) = &out.witness {
                // Witnesses are self-verifying.
                let assign: BTreeMap<String, LatticeElement> = w
                    .assignment
                    .iter()
                    .map(|(v, names)| (v.clone(), w.base.scaled().element(names).unwrap()))
                    .collect();
                assert!(eval_formula(&w.base, &assign, &f).unwrap());
            } else {
                // A capped miss must not claim exhaustiveness beyond mu.
                let covers =
                    sclat::mu_saturating(f.free_vars().len() as u64, case.d as i64, cap as u64)
                        <= cap as u64;
                assert_eq!(out.exhaustive, covers && !case.asc);
            }
        }
    }

    struct DecideCase {
        prime: ModelBase,
        formula: &'static str,
        d: u32,
        expect: Verdict,
    }
    let decide_cases = [
        DecideCase {
            prime: ModelBase::Sc(point_base(1, 1)),
            formula: "E x . x != 0 /\\ x != 1 /\\ C0(x) = x",
            d: 1,
            expect: Verdict::True,
        },
        DecideCase {
            prime: ModelBase::Sc(point_base(1, 1)),
            formula: "E x . C2(x) != 0",
            d: 1,
            expect: Verdict::False,
        },
        DecideCase {
            prime: ModelBase::Sc(ScaledBase::trivial(1)),
            formula: "E x . x != 0",
            d: 1,
            expect: Verdict::False,
        },
        DecideCase {
            prime: ModelBase::Sc(point_base(1, 1)),
            formula: "A x . C2(x) = 0",
            d: 1,
            expect: Verdict::True,
        },
        DecideCase {
            prime: ModelBase::Sc(point_base(1, 1)),
            formula: "A x . x - x = 0",
            d: 1,
            expect: Verdict::True,
        },
        DecideCase {
            prime: ModelBase::Asc(
                AscBase::new(
                    point_base(1, 0),
                    &BTreeMap::from([("x0".to_string(), 2)]),
                )
                .unwrap(),
            ),
            formula: "E x . At1(x)",
            d: 1,
            expect: Verdict::True,
        },
    ];
    for case in &decide_cases {
        let s = parse_sentence(case.formula).unwrap();
        for cap in [3usize, 4] {
            let mut opts = DecideOptions::new(case.d);
            opts.sat.irr_ceiling = cap;
            opts.sat.asc = matches!(case.prime, ModelBase::Asc(_));
            let out = decide_sentence(&case.prime, &s, &opts).unwrap();
            assert_eq!(out.verdict, case.expect, "{} at cap {cap}", case.formula);
            if out.verdict == Verdict::True && s.quantifier == Some(sclat::Quantifier::Exists) {
                // Cross-check: the matrix plus the prime diagram is
                // satisfiable at the witness size.
                let w = out.witness.as_ref().unwrap();
                let (diagram, _) = sclat::logic::prime_diagram(case.prime.scaled()).unwrap();
                let conj = sclat::Formula::And(
                    Box::new(s.matrix.clone()),
                    Box::new(diagram),
                );
                let mut sopts = SatOptions::new(case.d);
                sopts.bound_override = Some(w.base.scaled().poset().len());
                sopts.asc = opts.sat.asc;
                let sat_out = sat_qf(&conj, &sopts).unwrap();
                assert_eq!(sat_out.verdict, Verdict::Sat);
            }
        }
    }
    println!(
        "criterion 6 (decision regression): PASS over {} formulas at three caps",
        sat_cases.len() + decide_cases.len()
    );
}

#[test]
fn criterion_7_completion_classification() {
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            let a = ModelBase::Sc(point_base(3, m));
            let b = ModelBase::Sc(point_base(3, n));
            assert_eq!(theory_equal(&a, &b).unwrap(), m == n, "SC {m} vs {n}");
            let a = ModelBase::Asc(AscBase::from_scaled(point_base(3, m)));
            let b = ModelBase::Asc(AscBase::from_scaled(point_base(3, n)));
            assert_eq!(theory_equal(&a, &b).unwrap(), m == n, "ASC {m} vs {n}");
        }
    }
    // The abstract prime agrees with the geometric one on every
    // representation.
    let mut checked = 0usize;
    for base in sweep(2, 3) {
        let rep = sclat::represent(&base).unwrap();
        let prime = base.prime_substructure().unwrap();
        let image_prime: BTreeSet<SpecialLinearSet> = prime
            .elements()
            .iter()
            .map(|e| rep.image_of(e).unwrap().clone())
            .collect();
        let geometric: BTreeSet<SpecialLinearSet> =
            sclat::geometric_prime(&rep.x).unwrap().into_iter().collect();
        assert_eq!(image_prime, geometric, "on {:?}", base.poset().names());
        checked += 1;
    }
    println!(
        "criterion 7 (completion classification): PASS, dims 1-3 plus {checked} prime/geometry matches"
    );
}

#[test]
fn criterion_8_dimension_duality() {
    let bases = sweep(2, 5);
    let mut elements = 0usize;
    for base in &bases {
        for e in base.all_elements().unwrap() {
            assert_eq!(e.dim(), e.dim_via_ll().unwrap(), "on {:?}", e.maximals());
            elements += 1;
        }
    }
    println!("criterion 8 (dimension duality): PASS over {elements} elements");
}

#[test]
fn criterion_9_catenarity_discrimination() {
    // Geometric catenarity on every representation-image family.
    let mut families = 0usize;
    for base in sweep(2, 3) {
        let rep = sclat::represent(&base).unwrap();
        let images: Vec<SpecialLinearSet> = rep
            .entries()
            .into_iter()
            .map(|(_, s)| s.clone())
            .collect();
        let family = sclat::sls_closure(&images).unwrap();
        let report = sclat::geometric_catenarity(&family).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        families += 1;
    }
    // The documented abstract failure.
    let pt1 = point_base(1, 1);
    let report = sclat::check_catenarity(&pt1).unwrap();
    assert!(!report.pass);
    let w = report.witness.unwrap();
    assert_eq!((w.q, w.p), (0, 1));
    assert!(w.c.is_empty());
    assert_eq!(w.a, vec!["x0"]);
    // Catenary implies scaled on the tested family.
    let mut catenary = 0usize;
    for base in sweep(2, 4) {
        if sclat::check_catenarity(&base).unwrap().pass {
            catenary += 1;
            assert!(
                base.check_axioms(CheckMode::Exhaustive).unwrap().scaled,
                "catenary base must be scaled: {:?} labels {:?}",
                base.poset().names(),
                base.labels()
            );
        }
    }
    println!(
        "criterion 9 (catenarity discrimination): PASS, {families} geometric families, {catenary} catenary bases all scaled"
    );
}
