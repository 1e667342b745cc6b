//! Property tests for the operation laws on randomly generated bases, plus
//! the structural invariants that fall outside the acceptance sweeps.

use proptest::prelude::*;
use sclat::dim::Dim;
use sclat::element::LatticeElement;
use sclat::formula::{Formula, Sentence, Term};
use sclat::poset::Poset;
use sclat::scaled::ScaledBase;
use std::collections::BTreeMap;

/// A random poset on up to 6 points: any edge set over index-ordered pairs
/// closes into a partial order.
fn arb_poset() -> impl Strategy<Value = Poset> {
    (0usize..=6, any::<u32>()).prop_map(|(n, edges)| {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut pool = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pool.push((i, j));
            }
        }
        let rel: Vec<(String, String)> = pool
            .iter()
            .enumerate()
            .filter(|&(t, _)| edges & (1 << (t % 32)) != 0)
            .map(|(_, &(i, j))| (names[i].clone(), names[j].clone()))
            .collect();
        Poset::new(&names, &rel).expect("index-ordered pairs are acyclic")
    })
}

/// A random base: labels are chain heights plus monotone bumps, so the
/// strict-increase invariant holds by construction.
fn arb_base() -> impl Strategy<Value = ScaledBase> {
    (arb_poset(), proptest::collection::vec(0u32..=1, 0..=6)).prop_map(|(p, bumps)| {
        let n = p.len();
        let heights: Vec<u32> = (0..n)
            .map(|i| {
                let e = sclat::element::element(&p, &[p.name(i)]).unwrap();
                match e.dim() {
                    Dim::Finite(h) => h,
                    Dim::NegInf => 0,
                }
            })
            .collect();
        // Monotone bump: at least the maximum bump of everything below.
        let mut extra = vec![0u32; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| heights[i]);
        for &i in &order {
            let ei = sclat::element::element(&p, &[p.name(i)]).unwrap();
            let mut floor = 0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let ej = sclat::element::element(&p, &[p.name(j)]).unwrap();
                if ej.leq(&ei).unwrap() && ej != ei {
                    floor = floor.max(extra[j]);
                }
            }
            extra[i] = floor + bumps.get(i).copied().unwrap_or(0);
        }
        let labels: BTreeMap<String, u32> = (0..n)
            .map(|i| (p.name(i).to_string(), heights[i] + extra[i]))
            .collect();
        let d = labels.values().copied().max().unwrap_or(0);
        ScaledBase::new(p, d, &labels).expect("labels are strictly increasing")
    })
}

fn elements_of(base: &ScaledBase) -> Vec<LatticeElement> {
    base.all_elements().unwrap()
}

fn pick(elems: &[LatticeElement], idx: usize) -> LatticeElement {
    elems[idx % elems.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn difference_laws(base in arb_base(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let elems = elements_of(&base);
        let (a, b, c) = (pick(&elems, i), pick(&elems, j), pick(&elems, k));
        // a = (a /\ b) v (a - b)
        prop_assert_eq!(a.meet(&b).unwrap().join(&a.tc_diff(&b).unwrap()).unwrap(), a.clone());
        // (a - b) - b = a - b
        prop_assert_eq!(a.tc_diff(&b).unwrap().tc_diff(&b).unwrap(), a.tc_diff(&b).unwrap());
        // a - (b v c) = (a - b) - c
        prop_assert_eq!(
            a.tc_diff(&b.join(&c).unwrap()).unwrap(),
            a.tc_diff(&b).unwrap().tc_diff(&c).unwrap()
        );
        // (a v b) - c distributes over the join.
        prop_assert_eq!(
            a.join(&b).unwrap().tc_diff(&c).unwrap(),
            a.tc_diff(&c).unwrap().join(&b.tc_diff(&c).unwrap()).unwrap()
        );
        // a - b is the least element closing the gap.
        let d = a.tc_diff(&b).unwrap();
        prop_assert!(a.leq(&b.join(&d).unwrap()).unwrap());
        if a.leq(&b.join(&c).unwrap()).unwrap() {
            prop_assert!(d.leq(&c).unwrap());
        }
    }

    #[test]
    fn dimension_laws(base in arb_base(), i in any::<usize>(), j in any::<usize>()) {
        let elems = elements_of(&base);
        let (a, b) = (pick(&elems, i), pick(&elems, j));
        prop_assert_eq!(a.join(&b).unwrap().dim(), a.dim().max(b.dim()));
        prop_assert_eq!(a.dim(), a.dim_via_ll().unwrap());
        // scdim of a join is the maximum.
        prop_assert_eq!(
            base.scdim(&a.join(&b).unwrap()).unwrap(),
            base.scdim(&a).unwrap().max(base.scdim(&b).unwrap())
        );
        prop_assert!(a.dim() <= base.scdim(&a).unwrap());
    }

    #[test]
    fn strong_below_matches_its_order_definition(
        base in arb_base(), i in any::<usize>(), j in any::<usize>()
    ) {
        let elems = elements_of(&base);
        let (a, b) = (pick(&elems, i), pick(&elems, j));
        if !a.is_zero() {
            let by_diff = b.strongly_below(&a).unwrap();
            let by_order = elems.iter().all(|c| {
                let proper = c.leq(&a).unwrap() && *c != a;
                !proper || {
                    let u = b.join(c).unwrap();
                    u.leq(&a).unwrap() && u != a
                }
            }) && b.leq(&a).unwrap();
            prop_assert_eq!(by_diff, by_order);
        }
    }

    #[test]
    fn purity_contract(base in arb_base(), i in any::<usize>(), k in 0u32..4) {
        let elems = elements_of(&base);
        let a = pick(&elems, i);
        // a is k-pure exactly when every non-zero difference has that
        // sc-dimension.
        let fixed = base.is_k_sc_pure(&a, k).unwrap();
        let by_diffs = elems.iter().all(|b| {
            let d = a.tc_diff(b).unwrap();
            d.is_zero() || base.scdim(&d).unwrap() == Dim::Finite(k)
        });
        prop_assert_eq!(fixed, by_diffs);
    }

    #[test]
    fn pure_components_are_determined(
        base in arb_base(), parts in proptest::collection::vec(any::<usize>(), 0..4)
    ) {
        // Any join of pure parts with small pairwise overlaps recovers the
        // parts as its components.
        let elems = elements_of(&base);
        if elems.is_empty() {
            return Ok(());
        }
        let d = base.d();
        let mut chosen: Vec<Option<LatticeElement>> = vec![None; d as usize + 1];
        for (idx, &raw) in parts.iter().enumerate() {
            let i = (idx as u32) % (d + 1);
            let cand = pick(&elems, raw);
            if base.is_k_sc_pure(&cand, i).unwrap() {
                chosen[i as usize] = Some(cand);
            }
        }
        let mut join = base.zero();
        for c in chosen.iter().flatten() {
            join = join.join(c).unwrap();
        }
        let ok_overlaps = (0..=d).all(|i| {
            (0..=d).all(|j| {
                if i == j {
                    return true;
                }
                match (&chosen[i as usize], &chosen[j as usize]) {
                    (Some(ai), Some(aj)) => base
                        .scdim(&ai.meet(aj).unwrap())
                        .unwrap()
                        .lt(i.min(j)),
                    _ => true,
                }
            })
        });
        // Unchosen levels contribute bottom, which is pure of every degree.
        if ok_overlaps {
            for i in 0..=d {
                let expect = chosen[i as usize].clone().unwrap_or_else(|| base.zero());
                prop_assert_eq!(base.ck(&join, i).unwrap(), expect);
            }
        }
    }

    #[test]
    fn tabulation_round_trip(p in arb_poset()) {
        let tables = sclat::tabulate_downsets(&p).unwrap();
        let q = sclat::recover_poset(&tables).unwrap();
        // Compare shapes through height labelings (always valid).
        let by_heights = |poset: &Poset| -> ScaledBase {
            let labels: BTreeMap<String, u32> = poset
                .names()
                .iter()
                .map(|n| {
                    let h = sclat::element::element(poset, &[n.as_str()])
                        .unwrap()
                        .dim()
                        .finite()
                        .unwrap();
                    (n.clone(), h)
                })
                .collect();
            let d = labels.values().copied().max().unwrap_or(0);
            ScaledBase::new(poset.clone(), d, &labels).unwrap()
        };
        prop_assert!(by_heights(&p).is_isomorphic(&by_heights(&q)));
    }
}

// ---------------------------------------------------------------------------
// Formula round trip

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::One),
        "[a-c]".prop_map(Term::Var),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::Join(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::Meet(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::Diff(Box::new(a), Box::new(b))),
            (0u32..4, inner).prop_map(|(k, t)| Term::Comp(k, Box::new(t))),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Le(a, b)),
        (1u32..4, arb_term()).prop_map(|(k, t)| Formula::AtK(k, t)),
    ];
    atom.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(f in arb_formula(), exists in any::<bool>()) {
        let quantifier = if f.free_vars().is_empty() {
            None
        } else if exists {
            Some(sclat::Quantifier::Exists)
        } else {
            Some(sclat::Quantifier::Forall)
        };
        let s = Sentence {
            vars: f.free_vars(),
            quantifier,
            matrix: f,
        };
        let printed = s.to_string();
        let back = sclat::parse_sentence(&printed).unwrap();
        prop_assert_eq!(back, s, "through {}", printed);
    }
}

// ---------------------------------------------------------------------------
// Invariants beyond the proptest generators

#[test]
fn completion_invariant_stable_under_extension() {
    use sclat::logic::{enumerate_bases, EnumOptions, ModelBase};
    let mut opts = EnumOptions::new(1, 2);
    opts.asc = true;
    opts.k_cap = [1, 2].into_iter().collect();
    let mut checked = 0;
    for model in enumerate_bases(&opts).unwrap() {
        let ModelBase::Asc(asc) = model else { unreachable!() };
        let before = asc.completion_invariant().unwrap();
        let cap = [1, 2, 3].into_iter().collect();
        for asig in sclat::enumerate_asc_signatures(&asc, &cap).unwrap() {
            let ext = sclat::apply_asc_signature(&asc, &asig).unwrap();
            assert_eq!(
                ext.target.completion_invariant().unwrap(),
                before,
                "extension changed the prime invariant"
            );
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn prime_substructure_is_functorial() {
    use sclat::logic::{enumerate_bases, EnumOptions, ModelBase};
    for model in enumerate_bases(&EnumOptions::new(2, 3)).unwrap() {
        let ModelBase::Sc(base) = model else { unreachable!() };
        // A relabeled copy has an isomorphic prime.
        let renamed: Vec<String> = base
            .poset()
            .names()
            .iter()
            .map(|n| format!("w_{n}"))
            .collect();
        let pairs: Vec<(String, String)> = base
            .poset()
            .covers()
            .iter()
            .map(|(a, b)| (format!("w_{a}"), format!("w_{b}")))
            .collect();
        let labels: BTreeMap<String, u32> = renamed
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), base.label(i)))
            .collect();
        let copy = ScaledBase::new(
            Poset::new(&renamed, &pairs).unwrap(),
            base.d(),
            &labels,
        )
        .unwrap();
        let p1 = base.prime_substructure().unwrap().induced.base;
        let p2 = copy.prime_substructure().unwrap().induced.base;
        assert!(p1.is_isomorphic(&p2));
    }
}

/// Brute-force label-preserving order isomorphism for tiny bases.
fn brute_force_isomorphic(a: &ScaledBase, b: &ScaledBase) -> bool {
    let n = a.poset().len();
    if n != b.poset().len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all bijections.
    fn heaps(k: usize, perm: &mut Vec<usize>, check: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k <= 1 {
            return check(perm);
        }
        for i in 0..k {
            if heaps(k - 1, perm, check) {
                return true;
            }
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
        false
    }
    let pa = a.poset().clone();
    let pb = b.poset().clone();
    let la: Vec<u32> = (0..n).map(|i| a.label(i)).collect();
    let lb: Vec<u32> = (0..n).map(|i| b.label(i)).collect();
    let leq = |p: &Poset, i: usize, j: usize| {
        let ei = sclat::element::element(p, &[p.name(i)]).unwrap();
        let ej = sclat::element::element(p, &[p.name(j)]).unwrap();
        ei.leq(&ej).unwrap()
    };
    heaps(n, &mut perm, &mut |pi: &[usize]| {
        (0..n).all(|i| la[i] == lb[pi[i]])
            && (0..n).all(|i| (0..n).all(|j| leq(&pa, i, j) == leq(&pb, pi[i], pi[j])))
    })
}

#[test]
fn canonical_form_agrees_with_brute_force_isomorphism() {
    use sclat::logic::{enumerate_bases, EnumOptions, ModelBase};
    let bases: Vec<ScaledBase> = enumerate_bases(&EnumOptions::new(2, 3))
        .unwrap()
        .into_iter()
        .map(|m| match m {
            ModelBase::Sc(b) => b,
            _ => unreachable!(),
        })
        .collect();
    // The enumerated stream is deduplicated, so no two members may be
    // isomorphic; and shuffled copies must come back isomorphic.
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i + 1..] {
            assert_eq!(
                a.is_isomorphic(b),
                brute_force_isomorphic(a, b),
                "canon and brute force disagree on {:?} vs {:?}",
                a.poset().names(),
                b.poset().names()
            );
            assert!(!a.is_isomorphic(b), "enumeration emitted an isomorphic pair");
        }
        // Reverse the insertion order and rename every point.
        let n = a.poset().len();
        let renamed: Vec<String> = (0..n).rev().map(|i| format!("r{i}")).collect();
        let pairs: Vec<(String, String)> = a
            .poset()
            .covers()
            .iter()
            .map(|(x, y)| {
                let ix = a.poset().index_of(x).unwrap();
                let iy = a.poset().index_of(y).unwrap();
                (format!("r{}", n - 1 - ix), format!("r{}", n - 1 - iy))
            })
            .collect();
        let labels: BTreeMap<String, u32> = (0..n)
            .map(|i| (format!("r{}", n - 1 - i), a.label(i)))
            .collect();
        let names_in_new_order: Vec<String> =
            (0..n).map(|i| format!("r{i}")).collect();
        let shuffled = ScaledBase::new(
            Poset::new(&names_in_new_order, &pairs).unwrap(),
            a.d(),
            &labels,
        )
        .unwrap();
        assert!(a.is_isomorphic(&shuffled));
        assert!(brute_force_isomorphic(a, &shuffled));
    }
}

#[test]
fn counted_enumeration_deduplicates_weightings() {
    use sclat::logic::{enumerate_bases, EnumOptions, ModelBase};
    // Two incomparable label-0 atoms with weights from {0, 1}: the two
    // mixed assignments are isomorphic, so three classes remain.
    let mut opts = EnumOptions::new(0, 2);
    opts.asc = true;
    opts.k_cap = [1].into_iter().collect();
    let two_atom: Vec<_> = enumerate_bases(&opts)
        .unwrap()
        .into_iter()
        .filter(|m| matches!(m, ModelBase::Asc(a) if a.base().poset().len() == 2))
        .collect();
    assert_eq!(two_atom.len(), 3);
}
