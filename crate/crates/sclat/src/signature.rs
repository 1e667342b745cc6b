//! Minimal (primitive) extensions of finite subscaled lattices: signature
//! enumeration, construction of the extension a signature classifies,
//! signature recovery from a primitive tuple, and tower decomposition of an
//! arbitrary finite extension into primitive steps.

use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::error::{Error, Result};
use crate::poset::{bit, iter_bits, Mask, Poset};
use crate::scaled::{ScaledBase, Substructure};
use std::collections::BTreeMap;

/// The classifying data of a primitive extension: a join-irreducible `g`,
/// one or two elements below it, and the sc-dimension `q` of the new
/// generator(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub g: LatticeElement,
    pub h1: LatticeElement,
    pub h2: LatticeElement,
    pub q: u32,
}

impl Signature {
    pub fn new(g: LatticeElement, h1: LatticeElement, h2: LatticeElement, q: u32) -> Signature {
        let (h1, h2) = if h1.mask() <= h2.mask() { (h1, h2) } else { (h2, h1) };
        Signature { g, h1, h2, q }
    }

    /// 1 when the extension adjoins a single new irreducible strictly below
    /// `g`, 2 when it splits `g` in two.
    pub fn r(&self, base: &ScaledBase) -> Result<u8> {
        let g = base.check_elem(&self.g)?;
        Ok(if Dim::Finite(self.q) < base.scdim_m(g) {
            1
        } else {
            2
        })
    }
}

/// A base extended from `source`, with the element map of the inclusion.
#[derive(Debug, Clone)]
pub struct BaseMap {
    pub source: ScaledBase,
    pub target: ScaledBase,
    /// Source poset point -> target element.
    point_image: Vec<Mask>,
}

impl BaseMap {
    pub(crate) fn identity(base: &ScaledBase) -> BaseMap {
        let point_image = (0..base.poset().len())
            .map(|i| base.poset().below_mask(i))
            .collect();
        BaseMap {
            source: base.clone(),
            target: base.clone(),
            point_image,
        }
    }

    pub(crate) fn new(source: &ScaledBase, target: &ScaledBase, point_image: Vec<Mask>) -> BaseMap {
        BaseMap {
            source: source.clone(),
            target: target.clone(),
            point_image,
        }
    }

    pub(crate) fn map_m(&self, m: Mask) -> Mask {
        iter_bits(m).fold(0, |acc, p| acc | self.point_image[p])
    }

    pub fn map_element(&self, e: &LatticeElement) -> Result<LatticeElement> {
        let m = self.source.check_elem(e)?;
        Ok(self.target.elem(self.map_m(m)))
    }

    /// Composition `self` then `next`.
    pub(crate) fn then(&self, next: &BaseMap) -> BaseMap {
        debug_assert!(self.target == next.source);
        BaseMap {
            source: self.source.clone(),
            target: next.target.clone(),
            point_image: self.point_image.iter().map(|&m| next.map_m(m)).collect(),
        }
    }

    /// Image of the whole source lattice, as a substructure of the target.
    pub fn image(&self) -> Result<Substructure> {
        let family: Vec<Mask> = self
            .source
            .poset()
            .all_downsets()?
            .into_iter()
            .map(|m| self.map_m(m))
            .collect();
        let elems: Vec<LatticeElement> = family.iter().map(|&m| self.target.elem(m)).collect();
        Substructure::verified(&self.target, &elems)
    }

    /// Preimage lookup for elements in the image.
    pub(crate) fn invert(&self) -> Result<BTreeMap<Mask, Mask>> {
        let mut map = BTreeMap::new();
        for m in self.source.poset().all_downsets()? {
            map.insert(self.map_m(m), m);
        }
        Ok(map)
    }

    /// The source element mapping to `e`, when `e` lies in the image.
    pub fn preimage(&self, e: &LatticeElement) -> Result<Option<LatticeElement>> {
        let m = self.target.check_elem(e)?;
        Ok(self.invert()?.get(&m).map(|&s| self.source.elem(s)))
    }
}

/// A primitive extension: the new base, the inclusion map, and the new
/// generator pair.
#[derive(Debug, Clone)]
pub struct Extension {
    pub map: BaseMap,
    pub x1: LatticeElement,
    pub x2: LatticeElement,
}

fn scdim_finite(base: &ScaledBase, m: Mask) -> Result<u32> {
    match base.scdim_m(m) {
        Dim::Finite(v) => Ok(v),
        Dim::NegInf => Err(Error::Signature("g must be non-zero".into())),
    }
}

/// Checks the two defining clauses of a signature relative to a sublattice
/// view (the full lattice, or any verified substructure).
fn validate_in(sub: &Substructure, g: Mask, h1: Mask, h2: Mask, q: u32) -> Result<()> {
    let base = &sub.ambient;
    if !sub.irreducible_masks().contains(&g) {
        return Err(Error::Signature(
            "g must be a join-irreducible element".into(),
        ));
    }
    for h in [h1, h2] {
        if !sub.contains_m(h) {
            return Err(Error::Signature("H must consist of elements of the base".into()));
        }
    }
    let sg = scdim_finite(base, g)?;
    let pred = sub.pred_m(g);
    if q < sg {
        if h1 != h2 {
            return Err(Error::Signature(
                "q < scdim g requires H to be a singleton".into(),
            ));
        }
        if h1 & !g == 0 && h1 != g {
            // h1 < g holds
        } else {
            return Err(Error::Signature("q < scdim g requires h < g".into()));
        }
        if !base.scdim_m(h1).lt(q) {
            return Err(Error::Signature("q < scdim g requires scdim h < q".into()));
        }
    } else if q == sg {
        if h1 | h2 != pred {
            return Err(Error::Signature(
                "q = scdim g requires h1 v h2 to be the predecessor of g".into(),
            ));
        }
    } else {
        return Err(Error::Signature("q must not exceed scdim g".into()));
    }
    Ok(())
}

/// Validates a signature against the full lattice of a base.
pub fn validate_signature(base: &ScaledBase, sig: &Signature) -> Result<()> {
    let g = base.check_elem(&sig.g)?;
    let h1 = base.check_elem(&sig.h1)?;
    let h2 = base.check_elem(&sig.h2)?;
    let full = Substructure::full(base)?;
    validate_in(&full, g, h1, h2, sig.q)
}

/// All signatures of a base, in a fixed deterministic order.
pub fn enumerate_signatures(base: &ScaledBase) -> Result<Vec<Signature>> {
    let p = base.poset();
    let mut out = Vec::new();
    for pi in 0..p.len() {
        let g = p.below_mask(pi);
        let pred = g & !bit(pi);
        if pred.count_ones() > 20 {
            return Err(Error::TooLarge(
                "signature enumeration needs irreducibles with at most 20 predecessors".into(),
            ));
        }
        let sg = base.label(pi);
        // Downsets below the predecessor, ascending.
        let mut subs: Vec<Mask> = Vec::new();
        let mut s = pred;
        loop {
            if p.is_downset(s) {
                subs.push(s);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & pred;
        }
        subs.sort_unstable();
        // Single new irreducible strictly inside g.
        for &h in &subs {
            let lo = match base.scdim_m(h) {
                Dim::NegInf => 0,
                Dim::Finite(v) => v + 1,
            };
            for q in lo..sg {
                out.push(Signature::new(
                    base.elem(g),
                    base.elem(h),
                    base.elem(h),
                    q,
                ));
            }
        }
        // Splitting g in two along a cover of its predecessor.
        for (i, &h1) in subs.iter().enumerate() {
            for &h2 in &subs[i..] {
                if h1 | h2 == pred {
                    out.push(Signature::new(
                        base.elem(g),
                        base.elem(h1),
                        base.elem(h2),
                        sg,
                    ));
                }
            }
        }
    }
    out.sort_by_key(|s| (s.g.mask(), s.q, s.h1.mask(), s.h2.mask()));
    Ok(out)
}

fn fresh_names(taken: &[String], count: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 0usize;
    while out.len() < count {
        let cand = format!("z{k}");
        if !taken.contains(&cand) && !out.contains(&cand) {
            out.push(cand);
        }
        k += 1;
    }
    out
}

/// Builds the primitive extension classified by a signature: a fresh point
/// below `g` (single case) or the replacement of `g` by two incomparable
/// points (splitting case). The inclusion of the old base verifies as an
/// embedding and `signature_of` recovers the signature.
pub fn apply_signature(base: &ScaledBase, sig: &Signature) -> Result<Extension> {
    let g = base.check_elem(&sig.g)?;
    let h1 = base.check_elem(&sig.h1)?;
    let h2 = base.check_elem(&sig.h2)?;
    let full = Substructure::full(base)?;
    validate_in(&full, g, h1, h2, sig.q)?;
    let p = base.poset();
    let gp = iter_bits(base.poset().maximals_mask(g))
        .next()
        .expect("irreducible has a maximal point");
    let old_names = p.names().to_vec();
    let sg = base.label(gp);

    let mut names: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut labels: BTreeMap<String, u32> = BTreeMap::new();
    let order_pairs = |names_in: &[String], keep: &dyn Fn(usize) -> bool| {
        let mut v = Vec::new();
        for i in 0..p.len() {
            if !keep(i) {
                continue;
            }
            for j in iter_bits(p.below_mask(i) & !bit(i)) {
                if keep(j) {
                    v.push((names_in[j].clone(), names_in[i].clone()));
                }
            }
        }
        v
    };

    if sig.q < sg {
        // One new point: below it the points of h1, above it everything >= g.
        let fresh = fresh_names(&old_names, 1).remove(0);
        names.extend(old_names.iter().cloned());
        names.push(fresh.clone());
        pairs.extend(order_pairs(&old_names, &|_| true));
        for y in iter_bits(h1) {
            pairs.push((old_names[y].clone(), fresh.clone()));
        }
        for w in iter_bits(p.above_mask(gp)) {
            pairs.push((fresh.clone(), old_names[w].clone()));
        }
        for (i, n) in old_names.iter().enumerate() {
            labels.insert(n.clone(), base.label(i));
        }
        labels.insert(fresh.clone(), sig.q);
        let poset = Poset::new(&names, &pairs)?;
        let target = ScaledBase::new(poset, base.d(), &labels)?;
        let x = target.poset().below_mask(target.poset().index_of(&fresh)?);
        let point_image: Vec<Mask> = (0..p.len())
            .map(|i| target.poset().below_mask(target.poset().index_of(&old_names[i]).unwrap()))
            .collect();
        Ok(Extension {
            x1: target.elem(x),
            x2: target.elem(x),
            map: BaseMap::new(base, &target, point_image),
        })
    } else {
        // Replace g by two incomparable points with downsets h1, h2.
        let fresh = fresh_names(&old_names, 2);
        let keep = |i: usize| i != gp;
        for (i, n) in old_names.iter().enumerate() {
            if keep(i) {
                names.push(n.clone());
                labels.insert(n.clone(), base.label(i));
            }
        }
        names.extend(fresh.iter().cloned());
        labels.insert(fresh[0].clone(), sig.q);
        labels.insert(fresh[1].clone(), sig.q);
        pairs.extend(order_pairs(&old_names, &keep));
        for (t, h) in [(0, h1), (1, h2)] {
            for y in iter_bits(h) {
                pairs.push((old_names[y].clone(), fresh[t].clone()));
            }
            for w in iter_bits(p.above_mask(gp) & !bit(gp)) {
                pairs.push((fresh[t].clone(), old_names[w].clone()));
            }
        }
        let poset = Poset::new(&names, &pairs)?;
        let target = ScaledBase::new(poset, base.d(), &labels)?;
        let x1 = target.poset().below_mask(target.poset().index_of(&fresh[0])?);
        let x2 = target.poset().below_mask(target.poset().index_of(&fresh[1])?);
        let point_image: Vec<Mask> = (0..p.len())
            .map(|i| {
                if i == gp {
                    x1 | x2
                } else {
                    target
                        .poset()
                        .below_mask(target.poset().index_of(&old_names[i]).unwrap())
                }
            })
            .collect();
        Ok(Extension {
            x1: target.elem(x1),
            x2: target.elem(x2),
            map: BaseMap::new(base, &target, point_image),
        })
    }
}

/// Recovers the signature of a primitive tuple `(x1, x2)` over a
/// substructure, checking the primitivity conditions and naming the failed
/// one otherwise.
pub fn signature_of(
    sub: &Substructure,
    x1: &LatticeElement,
    x2: &LatticeElement,
) -> Result<Signature> {
    let base = &sub.ambient;
    let x1m = base.check_elem(x1)?;
    let x2m = base.check_elem(x2)?;
    let p = base.poset();
    for (x, label) in [(x1m, "x1"), (x2m, "x2")] {
        if x == 0 {
            return Err(Error::NotPrimitive {
                condition: "P2".into(),
                detail: format!("{label} must be non-zero"),
            });
        }
        if sub.contains_m(x) {
            return Err(Error::NotPrimitive {
                condition: "P2".into(),
                detail: format!("{label} already belongs to the base"),
            });
        }
    }
    let g = sub.g_of_m(x1m);
    if g != sub.g_of_m(x2m) {
        return Err(Error::NotPrimitive {
            condition: "P2".into(),
            detail: "x1 and x2 generate different irreducibles".into(),
        });
    }
    if !sub.irreducible_masks().contains(&g) {
        return Err(Error::NotPrimitive {
            condition: "P2".into(),
            detail: "the least base element above the tuple is not join-irreducible".into(),
        });
    }
    let pred = sub.pred_m(g);
    for (x, label) in [(x1m, "x1"), (x2m, "x2")] {
        if !sub.contains_m(pred & x) {
            return Err(Error::NotPrimitive {
                condition: "P1".into(),
                detail: format!("g^- /\\ {label} does not belong to the base"),
            });
        }
    }
    if x1m == x2m {
        let h = pred & x1m;
        if !(p.strongly_below_m(h, x1m) && p.strongly_below_m(x1m, g)) {
            return Err(Error::NotPrimitive {
                condition: "P2".into(),
                detail: "need g^- /\\ x1 << x1 << g when x1 = x2".into(),
            });
        }
    } else {
        if !sub.contains_m(x1m & x2m) {
            return Err(Error::NotPrimitive {
                condition: "P2".into(),
                detail: "x1 /\\ x2 does not belong to the base".into(),
            });
        }
        if p.diff_m(g, x1m) != x2m || p.diff_m(g, x2m) != x1m {
            return Err(Error::NotPrimitive {
                condition: "P2".into(),
                detail: "need g - x1 = x2 and g - x2 = x1".into(),
            });
        }
    }
    let q1 = base.scdim_m(x1m);
    let q2 = base.scdim_m(x2m);
    if q1 != q2 || !base.is_sc_pure_m(x1m) || !base.is_sc_pure_m(x2m) {
        return Err(Error::NotPrimitive {
            condition: "P3".into(),
            detail: "x1 and x2 must be sc-pure of the same sc-dimension".into(),
        });
    }
    let Dim::Finite(q) = q1 else {
        return Err(Error::NotPrimitive {
            condition: "P3".into(),
            detail: "generators must be non-zero".into(),
        });
    };
    Ok(Signature::new(
        base.elem(g),
        base.elem(pred & x1m),
        base.elem(pred & x2m),
        q,
    ))
}

/// One step of a tower decomposition.
pub struct TowerStep {
    /// Signature of the step, with elements of the ambient base (they belong
    /// to the sublattice the step extends).
    pub signature: Signature,
    pub x1: LatticeElement,
    pub x2: LatticeElement,
    /// The sublattice after adjoining the step's generators.
    pub sub: Substructure,
}

/// Decomposes `inner`, a verified substructure of `outer`'s lattice, into a
/// chain of primitive extensions reaching the full lattice. The number of
/// steps equals the difference in join-irreducible counts.
pub fn tower_decompose(outer: &ScaledBase, inner: &Substructure) -> Result<Vec<TowerStep>> {
    if inner.ambient != *outer {
        return Err(Error::Argument(
            "inner substructure does not live in the outer base".into(),
        ));
    }
    let p = outer.poset();
    let mut steps: Vec<TowerStep> = Vec::new();
    let mut current: Vec<Mask> = inner.family.clone();
    let inner_irr = inner.irreducible_masks().len();
    loop {
        let sub = Substructure::from_family(outer, current.clone())?;
        let missing: Vec<usize> = (0..p.len())
            .filter(|&i| !sub.contains_m(p.below_mask(i)))
            .collect();
        if missing.is_empty() {
            break;
        }
        // Canonically least minimal point whose downset is missing.
        let x1_point = *missing
            .iter()
            .find(|&&i| {
                missing
                    .iter()
                    .all(|&j| j == i || !p.leq_points(j, i) || p.leq_points(i, j))
            })
            .expect("a minimal missing point exists");
        let x1m = p.below_mask(x1_point);
        let g = sub.g_of_m(x1m);
        let x2m = if p.strongly_below_m(x1m, g) {
            x1m
        } else {
            p.diff_m(g, x1m)
        };
        let signature = signature_of(&sub, &outer.elem(x1m), &outer.elem(x2m))?;
        let mut next = outer.sc_closure(
            &current
                .iter()
                .copied()
                .chain([x1m, x2m])
                .collect::<Vec<_>>(),
        );
        next.sort_unstable();
        let next_sub = Substructure::from_family(outer, next.clone())?;
        let grown = next_sub.irreducible_masks().len();
        let prev = sub.irreducible_masks().len();
        if grown != prev + 1 {
            return Err(Error::Argument(format!(
                "tower step did not grow the irreducible count by one ({prev} -> {grown})"
            )));
        }
        steps.push(TowerStep {
            signature,
            x1: outer.elem(x1m),
            x2: outer.elem(x2m),
            sub: next_sub,
        });
        current = next;
        if steps.len() > p.len() {
            return Err(Error::Argument("tower decomposition did not converge".into()));
        }
    }
    let total = p.len() - inner_irr;
    if steps.len() != total {
        return Err(Error::Argument(format!(
            "tower length {} differs from the irreducible difference {}",
            steps.len(),
            total
        )));
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn ch2() -> ScaledBase {
        let p = Poset::new(&["x0", "x1"], &[("x0", "x1")]).unwrap();
        ScaledBase::new(p, 1, &BTreeMap::from([("x0".into(), 0), ("x1".into(), 1)])).unwrap()
    }

    #[test]
    fn ch2_has_exactly_four_signatures() {
        let b = ch2();
        let sigs = enumerate_signatures(&b).unwrap();
        let pt = b.element(&["x0"]).unwrap();
        let one = b.one();
        let zero = b.zero();
        let expect = vec![
            Signature::new(pt.clone(), zero.clone(), zero.clone(), 0),
            Signature::new(one.clone(), zero.clone(), zero.clone(), 0),
            Signature::new(one.clone(), zero.clone(), pt.clone(), 1),
            Signature::new(one.clone(), pt.clone(), pt.clone(), 1),
        ];
        assert_eq!(sigs.len(), 4);
        for e in &expect {
            assert!(sigs.contains(e), "missing {e:?}");
        }
    }

    #[test]
    fn point_bases_signature_counts() {
        let pt0 = ScaledBase::point(2, 0).unwrap();
        assert_eq!(enumerate_signatures(&pt0).unwrap().len(), 1);
        let pt2 = ScaledBase::point(2, 2).unwrap();
        let sigs = enumerate_signatures(&pt2).unwrap();
        assert_eq!(sigs.len(), 3);
        let qs: Vec<u32> = sigs.iter().map(|s| s.q).collect();
        assert_eq!(qs, vec![0, 1, 2]);
        assert!(enumerate_signatures(&ScaledBase::trivial(1)).unwrap().is_empty());
    }

    #[test]
    fn apply_splitting_signature_gives_v_shape() {
        let b = ch2();
        let sig = Signature::new(
            b.one(),
            b.element(&["x0"]).unwrap(),
            b.zero(),
            1,
        );
        let ext = apply_signature(&b, &sig).unwrap();
        let t = &ext.map.target;
        assert_eq!(t.poset().len(), 3);
        assert_eq!(t.poset().cover_indices().len(), 1);
        let mut labels: Vec<u32> = t.labels().to_vec();
        labels.sort_unstable();
        assert_eq!(labels, vec![0, 1, 1]);
        assert_ne!(ext.x1, ext.x2);
        // x1 covers the old point, x2 is isolated (or vice versa).
        let sizes: Vec<u32> = {
            let mut v = vec![ext.x1.mask().count_ones(), ext.x2.mask().count_ones()];
            v.sort_unstable();
            v
        };
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn apply_single_signature_adds_low_point() {
        let b = ch2();
        let sig = Signature::new(b.one(), b.zero(), b.zero(), 0);
        let ext = apply_signature(&b, &sig).unwrap();
        let t = &ext.map.target;
        assert_eq!(t.poset().len(), 3);
        // New point sits below the image of the top irreducible only.
        assert_eq!(ext.x1, ext.x2);
        assert_eq!(ext.x1.mask().count_ones(), 1);
        let top = ext.map.map_element(&b.one()).unwrap();
        assert!(ext.x1.leq(&top).unwrap());
        let recovered = signature_of(
            &ext.map.image().unwrap(),
            &ext.x1,
            &ext.x2,
        )
        .unwrap();
        let inv = ext.map.invert().unwrap();
        assert_eq!(inv[&recovered.g.mask()], b.one().mask());
        assert_eq!(recovered.q, 0);
    }

    #[test]
    fn point_splits_into_antichain() {
        let b = ScaledBase::point(1, 0).unwrap();
        let sig = Signature::new(b.one(), b.zero(), b.zero(), 0);
        let ext = apply_signature(&b, &sig).unwrap();
        assert_eq!(ext.map.target.poset().len(), 2);
        assert!(ext.map.target.poset().cover_indices().is_empty());
    }

    #[test]
    fn signature_of_rejects_non_primitive_tuples() {
        let b = ch2();
        let sig = Signature::new(b.one(), b.element(&["x0"]).unwrap(), b.zero(), 1);
        let ext = apply_signature(&b, &sig).unwrap();
        let image = ext.map.image().unwrap();
        // Same x on both sides of a genuine two-generator extension: the
        // difference law of P2 fails.
        let err = signature_of(&image, &ext.x1, &ext.x1).unwrap_err();
        match err {
            Error::NotPrimitive { condition, .. } => assert_eq!(condition, "P2"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn tower_from_prime_of_ch2_has_one_step() {
        let b = ch2();
        let prime = b.prime_substructure().unwrap();
        let steps = tower_decompose(&b, &prime).unwrap();
        assert_eq!(steps.len(), 1);
        let sig = &steps[0].signature;
        assert_eq!(sig.g, b.one());
        assert!(sig.h1.is_zero() && sig.h2.is_zero());
        assert_eq!(sig.q, 0);
    }

    #[test]
    fn tower_of_identity_is_empty() {
        let b = ch2();
        let full = Substructure::full(&b).unwrap();
        assert!(tower_decompose(&b, &full).unwrap().is_empty());
    }

    #[test]
    fn tower_from_prime_of_v_has_two_steps() {
        // x0 < y1, y2 isolated, labels 0,1,1.
        let p = Poset::new(&["x0", "y1", "y2"], &[("x0", "y1")]).unwrap();
        let b = ScaledBase::new(
            p,
            1,
            &BTreeMap::from([("x0".into(), 0), ("y1".into(), 1), ("y2".into(), 1)]),
        )
        .unwrap();
        let prime = b.prime_substructure().unwrap();
        let steps = tower_decompose(&b, &prime).unwrap();
        assert_eq!(steps.len(), 3 - prime.irreducibles().len());
    }
}
