//! Embedding verification between a finite base and any model carrying the
//! full operation set (another base, or the linear geometry).

use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::error::{Error, Result};
use crate::scaled::ScaledBase;

/// A structure with the scaled-lattice operation set. Elements are owned
/// values; implementations panic on foreign elements (the checkers only feed
/// elements produced by the same model).
pub trait ScModel {
    type Elem: Clone + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn diff(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn ck(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    fn scdim(&self, a: &Self::Elem) -> Dim;

    fn is_sc_pure(&self, a: &Self::Elem) -> bool {
        match self.scdim(a) {
            Dim::NegInf => true,
            Dim::Finite(k) => self.ck(a, k) == *a,
        }
    }
}

impl ScModel for ScaledBase {
    type Elem = LatticeElement;

    fn zero(&self) -> LatticeElement {
        ScaledBase::zero(self)
    }
    fn one(&self) -> LatticeElement {
        ScaledBase::one(self)
    }
    fn join(&self, a: &LatticeElement, b: &LatticeElement) -> LatticeElement {
        a.join(b).expect("same base")
    }
    fn meet(&self, a: &LatticeElement, b: &LatticeElement) -> LatticeElement {
        a.meet(b).expect("same base")
    }
    fn diff(&self, a: &LatticeElement, b: &LatticeElement) -> LatticeElement {
        a.tc_diff(b).expect("same base")
    }
    fn ck(&self, a: &LatticeElement, k: u32) -> LatticeElement {
        ScaledBase::ck(self, a, k).expect("same base")
    }
    fn scdim(&self, a: &LatticeElement) -> Dim {
        ScaledBase::scdim(self, a).expect("same base")
    }
}

#[derive(Debug, serde::Serialize)]
pub struct EmbedReport {
    /// Verdict: the map commutes with every operation and is injective.
    pub embedding: bool,
    /// Direct route: injectivity plus commutation with all operations.
    pub direct_ok: bool,
    /// Criterion route: lattice embedding sending join-irreducibles to
    /// sc-pure images of equal sc-dimension.
    pub criterion_ok: bool,
    /// The two routes must agree; a discrepancy is an internal failure.
    pub consistent: bool,
    pub failures: Vec<String>,
}

/// Verifies a candidate embedding both by the direct definition and by the
/// purity criterion, reporting any discrepancy between the two routes.
/// The map must be given on every element of the source lattice.
pub fn embed_check<M: ScModel>(
    source: &ScaledBase,
    target: &M,
    map: &[(LatticeElement, M::Elem)],
) -> Result<EmbedReport> {
    let all = source.all_elements()?;
    let mut images: Vec<Option<M::Elem>> = vec![None; all.len()];
    let pos_of = |e: &LatticeElement| -> Result<usize> {
        all.iter()
            .position(|x| x == e)
            .ok_or_else(|| Error::Argument("map contains a foreign element".into()))
    };
    for (e, v) in map {
        images[pos_of(e)?] = Some(v.clone());
    }
    let images: Vec<M::Elem> = images
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Argument("map must be defined on every element".into()))?;
    let img = |e: &LatticeElement| -> &M::Elem { &images[all.iter().position(|x| x == e).unwrap()] };

    let mut failures = Vec::new();
    let mut fail = |msg: String, flag: &mut bool| {
        *flag = false;
        if failures.len() < 16 {
            failures.push(msg);
        }
    };

    let mut injective = true;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            if images[i] == images[j] {
                fail(
                    format!(
                        "not injective: {:?} and {:?} share an image",
                        all[i].maximals(),
                        all[j].maximals()
                    ),
                    &mut injective,
                );
            }
        }
    }

    let mut lattice_ok = injective;
    if *img(&source.zero()) != target.zero() {
        fail("bottom is not preserved".into(), &mut lattice_ok);
    }
    if *img(&source.one()) != target.one() {
        fail("top is not preserved".into(), &mut lattice_ok);
    }
    let mut ops_ok = true;
    for a in &all {
        for b in &all {
            let j = source.join(a, b);
            if target.join(img(a), img(b)) != *img(&j) {
                fail(format!("join fails at {:?}, {:?}", a.maximals(), b.maximals()), &mut lattice_ok);
            }
            let m = source.meet(a, b);
            if target.meet(img(a), img(b)) != *img(&m) {
                fail(format!("meet fails at {:?}, {:?}", a.maximals(), b.maximals()), &mut lattice_ok);
            }
            let d = source.diff(a, b);
            if target.diff(img(a), img(b)) != *img(&d) {
                fail(
                    format!("difference fails at {:?}, {:?}", a.maximals(), b.maximals()),
                    &mut ops_ok,
                );
            }
        }
        for k in 0..=source.d() + 1 {
            let c = ScModel::ck(source, a, k);
            if target.ck(img(a), k) != *img(&c) {
                fail(format!("C^{k} fails at {:?}", a.maximals()), &mut ops_ok);
            }
        }
    }
    let direct_ok = lattice_ok && ops_ok;

    let mut purity_ok = true;
    for i in 0..source.poset().len() {
        let irr = source.elem(source.poset().below_mask(i));
        let image = img(&irr);
        if !target.is_sc_pure(image) {
            fail(
                format!("image of irreducible {:?} is not sc-pure", irr.maximals()),
                &mut purity_ok,
            );
        }
        if target.scdim(image) != Dim::Finite(source.label(i)) {
            fail(
                format!(
                    "image of irreducible {:?} has sc-dimension {} instead of {}",
                    irr.maximals(),
                    target.scdim(image),
                    source.label(i)
                ),
                &mut purity_ok,
            );
        }
    }
    let criterion_ok = lattice_ok && purity_ok;

    let consistent = direct_ok == criterion_ok;
    if !consistent {
        failures.push("internal-consistency failure: direct and criterion routes disagree".into());
    }
    Ok(EmbedReport {
        embedding: direct_ok,
        direct_ok,
        criterion_ok,
        consistent,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use std::collections::BTreeMap;

    fn ch2() -> ScaledBase {
        let p = Poset::new(&["x0", "x1"], &[("x0", "x1")]).unwrap();
        ScaledBase::new(p, 1, &BTreeMap::from([("x0".into(), 0), ("x1".into(), 1)])).unwrap()
    }

    fn lp() -> ScaledBase {
        let p = Poset::new::<&str>(&["y1", "a"], &[]).unwrap();
        ScaledBase::new(p, 1, &BTreeMap::from([("y1".into(), 1), ("a".into(), 0)])).unwrap()
    }

    #[test]
    fn identity_is_an_embedding() {
        let b = ch2();
        let map: Vec<_> = b
            .all_elements()
            .unwrap()
            .into_iter()
            .map(|e| (e.clone(), e))
            .collect();
        let r = embed_check(&b, &b, &map).unwrap();
        assert!(r.embedding && r.consistent && r.criterion_ok);
    }

    #[test]
    fn chain_into_lp_is_not_an_embedding() {
        let src = ch2();
        let tgt = lp();
        let map = vec![
            (src.zero(), tgt.zero()),
            (src.element(&["x0"]).unwrap(), tgt.element(&["a"]).unwrap()),
            (src.one(), tgt.one()),
        ];
        let r = embed_check(&src, &tgt, &map).unwrap();
        assert!(!r.embedding);
        assert!(r.consistent, "both routes must reject: {:?}", r.failures);
        assert!(!r.criterion_ok);
    }

    #[test]
    fn partial_map_is_an_argument_error() {
        let b = ch2();
        let map = vec![(b.zero(), b.zero())];
        assert!(matches!(
            embed_check(&b, &b, &map),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn inclusion_from_apply_signature_verifies() {
        let b = ch2();
        for sig in crate::signature::enumerate_signatures(&b).unwrap() {
            let ext = crate::signature::apply_signature(&b, &sig).unwrap();
            let map: Vec<_> = b
                .all_elements()
                .unwrap()
                .into_iter()
                .map(|e| {
                    let v = ext.map.map_element(&e).unwrap();
                    (e, v)
                })
                .collect();
            let r = embed_check(&b, &ext.map.target, &map).unwrap();
            assert!(r.embedding, "failures: {:?}", r.failures);
        }
    }
}
