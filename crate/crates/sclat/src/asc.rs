//! Atom-counted structure on a base: atom weights, the derived counting
//! function and predicates, axiom verification, standardness, and the
//! prime-substructure invariant classifying completions.

use crate::canon::canonical_labeled;
use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::embed::{EmbedReport, ScModel};
use crate::error::{Error, Result};
use crate::poset::{bit, iter_bits, Mask};
use crate::scaled::{
    witness_elements, AxiomVerdict, CheckMode, ScaledBase, Substructure, TupleSweep,
};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
struct AscCore {
    base: ScaledBase,
    /// Per-point atom count; positive only on minimal points labeled 0.
    /// Zero encodes "no finite count".
    weight: Vec<u32>,
}

/// A base whose atoms carry counting weights.
#[derive(Debug, Clone)]
pub struct AscBase {
    core: Arc<AscCore>,
}

impl PartialEq for AscBase {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.core, &other.core) || self.core == other.core
    }
}
impl Eq for AscBase {}

impl AscBase {
    pub fn new(base: ScaledBase, atom_asc: &BTreeMap<String, u32>) -> Result<AscBase> {
        let p = base.poset();
        let mut weight = vec![0u32; p.len()];
        for (name, &w) in atom_asc {
            let i = p.index_of(name)?;
            if p.below_mask(i) != bit(i) {
                return Err(Error::IllFormed(format!(
                    "asc weight on non-minimal element {name:?}"
                )));
            }
            if w > 0 && base.label(i) != 0 {
                return Err(Error::IllFormed(format!(
                    "positive asc weight on {name:?} requires dimlabel 0, found {}",
                    base.label(i)
                )));
            }
            weight[i] = w;
        }
        Ok(AscBase {
            core: Arc::new(AscCore { base, weight }),
        })
    }

    /// All weights zero (every atom marked as unbounded).
    pub fn from_scaled(base: ScaledBase) -> AscBase {
        AscBase {
            core: Arc::new(AscCore {
                weight: vec![0; base.poset().len()],
                base,
            }),
        }
    }

    pub fn base(&self) -> &ScaledBase {
        &self.core.base
    }

    pub fn weights(&self) -> &[u32] {
        &self.core.weight
    }

    pub fn weight_map(&self) -> BTreeMap<String, u32> {
        let p = self.core.base.poset();
        (0..p.len())
            .filter(|&i| p.below_mask(i) == bit(i))
            .map(|i| (p.name(i).to_string(), self.core.weight[i]))
            .collect()
    }

    /// The derived count: the weight sum over the components when the
    /// element has sc-dimension 0 and all its atoms carry positive weight,
    /// and 0 otherwise (including bottom, the empty join).
    pub(crate) fn asc_m(&self, m: Mask) -> u32 {
        let base = &self.core.base;
        if base.scdim_m(m) != Dim::Finite(0) {
            return 0;
        }
        let comps = base.poset().maximals_mask(m);
        let mut sum = 0u32;
        for i in iter_bits(comps) {
            if self.core.weight[i] == 0 {
                return 0;
            }
            sum += self.core.weight[i];
        }
        sum
    }

    pub fn asc(&self, e: &LatticeElement) -> Result<u32> {
        Ok(self.asc_m(self.core.base.check_elem(e)?))
    }

    /// `At_k`, for k >= 1.
    pub fn at_k(&self, e: &LatticeElement, k: u32) -> Result<bool> {
        if k == 0 {
            return Err(Error::Argument("At indices start at 1".into()));
        }
        Ok(self.asc(e)? == k)
    }

    /// Every element of sc-dimension 0 carries a positive count.
    pub fn is_standard(&self) -> bool {
        let p = self.core.base.poset();
        (0..p.len()).all(|i| self.core.base.label(i) != 0 || self.core.weight[i] > 0)
    }

    /// Complete invariant for weight- and label-preserving isomorphism.
    pub fn canonical_form(&self) -> Vec<u8> {
        let base = &self.core.base;
        let p = base.poset();
        let below: Vec<Mask> = (0..p.len()).map(|i| p.below_mask(i)).collect();
        let colors: Vec<Vec<u32>> = (0..p.len())
            .map(|i| vec![base.label(i), self.core.weight[i]])
            .collect();
        canonical_labeled(&below, &colors, &[]).bytes
    }

    pub fn is_isomorphic(&self, other: &AscBase) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// The weighted prime substructure, re-presented abstractly.
    pub fn prime_substructure(&self) -> Result<(Substructure, AscBase)> {
        let sub = self.core.base.prime_substructure()?;
        let induced = asc_of_induced(self, &sub)?;
        Ok((sub, induced))
    }

    /// Canonical bytes of the weighted prime substructure. Two bases have
    /// equal invariants exactly when their prime substructures are
    /// isomorphic as weighted bases.
    pub fn completion_invariant(&self) -> Result<Vec<u8>> {
        Ok(self.prime_substructure()?.1.canonical_form())
    }

    pub fn check_asc_axioms(&self, mode: CheckMode) -> Result<AscReport> {
        check_asc_axioms(self, mode)
    }
}

/// Restricts the weights to an induced substructure presentation: each
/// induced atom inherits the derived count of the ambient element it names.
pub(crate) fn asc_of_induced(asc: &AscBase, sub: &Substructure) -> Result<AscBase> {
    let ind = &sub.induced;
    let mut weights = BTreeMap::new();
    let p = ind.base.poset();
    for i in 0..p.len() {
        if p.below_mask(i) == bit(i) {
            let ambient_elem = ind.point_elems()[i];
            weights.insert(p.name(i).to_string(), asc.asc_m(ambient_elem));
        }
    }
    AscBase::new(ind.base.clone(), &weights)
}

/// Equality of completion invariants; the classifying criterion for
/// countable standard models. Refuses non-standard inputs.
pub fn pre_algebraic_equiv(b1: &AscBase, b2: &AscBase) -> Result<bool> {
    if !b1.is_standard() || !b2.is_standard() {
        return Err(Error::Refused(
            "pre-algebraic comparison requires standard bases (every sc-dimension-0 \
             element a finite join of counted atoms)"
                .into(),
        ));
    }
    Ok(b1.completion_invariant()? == b2.completion_invariant()?)
}

#[derive(Debug, serde::Serialize)]
pub struct AscReport {
    pub verdicts: Vec<AxiomVerdict>,
    pub standard: bool,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_tuples: Option<u32>,
}

impl AscReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

fn check_asc_axioms(asc: &AscBase, mode: CheckMode) -> Result<AscReport> {
    let base = asc.base();
    let sweep = TupleSweep::new(base, mode)?;
    let max_k: u32 = asc.weights().iter().sum::<u32>() + 1;
    let mut verdicts = Vec::new();
    let mut push = |name: &str, vars: &[&str], found: Option<(Vec<Mask>, Vec<(String, i64)>)>| {
        let (pass, witness) = match found {
            None => (true, None),
            Some((tuple, indices)) => {
                let mut w = witness_elements(base, vars, &tuple);
                w.indices = indices;
                (false, Some(w))
            }
        };
        verdicts.push(AxiomVerdict {
            name: name.to_string(),
            pass,
            witness,
        });
    };

    // At_k classes are pairwise disjoint.
    push(
        "ASC1",
        &["a"],
        sweep.run(1, |t| {
            let hits = (1..=max_k).filter(|&k| asc.asc_m(t[0]) == k).count();
            (hits > 1).then(Vec::new)
        }),
    );
    // A counted element has sc-dimension 0 and at most 2^k elements below.
    push(
        "ASC2",
        &["a"],
        sweep.run(1, |t| {
            let a = t[0];
            let k = asc.asc_m(a);
            if k == 0 {
                return None;
            }
            if base.scdim_m(a) != Dim::Finite(0) {
                return Some(vec![("k".to_string(), k as i64)]);
            }
            let below = sweep.elems.iter().filter(|&&b| b & !a == 0).count();
            (below > 1usize << k.min(32)).then(|| vec![("k".to_string(), k as i64)])
        }),
    );
    // Counting is additive over disjoint non-trivial decompositions.
    push(
        "ASC3",
        &["a", "a1", "a2"],
        sweep.run(3, |t| {
            let (a, a1, a2) = (t[0], t[1], t[2]);
            if a1 | a2 != a || a1 & a2 != 0 || a1 == 0 || a2 == 0 {
                return None;
            }
            (1..=max_k)
                .find(|&k| {
                    let lhs = asc.asc_m(a) == k;
                    let rhs = (1..k).any(|l| asc.asc_m(a1) == l && asc.asc_m(a2) == k - l);
                    lhs != rhs
                })
                .map(|k| vec![("k".to_string(), k as i64)])
        }),
    );
    let standard_witness = sweep.run(1, |t| {
        (base.scdim_m(t[0]) == Dim::Finite(0) && asc.asc_m(t[0]) == 0).then(Vec::new)
    });
    let standard = standard_witness.is_none();
    // Standardness is reported, not required; the witness names an
    // uncounted sc-dimension-0 element.
    verdicts.push(AxiomVerdict {
        name: "standard".to_string(),
        pass: true,
        witness: standard_witness.map(|(tuple, idx)| {
            let mut w = witness_elements(base, &["a"], &tuple);
            w.indices = idx;
            w
        }),
    });

    Ok(AscReport {
        verdicts,
        standard,
        exhaustive: sweep.exhaustive,
        sampled_tuples: (!sweep.exhaustive).then_some(sweep.tuples),
    })
}

/// A model additionally carrying the counting function.
pub trait AscModel: ScModel {
    fn asc_of(&self, e: &Self::Elem) -> u32;
}

impl ScModel for AscBase {
    type Elem = LatticeElement;

    fn zero(&self) -> LatticeElement {
        self.base().zero()
    }
    fn one(&self) -> LatticeElement {
        self.base().one()
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
        self.base().ck(a, k).expect("same base")
    }
    fn scdim(&self, a: &LatticeElement) -> Dim {
        self.base().scdim(a).expect("same base")
    }
}

impl AscModel for AscBase {
    fn asc_of(&self, e: &LatticeElement) -> u32 {
        self.asc(e).expect("same base")
    }
}

/// Embedding check in the counted language: the plain check plus
/// preservation of the count on every atom of the source.
pub fn embed_check_asc<M: AscModel>(
    source: &AscBase,
    target: &M,
    map: &[(LatticeElement, M::Elem)],
) -> Result<EmbedReport> {
    let mut report = crate::embed::embed_check(source.base(), target, map)?;
    let p = source.base().poset();
    for i in 0..p.len() {
        if p.below_mask(i) != bit(i) {
            continue;
        }
        let atom = source.base().elem(bit(i));
        let image = map
            .iter()
            .find(|(e, _)| *e == atom)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::Argument("map must be defined on every element".into()))?;
        let want = source.asc_m(bit(i));
        let got = target.asc_of(image);
        if want != got {
            report.embedding = false;
            report.direct_ok = false;
            report
                .failures
                .push(format!("atom {} has count {want} but its image has {got}", p.name(i)));
        }
    }
    Ok(report)
}
