use crate::canon::{canonical_labeled, Canonical};
use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::error::{Error, Result};
use crate::ingest;
use crate::poset::{bit, iter_bits, Mask, Poset};
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
struct ScaledCore {
    poset: Poset,
    d: u32,
    label: Vec<u32>,
}

/// A dimension-labeled poset presenting a finite d-subscaled lattice: the
/// lattice is the family of decreasing sets, the label of a join-irreducible
/// gives the sc-dimension of its downset.
///
/// Labels are strictly increasing along the order and bounded by `d`.
#[derive(Debug, Clone)]
pub struct ScaledBase {
    core: Arc<ScaledCore>,
}

impl PartialEq for ScaledBase {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.core, &other.core) || self.core == other.core
    }
}
impl Eq for ScaledBase {}

impl ScaledBase {
    pub fn new(poset: Poset, d: u32, dimlabel: &BTreeMap<String, u32>) -> Result<ScaledBase> {
        let mut label = vec![0u32; poset.len()];
        for (name, &v) in dimlabel {
            let i = poset.index_of(name)?;
            label[i] = v;
        }
        for (i, name) in poset.names().iter().enumerate() {
            if !dimlabel.contains_key(name) {
                return Err(Error::IllFormed(format!("element {name:?} has no dimlabel")));
            }
            if label[i] > d {
                return Err(Error::IllFormed(format!(
                    "dimlabel {} of {name:?} exceeds d = {d}",
                    label[i]
                )));
            }
        }
        for &(lo, hi) in poset.cover_indices() {
            if label[lo] >= label[hi] {
                return Err(Error::IllFormed(format!(
                    "dimlabel must be strictly increasing: {} < {} but labels are {} and {}",
                    poset.name(lo),
                    poset.name(hi),
                    label[lo],
                    label[hi]
                )));
            }
        }
        Ok(ScaledBase {
            core: Arc::new(ScaledCore { poset, d, label }),
        })
    }

    /// The trivial base: empty poset, bottom equals top.
    pub fn trivial(d: u32) -> ScaledBase {
        ScaledBase::new(Poset::empty(), d, &BTreeMap::new()).expect("trivial base")
    }

    /// Single-point base with the given label.
    pub fn point(d: u32, label: u32) -> Result<ScaledBase> {
        let p = Poset::new::<&str>(&["x0"], &[])?;
        ScaledBase::new(p, d, &BTreeMap::from([("x0".to_string(), label)]))
    }

    pub fn poset(&self) -> &Poset {
        &self.core.poset
    }

    pub fn d(&self) -> u32 {
        self.core.d
    }

    pub fn label(&self, i: usize) -> u32 {
        self.core.label[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.core.label
    }

    pub fn zero(&self) -> LatticeElement {
        crate::element::zero(self.poset())
    }

    pub fn one(&self) -> LatticeElement {
        crate::element::one(self.poset())
    }

    pub fn element<S: AsRef<str>>(&self, antichain: &[S]) -> Result<LatticeElement> {
        crate::element::element(self.poset(), antichain)
    }

    pub fn all_elements(&self) -> Result<Vec<LatticeElement>> {
        crate::element::all_elements(self.poset())
    }

    pub(crate) fn elem(&self, m: Mask) -> LatticeElement {
        LatticeElement::from_mask(self.poset(), m)
    }

    pub(crate) fn check_elem(&self, e: &LatticeElement) -> Result<Mask> {
        if *e.poset() == *self.poset() {
            Ok(e.mask())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    /// `C^k`: downset of the components of `m` labeled `k`.
    pub(crate) fn ck_m(&self, m: Mask, k: u32) -> Mask {
        let comps = self.poset().maximals_mask(m);
        let picked = iter_bits(comps)
            .filter(|&i| self.core.label[i] == k)
            .fold(0, |acc, i| acc | bit(i));
        self.poset().downset_closure(picked)
    }

    pub(crate) fn scdim_m(&self, m: Mask) -> Dim {
        iter_bits(m)
            .map(|i| Dim::Finite(self.core.label[i]))
            .max()
            .unwrap_or(Dim::NegInf)
    }

    pub(crate) fn is_pure_m(&self, m: Mask, k: u32) -> bool {
        self.ck_m(m, k) == m
    }

    /// sc-pure of its own sc-dimension (every join-irreducible is).
    pub(crate) fn is_sc_pure_m(&self, m: Mask) -> bool {
        match self.scdim_m(m) {
            Dim::NegInf => true,
            Dim::Finite(k) => self.is_pure_m(m, k),
        }
    }

    pub fn ck(&self, a: &LatticeElement, k: u32) -> Result<LatticeElement> {
        let m = self.check_elem(a)?;
        Ok(self.elem(self.ck_m(m, k)))
    }

    pub fn scdim(&self, a: &LatticeElement) -> Result<Dim> {
        Ok(self.scdim_m(self.check_elem(a)?))
    }

    pub fn is_k_sc_pure(&self, a: &LatticeElement, k: u32) -> Result<bool> {
        Ok(self.is_pure_m(self.check_elem(a)?, k))
    }

    /// Closure of the given seeds under join, meet, difference and all `C^k`,
    /// i.e. the least substructure containing them. Sorted by mask.
    pub(crate) fn sc_closure(&self, seeds: &[Mask]) -> Vec<Mask> {
        let p = self.poset();
        let mut set: std::collections::BTreeSet<Mask> = seeds.iter().copied().collect();
        set.insert(0);
        set.insert(p.full_mask());
        loop {
            let snapshot: Vec<Mask> = set.iter().copied().collect();
            let before = set.len();
            for &a in &snapshot {
                for k in 0..=self.core.d {
                    set.insert(self.ck_m(a, k));
                }
                for &b in &snapshot {
                    set.insert(a | b);
                    set.insert(a & b);
                    set.insert(p.diff_m(a, b));
                }
            }
            if set.len() == before {
                break;
            }
        }
        set.into_iter().collect()
    }

    /// The substructure generated by the empty set (closure of bottom and top).
    pub fn prime_substructure(&self) -> Result<Substructure> {
        let family = self.sc_closure(&[]);
        Substructure::from_family(self, family)
    }

    /// Complete invariant for label-preserving isomorphism.
    pub fn canonical_form(&self) -> Vec<u8> {
        self.canonical_with_marks(&[]).bytes
    }

    pub(crate) fn canonical_with_marks(&self, marks: &[Mask]) -> Canonical {
        let p = self.poset();
        let below: Vec<Mask> = (0..p.len()).map(|i| p.below_mask(i)).collect();
        let colors: Vec<Vec<u32>> = (0..p.len()).map(|i| vec![self.core.label[i]]).collect();
        canonical_labeled(&below, &colors, marks)
    }

    /// Canonical form with a tuple of elements pinned: two bases yield equal
    /// bytes exactly when an isomorphism matches the pinned tuples
    /// positionwise. Pinning every element of a common substructure makes
    /// this an isomorphism-over-the-substructure test.
    pub fn canonical_form_with_pinned(&self, pinned: &[LatticeElement]) -> Result<Vec<u8>> {
        let marks: Vec<Mask> = pinned
            .iter()
            .map(|e| self.check_elem(e))
            .collect::<Result<_>>()?;
        Ok(self.canonical_with_marks(&marks).bytes)
    }

    pub fn is_isomorphic(&self, other: &ScaledBase) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    pub fn check_axioms(&self, mode: CheckMode) -> Result<AxiomReport> {
        crate::axioms::check_axioms(self, mode)
    }
}

/// A family of elements of an ambient base, closed under all operations,
/// together with its own abstract presentation.
pub struct Substructure {
    pub ambient: ScaledBase,
    /// Member elements, sorted by mask.
    pub family: Vec<Mask>,
    pub induced: InducedBase,
}

impl Substructure {
    pub(crate) fn from_family(base: &ScaledBase, family: Vec<Mask>) -> Result<Substructure> {
        let induced = InducedBase::derive(base, &family)?;
        Ok(Substructure {
            ambient: base.clone(),
            family,
            induced,
        })
    }

    /// The substructure generated by the given elements.
    pub fn closure(base: &ScaledBase, generators: &[LatticeElement]) -> Result<Substructure> {
        let seeds: Vec<Mask> = generators
            .iter()
            .map(|e| base.check_elem(e))
            .collect::<Result<_>>()?;
        Substructure::from_family(base, base.sc_closure(&seeds))
    }

    /// Wraps an element family after verifying it is closed under all
    /// operations and contains bottom and top.
    pub fn verified(base: &ScaledBase, elements: &[LatticeElement]) -> Result<Substructure> {
        let mut family: Vec<Mask> = elements
            .iter()
            .map(|e| base.check_elem(e))
            .collect::<Result<_>>()?;
        family.sort_unstable();
        family.dedup();
        let has = |m: Mask| family.binary_search(&m).is_ok();
        if !has(0) || !has(base.poset().full_mask()) {
            return Err(Error::Argument(
                "substructure must contain bottom and top".into(),
            ));
        }
        for &a in &family {
            for k in 0..=base.d() {
                if !has(base.ck_m(a, k)) {
                    return Err(Error::Argument(format!(
                        "family is not closed under C^{k}"
                    )));
                }
            }
            for &b in &family {
                for (m, op) in [
                    (a | b, "join"),
                    (a & b, "meet"),
                    (base.poset().diff_m(a, b), "difference"),
                ] {
                    if !has(m) {
                        return Err(Error::Argument(format!(
                            "family is not closed under {op}"
                        )));
                    }
                }
            }
        }
        Substructure::from_family(base, family)
    }

    /// The whole downset lattice as a substructure of itself.
    pub fn full(base: &ScaledBase) -> Result<Substructure> {
        Substructure::from_family(base, base.poset().all_downsets()?)
    }

    pub fn elements(&self) -> Vec<LatticeElement> {
        self.family.iter().map(|&m| self.ambient.elem(m)).collect()
    }

    pub fn contains(&self, e: &LatticeElement) -> Result<bool> {
        let m = self.ambient.check_elem(e)?;
        Ok(self.contains_m(m))
    }

    pub(crate) fn contains_m(&self, m: Mask) -> bool {
        self.family.binary_search(&m).is_ok()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Join-irreducible members: non-bottom and not the join of the strictly
    /// smaller members.
    pub(crate) fn irreducible_masks(&self) -> Vec<Mask> {
        irreducibles_of_family(&self.family)
    }

    pub fn irreducibles(&self) -> Vec<LatticeElement> {
        self.irreducible_masks()
            .into_iter()
            .map(|m| self.ambient.elem(m))
            .collect()
    }

    /// Join of the members strictly below `g`.
    pub(crate) fn pred_m(&self, g: Mask) -> Mask {
        self.family
            .iter()
            .copied()
            .filter(|&f| f != g && f & !g == 0)
            .fold(0, |acc, f| acc | f)
    }

    /// Least member above `x` (the family contains top, so this is total).
    pub(crate) fn g_of_m(&self, x: Mask) -> Mask {
        self.family
            .iter()
            .copied()
            .filter(|&f| x & !f == 0)
            .fold(self.ambient.poset().full_mask(), |acc, f| acc & f)
    }

    /// Re-expresses a member in the induced presentation.
    pub fn project(&self, e: &LatticeElement) -> Result<LatticeElement> {
        let m = self.ambient.check_elem(e)?;
        if !self.contains_m(m) {
            return Err(Error::Argument(
                "element does not belong to the substructure".into(),
            ));
        }
        Ok(self.induced.base.elem(self.induced.from_ambient(m)))
    }

    /// Interprets an element of the induced presentation back in the ambient
    /// base.
    pub fn lift(&self, e: &LatticeElement) -> Result<LatticeElement> {
        let m = self.induced.base.check_elem(e)?;
        Ok(self.ambient.elem(self.induced.to_ambient(m)))
    }
}

/// Join-irreducible members of a family closed under join: non-bottom
/// members that are not the join of the strictly smaller members.
pub(crate) fn irreducibles_of_family(family: &[Mask]) -> Vec<Mask> {
    family
        .iter()
        .copied()
        .filter(|&e| {
            e != 0 && {
                let below_join = family
                    .iter()
                    .copied()
                    .filter(|&f| f != e && f & !e == 0)
                    .fold(0, |acc, f| acc | f);
                below_join != e
            }
        })
        .collect()
}

/// Abstract re-presentation of a substructure: the poset of its own
/// join-irreducibles (via table ingestion), labeled by ambient sc-dimension.
pub struct InducedBase {
    pub base: ScaledBase,
    /// Induced point -> ambient element.
    point_elem: Vec<Mask>,
}

impl InducedBase {
    fn derive(ambient: &ScaledBase, family: &[Mask]) -> Result<InducedBase> {
        let (tables, masks) = ingest::tabulate_family_masks(ambient.poset(), family)?;
        let by_name: BTreeMap<&str, Mask> = tables
            .elements
            .iter()
            .map(String::as_str)
            .zip(masks.iter().copied())
            .collect();
        let poset = ingest::recover_poset(&tables)?;
        let mut point_elem = Vec::with_capacity(poset.len());
        let mut dimlabel = BTreeMap::new();
        for name in poset.names() {
            let m = by_name[name.as_str()];
            let Dim::Finite(l) = ambient.scdim_m(m) else {
                return Err(Error::IllFormed("irreducible with bottom dimension".into()));
            };
            point_elem.push(m);
            dimlabel.insert(name.clone(), l);
        }
        let base = ScaledBase::new(poset, ambient.d(), &dimlabel)?;
        Ok(InducedBase { base, point_elem })
    }

    /// Ambient element denoted by an induced element.
    pub(crate) fn to_ambient(&self, induced: Mask) -> Mask {
        iter_bits(induced).fold(0, |acc, p| acc | self.point_elem[p])
    }

    /// Induced element denoting an ambient member of the family.
    pub(crate) fn from_ambient(&self, e: Mask) -> Mask {
        self.point_elem
            .iter()
            .enumerate()
            .filter(|&(_, &pe)| pe & !e == 0)
            .fold(0, |acc, (p, _)| acc | bit(p))
    }

    pub(crate) fn point_elems(&self) -> &[Mask] {
        &self.point_elem
    }
}

/// How exhaustively `check_axioms` sweeps element tuples.
#[derive(Debug, Clone, Copy)]
pub enum CheckMode {
    /// Exhaustive up to 8 join-irreducibles, seeded sampling beyond.
    Auto { seed: u64 },
    Exhaustive,
    Sample { tuples: u32, seed: u64 },
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomWitness {
    /// Element variables, as maximal antichains.
    pub elements: Vec<(String, Vec<String>)>,
    /// Index variables (k, i, j, ...).
    pub indices: Vec<(String, i64)>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomVerdict {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

#[derive(Debug, serde::Serialize)]
pub struct AxiomReport {
    pub verdicts: Vec<AxiomVerdict>,
    /// Whether the sc-dimension agrees with chain dimension everywhere.
    pub scaled: bool,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_tuples: Option<u32>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

pub(crate) struct TupleSweep {
    pub elems: Vec<Mask>,
    pub exhaustive: bool,
    pub tuples: u32,
    pub seed: u64,
}

impl TupleSweep {
    pub fn new(base: &ScaledBase, mode: CheckMode) -> Result<TupleSweep> {
        let elems = base.poset().all_downsets()?;
        let (exhaustive, tuples, seed) = match mode {
            CheckMode::Exhaustive => (true, 0, 0),
            CheckMode::Sample { tuples, seed } => (false, tuples, seed),
            CheckMode::Auto { seed } => {
                if base.poset().len() <= 8 {
                    (true, 0, 0)
                } else {
                    (false, 4096, seed)
                }
            }
        };
        Ok(TupleSweep {
            elems,
            exhaustive,
            tuples,
            seed,
        })
    }

    /// Runs `check` over element tuples of the given arity. `check` returns
    /// `Some(indices)` to report a failure; the first failing tuple wins.
    pub fn run<F>(&self, arity: usize, check: F) -> Option<(Vec<Mask>, Vec<(String, i64)>)>
    where
        F: Fn(&[Mask]) -> Option<Vec<(String, i64)>>,
    {
        if self.exhaustive {
            let mut tuple = vec![0 as Mask; arity];
            self.run_rec(arity, 0, &mut tuple, &check)
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
            let mut tuple = vec![0 as Mask; arity];
            for _ in 0..self.tuples {
                for slot in tuple.iter_mut() {
                    *slot = self.elems[rng.gen_range(0..self.elems.len())];
                }
                if let Some(idx) = check(&tuple) {
                    return Some((tuple, idx));
                }
            }
            None
        }
    }

    fn run_rec<F>(
        &self,
        arity: usize,
        at: usize,
        tuple: &mut Vec<Mask>,
        check: &F,
    ) -> Option<(Vec<Mask>, Vec<(String, i64)>)>
    where
        F: Fn(&[Mask]) -> Option<Vec<(String, i64)>>,
    {
        if at == arity {
            return check(tuple).map(|idx| (tuple.clone(), idx));
        }
        for &e in &self.elems {
            tuple[at] = e;
            if let Some(w) = self.run_rec(arity, at + 1, tuple, check) {
                return Some(w);
            }
        }
        None
    }
}

pub(crate) fn witness_elements(base: &ScaledBase, names: &[&str], tuple: &[Mask]) -> AxiomWitness {
    AxiomWitness {
        elements: names
            .iter()
            .zip(tuple)
            .map(|(n, &m)| {
                let maxs = base.poset().maximals_mask(m);
                (n.to_string(), base.poset().names_from_mask(maxs))
            })
            .collect(),
        indices: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ch2() -> ScaledBase {
        let p = Poset::new(&["x0", "x1"], &[("x0", "x1")]).unwrap();
        ScaledBase::new(
            p,
            1,
            &BTreeMap::from([("x0".into(), 0), ("x1".into(), 1)]),
        )
        .unwrap()
    }

    pub(crate) fn lp() -> ScaledBase {
        let p = Poset::new::<&str>(&["y1", "a"], &[]).unwrap();
        ScaledBase::new(p, 1, &BTreeMap::from([("y1".into(), 1), ("a".into(), 0)])).unwrap()
    }

    #[test]
    fn rejects_non_monotone_labels() {
        let p = Poset::new(&["x0", "x1"], &[("x0", "x1")]).unwrap();
        let err = ScaledBase::new(
            p,
            1,
            &BTreeMap::from([("x0".into(), 1), ("x1".into(), 1)]),
        );
        assert!(matches!(err, Err(Error::IllFormed(_))));
    }

    #[test]
    fn ck_examples() {
        let b = ch2();
        let one = b.one();
        assert_eq!(b.ck(&one, 1).unwrap(), one);
        assert!(b.ck(&one, 0).unwrap().is_zero());
        assert!(b.ck(&b.zero(), 7).unwrap().is_zero());

        let lp = lp();
        assert_eq!(
            b.ck(&b.zero(), 0).unwrap(),
            b.zero()
        );
        assert_eq!(lp.ck(&lp.one(), 0).unwrap(), lp.element(&["a"]).unwrap());
        assert_eq!(lp.ck(&lp.one(), 1).unwrap(), lp.element(&["y1"]).unwrap());
        // k beyond d is bottom, not an error.
        assert!(lp.ck(&lp.one(), 5).unwrap().is_zero());
    }

    #[test]
    fn scdim_examples() {
        let b = ch2();
        assert_eq!(b.scdim(&b.one()).unwrap(), Dim::Finite(1));
        assert_eq!(b.scdim(&b.element(&["x0"]).unwrap()).unwrap(), Dim::Finite(0));
        assert_eq!(b.scdim(&b.zero()).unwrap(), Dim::NegInf);
        // A subscaled, non-scaled lattice: one point labeled 1.
        let pt = ScaledBase::point(1, 1).unwrap();
        assert_eq!(pt.scdim(&pt.one()).unwrap(), Dim::Finite(1));
        assert_eq!(pt.one().dim(), Dim::Finite(0));
    }

    #[test]
    fn purity_examples() {
        let b = ch2();
        assert!(b.is_k_sc_pure(&b.one(), 1).unwrap());
        for k in 0..4 {
            assert!(b.is_k_sc_pure(&b.zero(), k).unwrap());
        }
        let lp = lp();
        assert!(!lp.is_k_sc_pure(&lp.one(), 1).unwrap());
    }

    #[test]
    fn prime_substructure_examples() {
        let b = ch2();
        let prime = b.prime_substructure().unwrap();
        assert_eq!(prime.len(), 2);

        let lp = lp();
        let prime = lp.prime_substructure().unwrap();
        assert_eq!(prime.len(), 4);
        assert_eq!(prime.induced.base.poset().len(), 2);

        let t = ScaledBase::trivial(0);
        let prime = t.prime_substructure().unwrap();
        assert_eq!(prime.len(), 1);
    }

    #[test]
    fn canonical_form_examples() {
        let b = ch2();
        let renamed = {
            let p = Poset::new(&["b", "a"], &[("a", "b")]).unwrap();
            ScaledBase::new(p, 1, &BTreeMap::from([("a".into(), 0), ("b".into(), 1)])).unwrap()
        };
        assert!(b.is_isomorphic(&renamed));
        let ac2 = {
            let p = Poset::new::<&str>(&["a1", "a2"], &[]).unwrap();
            ScaledBase::new(p, 1, &BTreeMap::from([("a1".into(), 0), ("a2".into(), 0)])).unwrap()
        };
        assert!(!b.is_isomorphic(&ac2));
        assert!(!ScaledBase::point(2, 1)
            .unwrap()
            .is_isomorphic(&ScaledBase::point(2, 0).unwrap()));
    }
}
