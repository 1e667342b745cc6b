//! Exact computational geometry of special linear sets over the rationals:
//! finite unions of axis-parallel affine flats, the independent model every
//! finite base embeds into.

use crate::dim::Dim;
use crate::element::LatticeElement;
use crate::embed::{EmbedReport, ScModel};
use crate::error::{Error, Result};
use crate::ingest;
use crate::poset::{bit, iter_bits, Mask};
use crate::scaled::ScaledBase;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

pub type Rat = BigRational;

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// An axis-parallel affine flat in `Q^m`: free coordinates `axes`, all other
/// coordinates pinned by `basepoint`. Coordinates are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Variety {
    axes: BTreeSet<usize>,
    basepoint: BTreeMap<usize, Rat>,
}

impl Variety {
    pub fn new(ambient: usize, axes: BTreeSet<usize>, basepoint: BTreeMap<usize, Rat>) -> Result<Variety> {
        for &j in &axes {
            if j == 0 || j > ambient {
                return Err(Error::IllFormed(format!("axis {j} outside ambient {ambient}")));
            }
            if basepoint.contains_key(&j) {
                return Err(Error::IllFormed(format!("coordinate {j} is both free and pinned")));
            }
        }
        for &j in basepoint.keys() {
            if j == 0 || j > ambient {
                return Err(Error::IllFormed(format!(
                    "coordinate {j} outside ambient {ambient}"
                )));
            }
        }
        if axes.len() + basepoint.len() != ambient {
            return Err(Error::IllFormed(format!(
                "flat must pin exactly the {ambient} non-axis coordinates"
            )));
        }
        Ok(Variety { axes, basepoint })
    }

    pub fn point(coords: &[Rat]) -> Variety {
        Variety {
            axes: BTreeSet::new(),
            basepoint: coords
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1, v.clone()))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &BTreeSet<usize> {
        &self.axes
    }

    pub fn basepoint(&self) -> &BTreeMap<usize, Rat> {
        &self.basepoint
    }

    /// `self` is a subset of `other`.
    fn subset_of(&self, other: &Variety) -> bool {
        self.axes.is_subset(&other.axes)
            && other
                .basepoint
                .iter()
                .all(|(j, v)| self.basepoint.get(j) == Some(v))
    }

    fn intersect(&self, other: &Variety) -> Option<Variety> {
        let axes: BTreeSet<usize> = self.axes.intersection(&other.axes).copied().collect();
        let mut basepoint = BTreeMap::new();
        for (j, v) in self.basepoint.iter().chain(other.basepoint.iter()) {
            match basepoint.get(j) {
                None => {
                    basepoint.insert(*j, v.clone());
                }
                Some(w) if w == v => {}
                Some(_) => return None,
            }
        }
        Some(Variety { axes, basepoint })
    }

    fn pad_to(&self, old_m: usize, new_m: usize) -> Variety {
        let mut basepoint = self.basepoint.clone();
        for j in (old_m + 1)..=new_m {
            basepoint.insert(j, Rat::zero());
        }
        Variety {
            axes: self.axes.clone(),
            basepoint,
        }
    }
}

/// A finite union of axis-parallel flats, kept as its maximal components in
/// canonical order. Equality of values is equality of point sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpecialLinearSet {
    ambient: usize,
    comps: Vec<Variety>,
}

impl SpecialLinearSet {
    pub fn empty(ambient: usize) -> SpecialLinearSet {
        SpecialLinearSet {
            ambient,
            comps: Vec::new(),
        }
    }

    pub fn from_varieties(ambient: usize, comps: Vec<Variety>) -> Result<SpecialLinearSet> {
        for v in &comps {
            if v.axes.len() + v.basepoint.len() != ambient {
                return Err(Error::IllFormed(format!(
                    "flat does not fit ambient dimension {ambient}"
                )));
            }
        }
        Ok(SpecialLinearSet::canonical(ambient, comps))
    }

    fn canonical(ambient: usize, mut comps: Vec<Variety>) -> SpecialLinearSet {
        comps.sort();
        comps.dedup();
        let keep: Vec<bool> = comps
            .iter()
            .enumerate()
            .map(|(i, v)| {
                !comps
                    .iter()
                    .enumerate()
                    .any(|(j, w)| i != j && v.subset_of(w) && !(w.subset_of(v) && j > i))
            })
            .collect();
        let comps = comps
            .into_iter()
            .zip(keep)
            .filter_map(|(v, k)| k.then_some(v))
            .collect();
        SpecialLinearSet { ambient, comps }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn components(&self) -> &[Variety] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn scdim(&self) -> Dim {
        self.comps
            .iter()
            .map(|v| Dim::Finite(v.dim() as u32))
            .max()
            .unwrap_or(Dim::NegInf)
    }

    fn check_ambient(&self, other: &SpecialLinearSet) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )))
        }
    }

    pub fn join(&self, other: &SpecialLinearSet) -> Result<SpecialLinearSet> {
        self.check_ambient(other)?;
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Ok(SpecialLinearSet::canonical(self.ambient, comps))
    }

    pub fn meet(&self, other: &SpecialLinearSet) -> Result<SpecialLinearSet> {
        self.check_ambient(other)?;
        let mut comps = Vec::new();
        for a in &self.comps {
            for b in &other.comps {
                if let Some(v) = a.intersect(b) {
                    comps.push(v);
                }
            }
        }
        Ok(SpecialLinearSet::canonical(self.ambient, comps))
    }

    /// Topological difference: the components of `self` contained in no
    /// component of `other` (a flat over an infinite field is never a finite
    /// union of proper subflats).
    pub fn diff(&self, other: &SpecialLinearSet) -> Result<SpecialLinearSet> {
        self.check_ambient(other)?;
        let comps: Vec<Variety> = self
            .comps
            .iter()
            .filter(|v| !other.comps.iter().any(|w| v.subset_of(w)))
            .cloned()
            .collect();
        Ok(SpecialLinearSet::canonical(self.ambient, comps))
    }

    /// Union of the dimension-k maximal components.
    pub fn ck(&self, k: u32) -> SpecialLinearSet {
        let comps: Vec<Variety> = self
            .comps
            .iter()
            .filter(|v| v.dim() as u32 == k)
            .cloned()
            .collect();
        SpecialLinearSet {
            ambient: self.ambient,
            comps,
        }
    }

    pub fn leq(&self, other: &SpecialLinearSet) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self
            .comps
            .iter()
            .all(|v| other.comps.iter().any(|w| v.subset_of(w))))
    }

    pub fn contains_point(&self, coords: &[Rat]) -> bool {
        let pt = Variety::point(coords);
        self.comps.iter().any(|w| pt.subset_of(w))
    }

    /// Identifies `Q^m` with `Q^m x {0}^(new-m)`.
    pub fn embed_ambient(&self, new_ambient: usize) -> Result<SpecialLinearSet> {
        if new_ambient < self.ambient {
            return Err(Error::Argument("cannot shrink the ambient space".into()));
        }
        Ok(SpecialLinearSet {
            ambient: new_ambient,
            comps: self
                .comps
                .iter()
                .map(|v| v.pad_to(self.ambient, new_ambient))
                .collect(),
        })
    }

    /// Chain dimension, computed by building and verifying an explicit
    /// maximal chain of subflats inside each component.
    pub fn krull_dim(&self) -> Dim {
        let mut best = Dim::NegInf;
        for v in self.comps.iter() {
            let axes: Vec<usize> = v.axes.iter().copied().collect();
            let mut chain: Vec<Variety> = Vec::new();
            for t in 0..=axes.len() {
                let sub_axes: BTreeSet<usize> = axes[..t].iter().copied().collect();
                let mut bp = v.basepoint.clone();
                for &j in &axes[t..] {
                    bp.insert(j, Rat::zero());
                }
                chain.push(Variety {
                    axes: sub_axes,
                    basepoint: bp,
                });
            }
            for w in chain.windows(2) {
                assert!(w[0].subset_of(&w[1]) && w[0] != w[1], "chain must be strict");
            }
            best = best.max(Dim::Finite((chain.len() - 1) as u32));
        }
        best
    }
}

/// Builds a pure-dimension-`n` set `A` in the ambient extended by `n` fresh
/// coordinates with `A /\ B = C`, for `C <= B`. The empty-`C` branch returns
/// a single flat pinned at 1 on a fresh off-axis coordinate (or a fresh
/// diagonal point when `n = 0`).
pub fn wedge_over(
    c: &SpecialLinearSet,
    b: &SpecialLinearSet,
    n: u32,
) -> Result<SpecialLinearSet> {
    c.check_ambient(b)?;
    if !c.leq(b)? {
        return Err(Error::Argument("C must be contained in B".into()));
    }
    if Dim::Finite(n) < c.scdim() {
        return Err(Error::Argument(format!(
            "target dimension {n} is below dim C = {}",
            c.scdim()
        )));
    }
    let m = c.ambient();
    let n = n as usize;
    if !c.is_empty() {
        let mut comps = Vec::new();
        for v in c.components() {
            let mut axes = v.axes.clone();
            let take = n - v.dim();
            for j in (m + 1)..=(m + take) {
                axes.insert(j);
            }
            let mut bp = v.basepoint.clone();
            for j in (m + take + 1)..=(m + n) {
                bp.insert(j, Rat::zero());
            }
            comps.push(Variety { axes, basepoint: bp });
        }
        return SpecialLinearSet::from_varieties(m + n, comps);
    }
    if m == 0 {
        return Err(Error::Argument("ambient dimension must be positive".into()));
    }
    if n >= 1 {
        let mut axes: BTreeSet<usize> = ((m + 1)..(m + n)).collect();
        axes.insert(1);
        let mut bp: BTreeMap<usize, Rat> = (2..=m).map(|j| (j, Rat::zero())).collect();
        bp.insert(m + n, rat_int(1));
        return SpecialLinearSet::from_varieties(m + n, vec![Variety { axes, basepoint: bp }]);
    }
    // n = 0: a fresh diagonal point disjoint from B.
    if b.components().iter().any(|v| v.dim() == m) {
        return Err(Error::Argument(
            "C is empty, n = 0, and B covers the ambient space: no disjoint point exists".into(),
        ));
    }
    let mut t: i64 = 0;
    loop {
        let coords: Vec<Rat> = (0..m).map(|_| rat_int(t)).collect();
        if !b.contains_point(&coords) {
            return SpecialLinearSet::from_varieties(m, vec![Variety::point(&coords)]);
        }
        t += 1;
    }
}

/// The geometry as a model with a fixed carrier (top element).
pub struct SlsLattice {
    pub carrier: SpecialLinearSet,
}

impl ScModel for SlsLattice {
    type Elem = SpecialLinearSet;

    fn zero(&self) -> SpecialLinearSet {
        SpecialLinearSet::empty(self.carrier.ambient())
    }
    fn one(&self) -> SpecialLinearSet {
        self.carrier.clone()
    }
    fn join(&self, a: &SpecialLinearSet, b: &SpecialLinearSet) -> SpecialLinearSet {
        a.join(b).expect("same ambient")
    }
    fn meet(&self, a: &SpecialLinearSet, b: &SpecialLinearSet) -> SpecialLinearSet {
        a.meet(b).expect("same ambient")
    }
    fn diff(&self, a: &SpecialLinearSet, b: &SpecialLinearSet) -> SpecialLinearSet {
        a.diff(b).expect("same ambient")
    }
    fn ck(&self, a: &SpecialLinearSet, k: u32) -> SpecialLinearSet {
        a.ck(k)
    }
    fn scdim(&self, a: &SpecialLinearSet) -> Dim {
        a.scdim()
    }
}

impl crate::asc::AscModel for SlsLattice {
    fn asc_of(&self, e: &SpecialLinearSet) -> u32 {
        if e.is_empty() || e.scdim() != Dim::Finite(0) {
            0
        } else {
            e.components().len() as u32
        }
    }
}

/// A verified-by-construction linear model of a base: the carrier and the
/// image of every lattice element.
pub struct Representation {
    pub base: ScaledBase,
    pub x: SpecialLinearSet,
    pairs: Vec<(Mask, SpecialLinearSet)>,
    pub trace: Vec<String>,
}

impl Representation {
    pub fn image_of(&self, e: &LatticeElement) -> Result<&SpecialLinearSet> {
        let m = self.base.check_elem(e)?;
        self.pairs
            .iter()
            .find(|(mask, _)| *mask == m)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Argument("element has no image".into()))
    }

    pub fn entries(&self) -> Vec<(LatticeElement, &SpecialLinearSet)> {
        self.pairs
            .iter()
            .map(|(m, s)| (self.base.elem(*m), s))
            .collect()
    }

    /// Full embedding check against the geometry with carrier `x`.
    pub fn verify(&self) -> Result<EmbedReport> {
        let target = SlsLattice {
            carrier: self.x.clone(),
        };
        let map: Vec<(LatticeElement, SpecialLinearSet)> = self
            .pairs
            .iter()
            .map(|(m, s)| (self.base.elem(*m), s.clone()))
            .collect();
        crate::embed::embed_check(&self.base, &target, &map)
    }
}

/// Linear representation of a base: an embedding into the special linear
/// sets of a carrier of equal sc-dimension, built one join-irreducible at a
/// time along a linear extension.
pub fn represent(base: &ScaledBase) -> Result<Representation> {
    represent_with(base, None, 0)
}

/// Linear representation of a weighted base: atoms with positive count map
/// to point sets of exactly that size, uncounted atoms to point sets of at
/// least `n_floor` points.
pub fn represent_asc(asc: &crate::asc::AscBase, n_floor: u32) -> Result<Representation> {
    represent_with(asc.base(), Some(asc), n_floor)
}

fn represent_with(
    base: &ScaledBase,
    asc: Option<&crate::asc::AscBase>,
    n_floor: u32,
) -> Result<Representation> {
    let p = base.poset();
    if p.len() > 16 {
        return Err(Error::TooLarge(
            "linear representation materializes all elements; at most 16 irreducibles".into(),
        ));
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (base.label(i), i));

    let mut ambient = 1usize;
    let mut maps: BTreeMap<Mask, SpecialLinearSet> =
        BTreeMap::from([(0, SpecialLinearSet::empty(1))]);
    let mut trace = Vec::new();

    for &pk in &order {
        let prefix: Mask = maps.keys().fold(0, |acc, &m| acc | m);
        let b_mask = prefix;
        let c_mask = p.below_mask(pk) & !bit(pk);
        let b_set = maps[&b_mask].clone();
        let c_set = maps[&c_mask].clone();
        let n = base.label(pk);

        let a_set = match asc {
            Some(w) if n == 0 => {
                // An atom: a finite set of fresh diagonal points.
                let count = if w.weights()[pk] > 0 {
                    w.weights()[pk]
                } else {
                    n_floor.max(1)
                };
                let mut pts = Vec::new();
                let mut t: i64 = 0;
                while pts.len() < count as usize {
                    let coords: Vec<Rat> = (0..ambient).map(|_| rat_int(t)).collect();
                    if !b_set.contains_point(&coords) {
                        pts.push(Variety::point(&coords));
                    }
                    t += 1;
                }
                SpecialLinearSet::from_varieties(ambient, pts)?
            }
            _ => wedge_over(&c_set, &b_set, n)?,
        };
        let new_ambient = a_set.ambient();
        trace.push(format!(
            "irreducible {}: dim {}, ambient {} -> {}, {} component(s)",
            p.name(pk),
            n,
            ambient,
            new_ambient,
            a_set.components().len()
        ));

        let mut next: BTreeMap<Mask, SpecialLinearSet> = BTreeMap::new();
        for (m, s) in &maps {
            let padded = s.embed_ambient(new_ambient)?;
            let with_new = padded.join(&a_set)?;
            if let Some(prev) = next.insert(*m, padded.clone()) {
                debug_assert_eq!(prev, padded);
            }
            let grown = m | p.below_mask(pk);
            if let Some(prev) = next.insert(grown, with_new.clone()) {
                debug_assert_eq!(prev, with_new);
            }
        }
        maps = next;
        ambient = new_ambient;
    }

    let x = maps[&p.full_mask()].clone();
    Ok(Representation {
        base: base.clone(),
        x,
        pairs: maps.into_iter().collect(),
        trace,
    })
}

/// Closure of a family of sets under the four operations; finite because
/// every step stays inside unions of the finitely many intersection flats.
pub fn sls_closure(seeds: &[SpecialLinearSet]) -> Result<Vec<SpecialLinearSet>> {
    let ambient = seeds
        .first()
        .map(SpecialLinearSet::ambient)
        .ok_or_else(|| Error::Argument("closure needs at least one set".into()))?;
    let mut family: BTreeSet<SpecialLinearSet> = BTreeSet::new();
    family.insert(SpecialLinearSet::empty(ambient));
    for s in seeds {
        if s.ambient() != ambient {
            return Err(Error::Argument("mixed ambient dimensions".into()));
        }
        family.insert(s.clone());
    }
    let max_k = seeds
        .iter()
        .filter_map(|s| s.scdim().finite())
        .max()
        .unwrap_or(0);
    loop {
        let snapshot: Vec<SpecialLinearSet> = family.iter().cloned().collect();
        let before = family.len();
        if before > 4096 {
            return Err(Error::TooLarge("set-family closure exceeded 4096 members".into()));
        }
        for a in &snapshot {
            for k in 0..=max_k {
                family.insert(a.ck(k));
            }
            for b in &snapshot {
                family.insert(a.join(b)?);
                family.insert(a.meet(b)?);
                family.insert(a.diff(b)?);
            }
        }
        if family.len() == before {
            break;
        }
    }
    Ok(family.into_iter().collect())
}

/// Closure of `{empty, x}`: the geometric counterpart of the prime
/// substructure.
pub fn geometric_prime(x: &SpecialLinearSet) -> Result<Vec<SpecialLinearSet>> {
    sls_closure(&[x.clone()])
}

/// Abstract presentation of a closed family of sets: the recovered poset of
/// join-irreducible members labeled by dimension, plus the member behind
/// each poset point.
pub struct GeomLattice {
    pub base: ScaledBase,
    pub point_images: Vec<SpecialLinearSet>,
}

impl GeomLattice {
    pub fn image_of_mask(&self, m: Mask) -> SpecialLinearSet {
        let ambient = self
            .point_images
            .first()
            .map(SpecialLinearSet::ambient)
            .unwrap_or(1);
        iter_bits(m).fold(SpecialLinearSet::empty(ambient), |acc, i| {
            acc.join(&self.point_images[i]).expect("same ambient")
        })
    }
}

/// Ingests a closed family as an abstract base (via the join/meet tables and
/// poset recovery), labeling each irreducible by its geometric dimension.
pub fn family_to_base(family: &[SpecialLinearSet]) -> Result<GeomLattice> {
    let names: Vec<String> = (0..family.len()).map(|i| format!("s{i}")).collect();
    let find = |s: &SpecialLinearSet| -> Result<usize> {
        family
            .iter()
            .position(|t| t == s)
            .ok_or_else(|| Error::Argument("family is not closed".into()))
    };
    let n = family.len();
    let mut join = vec![vec![String::new(); n]; n];
    let mut meet = join.clone();
    for i in 0..n {
        for j in 0..n {
            join[i][j] = names[find(&family[i].join(&family[j])?)?].clone();
            meet[i][j] = names[find(&family[i].meet(&family[j])?)?].clone();
        }
    }
    let tables = ingest::LatticeTables {
        elements: names.clone(),
        join,
        meet,
    };
    let poset = ingest::recover_poset(&tables)?;
    let mut point_images = Vec::with_capacity(poset.len());
    let mut labels = BTreeMap::new();
    let mut d = 0;
    for name in poset.names() {
        let idx: usize = name[1..].parse().expect("generated name");
        let s = &family[idx];
        let Dim::Finite(l) = s.scdim() else {
            return Err(Error::Argument("empty set cannot be irreducible".into()));
        };
        point_images.push(s.clone());
        labels.insert(name.clone(), l);
        d = d.max(l);
    }
    let base = ScaledBase::new(poset, d, &labels)?;
    Ok(GeomLattice { base, point_images })
}

#[derive(Debug, serde::Serialize)]
pub struct GeometricCatenarityReport {
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Catenarity over the geometry: for every pure pair `c <= a` in the family
/// and every intermediate dimension, an intermediate pure set is constructed
/// inside the geometry (not necessarily inside the family) and verified.
pub fn geometric_catenarity(family: &[SpecialLinearSet]) -> Result<GeometricCatenarityReport> {
    let mut checked = 0usize;
    for a in family {
        let Some(p_dim) = a.scdim().finite() else { continue };
        if a.components().iter().any(|v| v.dim() as u32 != p_dim) {
            continue; // not pure
        }
        for c in family {
            if !c.leq(a)? {
                continue;
            }
            let r_dim = match c.scdim() {
                Dim::NegInf => 0,
                Dim::Finite(r) => {
                    if c.components().iter().any(|v| v.dim() as u32 != r) {
                        continue;
                    }
                    r
                }
            };
            for q in r_dim..=p_dim {
                checked += 1;
                let b = catenarity_witness(c, a, q)?;
                let ok = !b.is_empty()
                    && b.components().iter().all(|v| v.dim() as u32 == q)
                    && c.leq(&b)?
                    && b.leq(a)?;
                if !ok {
                    return Ok(GeometricCatenarityReport {
                        pass: false,
                        checked,
                        failure: Some(format!("no pure witness at q = {q} for {c:?} <= {a:?}")),
                    });
                }
            }
        }
    }
    Ok(GeometricCatenarityReport {
        pass: true,
        checked,
        failure: None,
    })
}

/// Builds a pure dimension-`q` set between a pure `c` and a pure `a` by
/// extending each component of `c` with axes borrowed from an enclosing
/// component of `a`.
fn catenarity_witness(
    c: &SpecialLinearSet,
    a: &SpecialLinearSet,
    q: u32,
) -> Result<SpecialLinearSet> {
    let mut comps = Vec::new();
    if c.is_empty() {
        let v = a
            .components()
            .first()
            .ok_or_else(|| Error::Argument("a must be non-zero".into()))?;
        let keep: BTreeSet<usize> = v.axes.iter().copied().take(q as usize).collect();
        let mut bp = v.basepoint.clone();
        for &j in v.axes.difference(&keep) {
            bp.insert(j, Rat::zero());
        }
        comps.push(Variety {
            axes: keep,
            basepoint: bp,
        });
    } else {
        for cv in c.components() {
            let host = a
                .components()
                .iter()
                .find(|av| cv.subset_of(av))
                .ok_or_else(|| Error::Argument("c is not below a".into()))?;
            let mut axes = cv.axes.clone();
            for &j in host.axes.difference(&cv.axes) {
                if axes.len() as u32 >= q {
                    break;
                }
                axes.insert(j);
            }
            let mut bp = cv.basepoint.clone();
            for j in &axes {
                bp.remove(j);
            }
            comps.push(Variety { axes, basepoint: bp });
        }
    }
    SpecialLinearSet::from_varieties(c.ambient(), comps)
}
