use crate::dim::Dim;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Point sets of a poset are stored as bit masks over the insertion order.
pub(crate) type Mask = u64;

/// Hard cap on poset size imposed by the mask representation.
pub const MAX_POINTS: usize = 64;

pub(crate) fn bit(i: usize) -> Mask {
    1u64 << i
}

pub(crate) fn iter_bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[derive(Debug, PartialEq, Eq)]
struct PosetCore {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    /// `below[i]` is the set of points `<=` the i-th point, including itself.
    below: Vec<Mask>,
    above: Vec<Mask>,
    /// Transitive reduction of the order, sorted by (lower, upper) index.
    covers: Vec<(usize, usize)>,
}

/// A finite poset presented by named points and cover pairs.
///
/// The order is the reflexive-transitive closure of the input pairs; the
/// stored cover list is normalized to the transitive reduction. Values are
/// immutable and cheap to clone.
#[derive(Debug, Clone)]
pub struct Poset {
    core: Arc<PosetCore>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.core, &other.core) || self.core == other.core
    }
}
impl Eq for Poset {}

impl Poset {
    /// Builds a poset from named points and (lower, upper) order pairs.
    /// The pairs may be any sub-relation of the intended order; cycles are
    /// rejected and the cover list is reduced.
    pub fn new<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Poset> {
        if elements.len() > MAX_POINTS {
            return Err(Error::TooLarge(format!(
                "poset has {} points, maximum is {MAX_POINTS}",
                elements.len()
            )));
        }
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::IllFormed("empty element identifier".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::IllFormed(format!("duplicate element {n:?}")));
            }
        }
        let n = names.len();
        let mut up_adj: Vec<Mask> = vec![0; n];
        for (lo, hi) in pairs {
            let (lo, hi) = (lo.as_ref(), hi.as_ref());
            let i = *index
                .get(lo)
                .ok_or_else(|| Error::IllFormed(format!("unknown identifier {lo:?}")))?;
            let j = *index
                .get(hi)
                .ok_or_else(|| Error::IllFormed(format!("unknown identifier {hi:?}")))?;
            if i == j {
                return Err(Error::IllFormed(format!("cycle at element {lo:?}")));
            }
            up_adj[i] |= bit(j);
        }
        // Reachability (strictly above) by saturation.
        let mut strictly_above = up_adj.clone();
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut acc = strictly_above[i];
                for j in iter_bits(strictly_above[i]) {
                    acc |= strictly_above[j];
                }
                if acc != strictly_above[i] {
                    strictly_above[i] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if strictly_above[i] & bit(i) != 0 {
                return Err(Error::IllFormed(format!("cycle at element {:?}", names[i])));
            }
        }
        let above: Vec<Mask> = (0..n).map(|i| strictly_above[i] | bit(i)).collect();
        let mut below: Vec<Mask> = vec![0; n];
        for i in 0..n {
            for j in iter_bits(above[i]) {
                below[j] |= bit(i);
            }
        }
        // Covers: i < j with nothing strictly between.
        let mut covers = Vec::new();
        for j in 0..n {
            let strict = below[j] & !bit(j);
            for i in iter_bits(strict) {
                let between = strict & strictly_above[i];
                if between == 0 {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        Ok(Poset {
            core: Arc::new(PosetCore {
                names,
                index,
                below,
                above,
                covers,
            }),
        })
    }

    pub fn empty() -> Poset {
        Poset::new::<&str>(&[], &[]).expect("empty poset")
    }

    pub fn len(&self) -> usize {
        self.core.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.core.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.core.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.core
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::IllFormed(format!("unknown identifier {name:?}")))
    }

    /// Cover pairs as name pairs, in canonical index order.
    pub fn covers(&self) -> Vec<(String, String)> {
        self.core
            .covers
            .iter()
            .map(|&(i, j)| (self.core.names[i].clone(), self.core.names[j].clone()))
            .collect()
    }

    pub(crate) fn cover_indices(&self) -> &[(usize, usize)] {
        &self.core.covers
    }

    pub(crate) fn leq_points(&self, i: usize, j: usize) -> bool {
        self.core.below[j] & bit(i) != 0
    }

    pub(crate) fn below_mask(&self, i: usize) -> Mask {
        self.core.below[i]
    }

    pub(crate) fn above_mask(&self, i: usize) -> Mask {
        self.core.above[i]
    }

    pub(crate) fn full_mask(&self) -> Mask {
        if self.len() == 0 {
            0
        } else {
            Mask::MAX >> (MAX_POINTS - self.len())
        }
    }

    pub(crate) fn is_downset(&self, m: Mask) -> bool {
        iter_bits(m).all(|i| self.core.below[i] & !m == 0)
    }

    pub(crate) fn downset_closure(&self, m: Mask) -> Mask {
        iter_bits(m).fold(0, |acc, i| acc | self.core.below[i])
    }

    /// Maximal points of a set: members with no other member strictly above.
    pub(crate) fn maximals_mask(&self, m: Mask) -> Mask {
        iter_bits(m)
            .filter(|&i| self.core.above[i] & m == bit(i))
            .fold(0, |acc, i| acc | bit(i))
    }

    /// All downsets, in increasing mask order. Errors out when the poset is
    /// too wide for exhaustive enumeration.
    pub(crate) fn all_downsets(&self) -> Result<Vec<Mask>> {
        if self.len() > 22 {
            return Err(Error::TooLarge(format!(
                "cannot enumerate all downsets of a {}-point poset",
                self.len()
            )));
        }
        let full = self.full_mask();
        let mut out = Vec::new();
        let mut m: Mask = 0;
        loop {
            if self.is_downset(m) {
                out.push(m);
            }
            if m == full {
                break;
            }
            m += 1;
        }
        Ok(out)
    }

    /// Indices sorted so that every point appears after everything below it.
    pub(crate) fn topo_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (self.core.below[i].count_ones(), i));
        idx
    }

    // Downset-lattice operations on masks (arguments must be downsets).

    pub(crate) fn join_m(&self, a: Mask, b: Mask) -> Mask {
        a | b
    }

    pub(crate) fn meet_m(&self, a: Mask, b: Mask) -> Mask {
        a & b
    }

    /// Topological complement: the downset spanned by the points of `a`
    /// outside `b`.
    pub(crate) fn diff_m(&self, a: Mask, b: Mask) -> Mask {
        self.downset_closure(a & !b)
    }

    pub(crate) fn strongly_below_m(&self, b: Mask, a: Mask) -> bool {
        b & !self.diff_m(a, b) == 0
    }

    /// Length of the longest chain of points inside the downset `m`.
    pub(crate) fn dim_m(&self, m: Mask) -> Dim {
        if m == 0 {
            return Dim::NegInf;
        }
        let mut depth = vec![0u32; self.len()];
        let mut best = 0;
        for i in self.topo_order() {
            if m & bit(i) == 0 {
                continue;
            }
            let d = iter_bits(self.core.below[i] & m & !bit(i))
                .map(|j| depth[j] + 1)
                .max()
                .unwrap_or(0);
            depth[i] = d;
            best = best.max(d);
        }
        Dim::Finite(best)
    }

    /// Dimension computed from the longest strictly-ascending chain for the
    /// strong-below relation, by exhaustive search over downsets contained in
    /// `m`. Independent cross-check for `dim_m`.
    pub(crate) fn dim_via_ll_m(&self, m: Mask) -> Result<Dim> {
        if m == 0 {
            return Ok(Dim::NegInf);
        }
        if m.count_ones() > 20 {
            return Err(Error::TooLarge(
                "strong-below chain search needs at most 20 points".into(),
            ));
        }
        // Submasks of m that are downsets, sorted by popcount.
        let mut subs: Vec<Mask> = Vec::new();
        let mut s = m;
        loop {
            if s != 0 && self.is_downset(s) {
                subs.push(s);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & m;
        }
        subs.sort_by_key(|x| x.count_ones());
        let mut depth: BTreeMap<Mask, u32> = BTreeMap::new();
        let mut best = 0;
        for (k, &x) in subs.iter().enumerate() {
            let mut d = 0;
            for &y in &subs[..k] {
                if y & !x == 0 && self.strongly_below_m(y, x) {
                    d = d.max(depth[&y] + 1);
                }
            }
            depth.insert(x, d);
            best = best.max(d);
        }
        Ok(Dim::Finite(best))
    }

    pub(crate) fn mask_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Mask> {
        let mut m = 0;
        for n in names {
            m |= bit(self.index_of(n.as_ref())?);
        }
        Ok(m)
    }

    pub(crate) fn names_from_mask(&self, m: Mask) -> Vec<String> {
        iter_bits(m).map(|i| self.core.names[i].clone()).collect()
    }
}
