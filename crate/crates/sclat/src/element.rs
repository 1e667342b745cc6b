use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::poset::{Mask, Poset};

/// An element of the lattice of decreasing sets of a poset.
///
/// Internally the full downset is kept as a bit mask; equality of downsets
/// coincides with equality of their maximal antichains, so the representation
/// is canonical either way. The antichain view is materialized on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeElement {
    poset: Poset,
    mask: Mask,
}

impl LatticeElement {
    pub(crate) fn from_mask(poset: &Poset, mask: Mask) -> LatticeElement {
        debug_assert!(poset.is_downset(mask));
        LatticeElement {
            poset: poset.clone(),
            mask,
        }
    }

    pub(crate) fn mask(&self) -> Mask {
        self.mask
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    /// The maximal antichain denoting this element (its join-irreducible
    /// components), in insertion order.
    pub fn maximals(&self) -> Vec<String> {
        self.poset.names_from_mask(self.poset.maximals_mask(self.mask))
    }

    /// All points of the downset, in insertion order.
    pub fn points(&self) -> Vec<String> {
        self.poset.names_from_mask(self.mask)
    }

    fn same_base(&self, other: &LatticeElement) -> Result<()> {
        if self.poset == other.poset {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn join(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.same_base(other)?;
        Ok(LatticeElement::from_mask(
            &self.poset,
            self.poset.join_m(self.mask, other.mask),
        ))
    }

    pub fn meet(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.same_base(other)?;
        Ok(LatticeElement::from_mask(
            &self.poset,
            self.poset.meet_m(self.mask, other.mask),
        ))
    }

    /// Topological complement `self - other`: the join of the components of
    /// `self` not below `other`. Least `c` with `self <= other v c`.
    pub fn tc_diff(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.same_base(other)?;
        Ok(LatticeElement::from_mask(
            &self.poset,
            self.poset.diff_m(self.mask, other.mask),
        ))
    }

    pub fn leq(&self, other: &LatticeElement) -> Result<bool> {
        self.same_base(other)?;
        Ok(self.mask & !other.mask == 0)
    }

    /// `self << other`, i.e. `self <= other - self`.
    pub fn strongly_below(&self, other: &LatticeElement) -> Result<bool> {
        self.same_base(other)?;
        Ok(self.poset.strongly_below_m(self.mask, other.mask))
    }

    /// Length of the longest chain of poset points below this element;
    /// `-inf` for the bottom element.
    pub fn dim(&self) -> Dim {
        self.poset.dim_m(self.mask)
    }

    /// Dimension recomputed through strong-below chains (exhaustive search).
    /// Agrees with [`LatticeElement::dim`] on every finite co-Heyting algebra.
    pub fn dim_via_ll(&self) -> Result<Dim> {
        self.poset.dim_via_ll_m(self.mask)
    }
}

/// The bottom element (empty antichain).
pub fn zero(poset: &Poset) -> LatticeElement {
    LatticeElement::from_mask(poset, 0)
}

/// The top element (all maximal points).
pub fn one(poset: &Poset) -> LatticeElement {
    LatticeElement::from_mask(poset, poset.full_mask())
}

/// The downward closure of a set of named points, as a canonical element.
pub fn downset<S: AsRef<str>>(poset: &Poset, seed: &[S]) -> Result<LatticeElement> {
    let m = poset.mask_from_names(seed)?;
    Ok(LatticeElement::from_mask(poset, poset.downset_closure(m)))
}

/// Element denoted by an antichain of named points (closed downward).
/// Accepts any point set; closure makes it canonical.
pub fn element<S: AsRef<str>>(poset: &Poset, seed: &[S]) -> Result<LatticeElement> {
    downset(poset, seed)
}

/// All elements of the downset lattice, in a fixed canonical order.
pub fn all_elements(poset: &Poset) -> Result<Vec<LatticeElement>> {
    Ok(poset
        .all_downsets()?
        .into_iter()
        .map(|m| LatticeElement::from_mask(poset, m))
        .collect())
}
