//! Counted signatures: the classifying data of primitive extensions of
//! atom-counted bases, and their construction.

use crate::asc::AscBase;
use crate::dim::Dim;
use crate::error::{Error, Result};
use crate::poset::iter_bits;
use crate::scaled::CheckMode;
use crate::signature::{apply_signature, enumerate_signatures, Extension, Signature};
use std::collections::{BTreeMap, BTreeSet};

/// A signature together with the atom counts assigned to the two new
/// generators (counts pair with `h1`, `h2` in order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscSignature {
    pub sig: Signature,
    pub k1: u32,
    pub k2: u32,
}

impl AscSignature {
    pub fn new(sig: Signature, k1: u32, k2: u32) -> AscSignature {
        // H is a set of pairs; with equal h-components the count order is
        // immaterial, so normalize it.
        let (k1, k2) = if sig.h1 == sig.h2 && k2 < k1 {
            (k2, k1)
        } else {
            (k1, k2)
        };
        AscSignature { sig, k1, k2 }
    }
}

/// Checks the four compatibility conditions between a signature and its
/// counts, naming the violated clause.
pub fn validate_asc_signature(base: &AscBase, asig: &AscSignature) -> Result<()> {
    crate::signature::validate_signature(base.base(), &asig.sig)?;
    let g = base.base().check_elem(&asig.sig.g)?;
    let sg = base.base().scdim_m(g);
    let ag = base.asc_m(g);
    let (q, k1, k2) = (asig.sig.q, asig.k1, asig.k2);
    if Dim::Finite(q) < sg && k1 != k2 {
        return Err(Error::Signature(
            "q < scdim g requires equal counts (condition 1)".into(),
        ));
    }
    if q != 0 && (k1 != 0 || k2 != 0) {
        return Err(Error::Signature(
            "q != 0 requires both counts to be 0 (condition 2)".into(),
        ));
    }
    if (k1 == 0 || k2 == 0) && ag != 0 {
        return Err(Error::Signature(
            "a zero count requires asc(g) = 0 (condition 3)".into(),
        ));
    }
    if k1 != 0 && k2 != 0 && sg == Dim::Finite(0) && ag != k1 + k2 {
        return Err(Error::Signature(
            "counts must sum to asc(g) when scdim g = 0 (condition 4)".into(),
        ));
    }
    Ok(())
}

/// All counted signatures with counts drawn from the cap set (0 is always
/// allowed), deterministically ordered.
pub fn enumerate_asc_signatures(
    base: &AscBase,
    k_cap: &BTreeSet<u32>,
) -> Result<Vec<AscSignature>> {
    if k_cap.is_empty() {
        return Err(Error::Argument("the count cap set must be non-empty".into()));
    }
    let mut values: Vec<u32> = vec![0];
    values.extend(k_cap.iter().copied().filter(|&k| k > 0));
    let mut out = Vec::new();
    for sig in enumerate_signatures(base.base())? {
        for &k1 in &values {
            for &k2 in &values {
                let cand = AscSignature::new(sig.clone(), k1, k2);
                if out.contains(&cand) {
                    continue;
                }
                if validate_asc_signature(base, &cand).is_ok() {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

/// The primitive extension an asc-signature classifies: the plain extension
/// plus count assignments on the new generators, revalidated.
pub struct AscExtension {
    pub ext: Extension,
    pub target: AscBase,
}

pub fn apply_asc_signature(base: &AscBase, asig: &AscSignature) -> Result<AscExtension> {
    validate_asc_signature(base, asig)?;
    let ext = apply_signature(base.base(), &asig.sig)?;
    let target = &ext.map.target;
    let p = target.poset();
    let mut weights: BTreeMap<String, u32> = BTreeMap::new();
    // Old atoms keep their counts (their points persist under the surgery).
    let old = base.base().poset();
    for i in 0..old.len() {
        if old.below_mask(i) == crate::poset::bit(i) && base.weights()[i] > 0 {
            let name = old.name(i);
            if p.index_of(name).is_ok() {
                weights.insert(name.to_string(), base.weights()[i]);
            }
        }
    }
    if asig.sig.q == 0 {
        for (x, k) in [(&ext.x1, asig.k1), (&ext.x2, asig.k2)] {
            let m = target.check_elem(x)?;
            let point = iter_bits(p.maximals_mask(m)).next().expect("non-zero");
            if k > 0 {
                weights.insert(p.name(point).to_string(), k);
            }
        }
    }
    let asc_target = AscBase::new(target.clone(), &weights)?;
    let report = asc_target.check_asc_axioms(CheckMode::Auto { seed: 0 })?;
    if !report.all_pass() {
        return Err(Error::Signature(
            "extension violates the counting schemes".into(),
        ));
    }
    // The inclusion preserves counts on old atoms.
    for i in 0..old.len() {
        if old.below_mask(i) == crate::poset::bit(i) {
            let image = ext.map.map_m(crate::poset::bit(i));
            assert_eq!(
                base.asc_m(crate::poset::bit(i)),
                asc_target.asc_m(image),
                "inclusion must preserve the count of atom {}",
                old.name(i)
            );
        }
    }
    Ok(AscExtension {
        ext,
        target: asc_target,
    })
}
