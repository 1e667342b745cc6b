//! Stable JSON file formats: posets, (weighted) lattice bases, explicit
//! lattice tables, special linear sets, signatures, representation maps and
//! decision outcomes. Emission is canonical: names and covers sorted
//! lexicographically, rationals as decimal strings.

use crate::asc::AscBase;
use crate::error::{Error, Result};
use crate::geometry::{Rat, SpecialLinearSet, Variety};
use crate::ingest::LatticeTables;
use crate::logic::{DecisionOutcome, ModelBase};
use crate::poset::Poset;
use crate::scaled::ScaledBase;
use crate::signature::Signature;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const FORMAT_TAG: &str = "sclat/1";

fn check_format(v: &Value) -> Result<()> {
    match v.get("format") {
        None => Ok(()),
        Some(Value::String(s)) if s == FORMAT_TAG => Ok(()),
        Some(other) => Err(Error::IllFormed(format!(
            "unsupported format tag {other}, expected {FORMAT_TAG:?}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Posets

#[derive(Serialize, Deserialize)]
struct PosetDoc {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

pub fn poset_to_json(p: &Poset) -> Value {
    let mut elements = p.names().to_vec();
    elements.sort();
    let mut covers = p.covers();
    covers.sort();
    serde_json::to_value(PosetDoc { elements, covers }).expect("serializable")
}

pub fn poset_from_json(v: &Value) -> Result<Poset> {
    let doc: PosetDoc = serde_json::from_value(v.clone())?;
    Poset::new(&doc.elements, &doc.covers)
}

// ---------------------------------------------------------------------------
// Lattice bases (with optional atom counts)

pub fn base_to_json(model: &ModelBase) -> Value {
    let base = model.scaled();
    let dimlabel: BTreeMap<String, u32> = base
        .poset()
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), base.label(i)))
        .collect();
    let mut doc = json!({
        "format": FORMAT_TAG,
        "d": base.d(),
        "poset": poset_to_json(base.poset()),
        "dimlabel": dimlabel,
    });
    if let Some(asc) = model.asc() {
        doc["asc"] = serde_json::to_value(asc.weight_map()).expect("serializable");
    }
    doc
}

pub fn scaled_to_json(base: &ScaledBase) -> Value {
    base_to_json(&ModelBase::Sc(base.clone()))
}

pub fn base_from_json(v: &Value) -> Result<ModelBase> {
    check_format(v)?;
    // Documents produced by prime/extend wrap the base; accept them back.
    if v.get("dimlabel").is_none() {
        if let Some(inner) = v.get("base") {
            return base_from_json(inner);
        }
    }
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::IllFormed("missing d".into()))?;
    let poset = poset_from_json(
        v.get("poset")
            .ok_or_else(|| Error::IllFormed("missing poset".into()))?,
    )?;
    let dimlabel: BTreeMap<String, u32> = serde_json::from_value(
        v.get("dimlabel")
            .cloned()
            .ok_or_else(|| Error::IllFormed("missing dimlabel".into()))?,
    )?;
    let base = ScaledBase::new(poset, d as u32, &dimlabel)?;
    match v.get("asc") {
        None | Some(Value::Null) => Ok(ModelBase::Sc(base)),
        Some(w) => {
            let weights: BTreeMap<String, u32> = serde_json::from_value(w.clone())?;
            Ok(ModelBase::Asc(AscBase::new(base, &weights)?))
        }
    }
}

pub fn tables_from_json(v: &Value) -> Result<LatticeTables> {
    Ok(serde_json::from_value(v.clone())?)
}

/// Distinguishes the supported input documents by their fields.
pub enum InputDoc {
    Base(ModelBase),
    Tables(LatticeTables),
    Poset(Poset),
    Sls(SpecialLinearSet),
}

pub fn detect_from_json(v: &Value) -> Result<InputDoc> {
    if v.get("join").is_some() {
        return Ok(InputDoc::Tables(tables_from_json(v)?));
    }
    if v.get("dimlabel").is_some() || v.get("base").is_some() {
        return Ok(InputDoc::Base(base_from_json(v)?));
    }
    if v.get("varieties").is_some() {
        return Ok(InputDoc::Sls(sls_from_json(v)?));
    }
    if v.get("elements").is_some() {
        return Ok(InputDoc::Poset(poset_from_json(v)?));
    }
    Err(Error::IllFormed(
        "unrecognized document: expected a lattice, poset, table or linear-set file".into(),
    ))
}

// ---------------------------------------------------------------------------
// Rationals and special linear sets

fn rat_to_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::IllFormed(format!("non-integer number {n}")))?;
            Ok(Rat::from_integer(i.into()))
        }
        Value::String(s) => {
            let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
                t.trim()
                    .parse()
                    .map_err(|_| Error::IllFormed(format!("bad rational {s:?}")))
            };
            match s.split_once('/') {
                None => Ok(Rat::from_integer(parse_int(s)?)),
                Some((p, q)) => {
                    let den = parse_int(q)?;
                    if den.is_zero() || den.is_negative() {
                        return Err(Error::IllFormed(format!(
                            "denominator must be positive in {s:?}"
                        )));
                    }
                    Ok(Rat::new(parse_int(p)?, den))
                }
            }
        }
        other => Err(Error::IllFormed(format!("bad rational {other}"))),
    }
}

pub fn sls_to_json(s: &SpecialLinearSet) -> Value {
    let varieties: Vec<Value> = s
        .components()
        .iter()
        .map(|v| {
            let basepoint: serde_json::Map<String, Value> = v
                .basepoint()
                .iter()
                .map(|(j, r)| (j.to_string(), rat_to_json(r)))
                .collect();
            json!({
                "axes": v.axes().iter().collect::<Vec<_>>(),
                "basepoint": basepoint,
            })
        })
        .collect();
    json!({
        "format": FORMAT_TAG,
        "ambient": s.ambient(),
        "varieties": varieties,
    })
}

pub fn sls_from_json(v: &Value) -> Result<SpecialLinearSet> {
    check_format(v)?;
    let ambient = v
        .get("ambient")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::IllFormed("missing ambient".into()))? as usize;
    let mut comps = Vec::new();
    for var in v
        .get("varieties")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::IllFormed("missing varieties".into()))?
    {
        let axes: std::collections::BTreeSet<usize> = var
            .get("axes")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::IllFormed("missing axes".into()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| Error::IllFormed("bad axis".into()))
            })
            .collect::<Result<_>>()?;
        let mut basepoint = BTreeMap::new();
        let bp = var
            .get("basepoint")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::IllFormed("missing basepoint".into()))?;
        for (k, val) in bp {
            let j: usize = k
                .parse()
                .map_err(|_| Error::IllFormed(format!("bad coordinate key {k:?}")))?;
            basepoint.insert(j, rat_from_json(val)?);
        }
        comps.push(Variety::new(ambient, axes, basepoint)?);
    }
    SpecialLinearSet::from_varieties(ambient, comps)
}

// ---------------------------------------------------------------------------
// Signatures

fn antichain_of(base: &ScaledBase, e: &crate::element::LatticeElement) -> Vec<String> {
    let m = base.check_elem(e).expect("same base");
    base.poset()
        .names_from_mask(base.poset().maximals_mask(m))
}

/// Signature serialization relative to its base: `g` as the irreducible's
/// point name, members of H as sorted antichain arrays.
pub fn signature_to_json(base: &ScaledBase, sig: &Signature) -> Result<Value> {
    let g_antichain = antichain_of(base, &sig.g);
    if g_antichain.len() != 1 {
        return Err(Error::Argument("g must be join-irreducible".into()));
    }
    Ok(json!({
        "g": g_antichain[0],
        "H": [antichain_of(base, &sig.h1), antichain_of(base, &sig.h2)],
        "q": sig.q,
    }))
}

pub fn asc_signature_to_json(
    base: &ScaledBase,
    sig: &Signature,
    k1: u32,
    k2: u32,
) -> Result<Value> {
    let mut v = signature_to_json(base, sig)?;
    v["K"] = json!([k1, k2]);
    Ok(v)
}

pub fn signature_from_json(base: &ScaledBase, v: &Value) -> Result<Signature> {
    let g_name = v
        .get("g")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::IllFormed("missing g".into()))?;
    let g = base.element(&[g_name])?;
    let h = v
        .get("H")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::IllFormed("missing H".into()))?;
    if h.is_empty() || h.len() > 2 {
        return Err(Error::IllFormed("H must have one or two members".into()));
    }
    let parse_elem = |x: &Value| -> Result<crate::element::LatticeElement> {
        let names: Vec<String> = serde_json::from_value(x.clone())?;
        base.element(&names)
    };
    let h1 = parse_elem(&h[0])?;
    let h2 = if h.len() == 2 { parse_elem(&h[1])? } else { h1.clone() };
    let q = v
        .get("q")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::IllFormed("missing q".into()))? as u32;
    Ok(Signature::new(g, h1, h2, q))
}

/// The optional counted part `K`.
pub fn k_values_from_json(v: &Value) -> Result<Option<(u32, u32)>> {
    match v.get("K") {
        None => Ok(None),
        Some(arr) => {
            let ks: Vec<u32> = serde_json::from_value(arr.clone())?;
            if ks.len() != 2 {
                return Err(Error::IllFormed("K must have two members".into()));
            }
            Ok(Some((ks[0], ks[1])))
        }
    }
}

// ---------------------------------------------------------------------------
// Representations and outcomes

pub fn representation_to_json(rep: &crate::geometry::Representation) -> Value {
    let map: Vec<Value> = rep
        .entries()
        .into_iter()
        .map(|(e, s)| {
            json!({
                "element": e.maximals(),
                "image": sls_to_json(s),
            })
        })
        .collect();
    json!({
        "format": FORMAT_TAG,
        "base": scaled_to_json(&rep.base),
        "map": map,
    })
}

pub fn outcome_to_json(out: &DecisionOutcome) -> Value {
    let witness = out.witness.as_ref().map(|w| {
        let assignment: serde_json::Map<String, Value> = w
            .assignment
            .iter()
            .map(|(v, antichain)| (v.clone(), json!(antichain)))
            .collect();
        json!({
            "base": base_to_json(&w.base),
            "assignment": assignment,
        })
    });
    json!({
        "format": FORMAT_TAG,
        "verdict": out.verdict,
        "witness": witness,
        "bound_used": out.bound_used,
        "exhaustive": out.exhaustive,
    })
}
