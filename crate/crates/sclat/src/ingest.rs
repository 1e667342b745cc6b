use crate::error::{Error, Result};
use crate::poset::{iter_bits, Mask, Poset};

/// An explicit finite lattice given by element names and join/meet tables.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LatticeTables {
    pub elements: Vec<String>,
    /// `join[i][j]` is the name of the join of elements i and j.
    pub join: Vec<Vec<String>>,
    pub meet: Vec<Vec<String>>,
}

fn law(name: &str, witness: String) -> Error {
    Error::Ingestion {
        law: name.to_string(),
        witness: Some(witness),
    }
}

/// Recovers the poset of join-irreducible elements from explicit lattice
/// tables, rejecting anything that is not a finite distributive lattice.
/// The downset lattice of the result is isomorphic to the input.
pub fn recover_poset(t: &LatticeTables) -> Result<Poset> {
    let n = t.elements.len();
    if n == 0 {
        return Err(law("non-empty carrier", "no elements".into()));
    }
    let mut index = std::collections::BTreeMap::new();
    for (i, e) in t.elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(Error::IllFormed(format!("duplicate element {e:?}")));
        }
    }
    let read = |table: &[Vec<String>], what: &str| -> Result<Vec<Vec<usize>>> {
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::IllFormed(format!("{what} table is not {n}x{n}")));
        }
        table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        index
                            .get(e.as_str())
                            .copied()
                            .ok_or_else(|| Error::IllFormed(format!("unknown element {e:?}")))
                    })
                    .collect()
            })
            .collect()
    };
    let join = read(&t.join, "join")?;
    let meet = read(&t.meet, "meet")?;
    let name = |i: usize| t.elements[i].as_str();

    for i in 0..n {
        if join[i][i] != i || meet[i][i] != i {
            return Err(law("idempotence", format!("at {}", name(i))));
        }
        for j in 0..n {
            if join[i][j] != join[j][i] || meet[i][j] != meet[j][i] {
                return Err(law("commutativity", format!("at {}, {}", name(i), name(j))));
            }
            // meet(a,b) = a  <=>  join(a,b) = b
            if (meet[i][j] == i) != (join[i][j] == j) {
                return Err(law("absorption", format!("at {}, {}", name(i), name(j))));
            }
        }
    }
    let leq = |i: usize, j: usize| meet[i][j] == i;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if leq(i, j) && leq(j, k) && !leq(i, k) {
                    return Err(law(
                        "transitivity",
                        format!("{} <= {} <= {}", name(i), name(j), name(k)),
                    ));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let u = join[i][j];
            if !leq(i, u) || !leq(j, u) {
                return Err(law(
                    "least-upper-bound",
                    format!("join({}, {}) is not above both", name(i), name(j)),
                ));
            }
            let l = meet[i][j];
            if !leq(l, i) || !leq(l, j) {
                return Err(law(
                    "greatest-lower-bound",
                    format!("meet({}, {}) is not below both", name(i), name(j)),
                ));
            }
            for c in 0..n {
                if leq(i, c) && leq(j, c) && !leq(u, c) {
                    return Err(law(
                        "least-upper-bound",
                        format!("join({}, {}) is not least", name(i), name(j)),
                    ));
                }
                if leq(c, i) && leq(c, j) && !leq(c, l) {
                    return Err(law(
                        "greatest-lower-bound",
                        format!("meet({}, {}) is not greatest", name(i), name(j)),
                    ));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                    return Err(law(
                        "distributivity",
                        format!("at {}, {}, {}", name(a), name(b), name(c)),
                    ));
                }
            }
        }
    }

    let bottom = (0..n)
        .reduce(|a, b| meet[a][b])
        .expect("non-empty lattice");
    // Join-irreducible: non-zero and not the join of its strict lower bounds.
    let mut irr = Vec::new();
    for x in 0..n {
        if x == bottom {
            continue;
        }
        let below_join = (0..n)
            .filter(|&y| y != x && leq(y, x))
            .fold(bottom, |acc, y| join[acc][y]);
        if below_join != x {
            irr.push(x);
        }
    }
    let names: Vec<&str> = irr.iter().map(|&i| name(i)).collect();
    let mut pairs = Vec::new();
    for &i in &irr {
        for &j in &irr {
            if i != j && leq(i, j) {
                pairs.push((name(i), name(j)));
            }
        }
    }
    Poset::new(&names, &pairs)
}

/// Tabulates the downset lattice of a poset as explicit join/meet tables.
/// Elements are named by their maximal antichains. Inverse direction of
/// [`recover_poset`], used for round-trip checks and substructure export.
pub fn tabulate_downsets(p: &Poset) -> Result<LatticeTables> {
    let downs = p.all_downsets()?;
    Ok(tabulate_family_masks(p, &downs)?.0)
}

/// Tabulates join/meet over an arbitrary family of downsets that is closed
/// under union and intersection. Returns the tables together with the mask
/// behind each table element.
pub(crate) fn tabulate_family_masks(
    p: &Poset,
    family: &[Mask],
) -> Result<(LatticeTables, Vec<Mask>)> {
    let pos = |m: Mask| -> Result<usize> {
        family
            .iter()
            .position(|&x| x == m)
            .ok_or_else(|| Error::Argument("family is not closed under the operations".into()))
    };
    let mut elements: Vec<String> = family.iter().map(|&m| mask_label(p, m)).collect();
    {
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elements.len() {
            // Antichain labels collided with point names; fall back to indices.
            elements = (0..family.len()).map(|i| format!("e{i}")).collect();
        }
    }
    let mut join = vec![vec![String::new(); family.len()]; family.len()];
    let mut meet = join.clone();
    for (i, &a) in family.iter().enumerate() {
        for (j, &b) in family.iter().enumerate() {
            join[i][j] = elements[pos(a | b)?].clone();
            meet[i][j] = elements[pos(a & b)?].clone();
        }
    }
    Ok((
        LatticeTables {
            elements,
            join,
            meet,
        },
        family.to_vec(),
    ))
}

/// Stable printable label for a downset: its maximal antichain.
pub(crate) fn mask_label(p: &Poset, m: Mask) -> String {
    let maxs: Vec<&str> = iter_bits(p.maximals_mask(m)).map(|i| p.name(i)).collect();
    if maxs.is_empty() {
        "0".to_string()
    } else {
        maxs.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables_2chain() -> LatticeTables {
        LatticeTables {
            elements: vec!["0".into(), "1".into()],
            join: vec![vec!["0".into(), "1".into()], vec!["1".into(), "1".into()]],
            meet: vec![vec!["0".into(), "0".into()], vec!["0".into(), "1".into()]],
        }
    }

    #[test]
    fn two_chain_gives_single_point() {
        let p = recover_poset(&tables_2chain()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.names(), ["1"]);
    }

    #[test]
    fn boolean_four_gives_two_atoms() {
        // {0, a, b, 1} with a, b incomparable.
        let e = ["0", "a", "b", "1"].map(String::from).to_vec();
        let j = |x: &str| x.to_string();
        let join = vec![
            vec![j("0"), j("a"), j("b"), j("1")],
            vec![j("a"), j("a"), j("1"), j("1")],
            vec![j("b"), j("1"), j("b"), j("1")],
            vec![j("1"), j("1"), j("1"), j("1")],
        ];
        let meet = vec![
            vec![j("0"), j("0"), j("0"), j("0")],
            vec![j("0"), j("a"), j("0"), j("a")],
            vec![j("0"), j("0"), j("b"), j("b")],
            vec![j("0"), j("a"), j("b"), j("1")],
        ];
        let p = recover_poset(&LatticeTables {
            elements: e,
            join,
            meet,
        })
        .unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.cover_indices().is_empty());
    }

    #[test]
    fn diamond_m3_is_rejected_for_distributivity() {
        // 0 < a,b,c < 1 with pairwise meets 0 and joins 1.
        let names = ["0", "a", "b", "c", "1"];
        let e: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| names.iter().position(|t| *t == s).unwrap();
        let mut join = vec![vec![String::new(); 5]; 5];
        let mut meet = vec![vec![String::new(); 5]; 5];
        for a in names {
            for b in names {
                let (j, m) = if a == b {
                    (a, a)
                } else if a == "0" {
                    (b, "0")
                } else if b == "0" {
                    (a, "0")
                } else if a == "1" || b == "1" {
                    ("1", if a == "1" { b } else { a })
                } else {
                    ("1", "0")
                };
                join[idx(a)][idx(b)] = j.to_string();
                meet[idx(a)][idx(b)] = m.to_string();
            }
        }
        let err = recover_poset(&LatticeTables {
            elements: e,
            join,
            meet,
        })
        .unwrap_err();
        match err {
            Error::Ingestion { law, .. } => assert_eq!(law, "distributivity"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trip_through_tabulation() {
        let p = Poset::new(&["x0", "y1", "y2"], &[("x0", "y1")]).unwrap();
        let t = tabulate_downsets(&p).unwrap();
        let q = recover_poset(&t).unwrap();
        assert_eq!(q.len(), p.len());
        // Same shape: three points, one cover.
        assert_eq!(q.cover_indices().len(), 1);
    }
}
