use crate::poset::{bit, iter_bits, Mask};

/// Canonical certificate of a colored poset, optionally with a tuple of
/// marked downsets pinned into the certificate.
pub(crate) struct Canonical {
    pub bytes: Vec<u8>,
    /// Vertices in certificate position order.
    #[allow(dead_code)]
    pub order: Vec<usize>,
}

/// Computes a complete isomorphism invariant: two inputs yield equal bytes
/// exactly when there is a color- and mark-preserving order isomorphism.
///
/// Iterative partition refinement on (color, neighbor class multisets)
/// followed by backtracking over the finest partition; the lexicographically
/// first certificate wins. Interchangeable points (true twins) are branched
/// only once.
pub(crate) fn canonical_labeled(below: &[Mask], colors: &[Vec<u32>], marks: &[Mask]) -> Canonical {
    let n = below.len();
    assert!(colors.len() == n);
    let width = colors.first().map_or(0, |c| c.len());
    assert!(colors.iter().all(|c| c.len() == width));

    // Fold mark membership into the per-point color so refinement, twin
    // detection and the certificate all see it.
    let mut full_colors: Vec<Vec<u32>> = colors.to_vec();
    for (p, c) in full_colors.iter_mut().enumerate() {
        for m in marks {
            c.push(u32::from(m & bit(p) != 0));
        }
    }

    if n == 0 {
        return Canonical {
            bytes: encode_certificate(below, &full_colors, marks.len()),
            order: Vec::new(),
        };
    }

    let strict_below: Vec<Mask> = (0..n).map(|i| below[i] & !bit(i)).collect();
    let mut above: Vec<Mask> = vec![0; n];
    for i in 0..n {
        for j in iter_bits(strict_below[i]) {
            above[j] |= bit(i);
        }
    }

    // Initial classes ordered by color tuple value.
    let mut palette: Vec<&Vec<u32>> = full_colors.iter().collect();
    palette.sort();
    palette.dedup();
    let init_class: Vec<u32> = full_colors
        .iter()
        .map(|c| palette.binary_search(&c).unwrap() as u32)
        .collect();

    struct Search<'a> {
        n: usize,
        strict_below: &'a [Mask],
        above: &'a [Mask],
        full_colors: &'a [Vec<u32>],
        below: &'a [Mask],
        nmarks: usize,
        best: Option<(Vec<u8>, Vec<usize>)>,
    }

    impl Search<'_> {
        fn refine(&self, class: &mut Vec<u32>) {
            loop {
                let mut keys: Vec<(Vec<u32>, usize)> = (0..self.n)
                    .map(|p| {
                        let mut k = vec![class[p]];
                        let mut lows: Vec<u32> =
                            iter_bits(self.strict_below[p]).map(|q| class[q]).collect();
                        lows.sort_unstable();
                        k.push(lows.len() as u32);
                        k.extend(lows);
                        let mut ups: Vec<u32> =
                            iter_bits(self.above[p]).map(|q| class[q]).collect();
                        ups.sort_unstable();
                        k.push(ups.len() as u32);
                        k.extend(ups);
                        (k, p)
                    })
                    .collect();
                keys.sort();
                let mut next = vec![0u32; self.n];
                let mut id = 0u32;
                for w in 0..keys.len() {
                    if w > 0 && keys[w].0 != keys[w - 1].0 {
                        id += 1;
                    }
                    next[keys[w].1] = id;
                }
                if next == *class {
                    return;
                }
                *class = next;
            }
        }

        fn cells(&self, class: &[u32]) -> Vec<Vec<usize>> {
            let max = class.iter().copied().max().unwrap_or(0) as usize;
            let mut cells = vec![Vec::new(); max + 1];
            for p in 0..self.n {
                cells[class[p] as usize].push(p);
            }
            cells
        }

        fn dfs(&mut self, class: Vec<u32>) {
            let cells = self.cells(&class);
            if let Some(cell) = cells.iter().find(|c| c.len() > 1) {
                // One branch per twin class inside the target cell.
                let mut seen: Vec<(Mask, Mask)> = Vec::new();
                let max_class = class.iter().copied().max().unwrap() + 1;
                for &v in cell {
                    let sig = (self.strict_below[v], self.above[v]);
                    if seen.contains(&sig) {
                        continue;
                    }
                    seen.push(sig);
                    let mut next = class.clone();
                    next[v] = max_class;
                    self.refine(&mut next);
                    self.dfs(next);
                }
            } else {
                let mut order: Vec<usize> = (0..self.n).collect();
                order.sort_by_key(|&p| class[p]);
                let perm_colors: Vec<Vec<u32>> =
                    order.iter().map(|&v| self.full_colors[v].clone()).collect();
                let pos_of: Vec<usize> = {
                    let mut pos = vec![0; self.n];
                    for (i, &v) in order.iter().enumerate() {
                        pos[v] = i;
                    }
                    pos
                };
                let perm_below: Vec<Mask> = order
                    .iter()
                    .map(|&v| {
                        iter_bits(self.below[v]).fold(0, |acc, q| acc | bit(pos_of[q]))
                    })
                    .collect();
                let bytes = encode_certificate(&perm_below, &perm_colors, self.nmarks);
                if self
                    .best
                    .as_ref()
                    .is_none_or(|(b, _)| bytes < *b)
                {
                    self.best = Some((bytes, order));
                }
            }
        }
    }

    let mut search = Search {
        n,
        strict_below: &strict_below,
        above: &above,
        full_colors: &full_colors,
        below,
        nmarks: marks.len(),
        best: None,
    };
    let mut class = init_class;
    search.refine(&mut class);
    search.dfs(class);
    let (bytes, order) = search.best.expect("at least one leaf");
    Canonical { bytes, order }
}

fn encode_certificate(below: &[Mask], colors: &[Vec<u32>], nmarks: usize) -> Vec<u8> {
    let n = below.len();
    let mut out = Vec::new();
    out.extend((n as u32).to_le_bytes());
    out.extend((nmarks as u32).to_le_bytes());
    let width = colors.first().map_or(0, |c| c.len());
    out.extend((width as u32).to_le_bytes());
    for c in colors {
        for v in c {
            out.extend(v.to_le_bytes());
        }
    }
    for &row in below {
        out.extend(row.to_le_bytes());
    }
    out
}
