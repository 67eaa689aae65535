//! Canonical forms of structures by individualization and refinement.
//!
//! Colours are refined until stable using each element's occurrences in the
//! operation tables. When the partition is not discrete, each element of the
//! first non-singleton cell is individualized in turn. Every leaf yields a
//! relabelling; the canonical code is the least table serialization over all
//! leaves, so isomorphic structures get equal codes.

use super::structure::{decode_cell, Structure};

/// Serialized relabelled tables plus the relabelling that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub code: Vec<usize>,
    /// `perm[old] = new`.
    pub perm: Vec<usize>,
}

pub fn canonical_form(s: &Structure) -> CanonicalForm {
    let n = s.size();
    let cells = Cells::new(s);
    let mut best: Option<CanonicalForm> = None;
    let colors = refine(&cells, vec![0; n]);
    search(s, &cells, colors, &mut best);
    best.unwrap_or(CanonicalForm {
        code: vec![n],
        perm: Vec::new(),
    })
}

/// The structure relabelled into canonical form.
pub fn canonical_structure(s: &Structure) -> (Structure, CanonicalForm) {
    let form = canonical_form(s);
    (s.permuted(&form.perm), form)
}

struct Cells {
    /// `(op, args, result)` for every table cell.
    entries: Vec<(usize, Vec<usize>, usize)>,
    /// Cell indices mentioning each element as argument or result.
    by_element: Vec<Vec<usize>>,
}

impl Cells {
    fn new(s: &Structure) -> Self {
        let n = s.size();
        let mut entries = Vec::new();
        let mut by_element = vec![Vec::new(); n];
        for (op, decl) in s.kind().ops().iter().enumerate() {
            let mut args = vec![0; decl.arity];
            for (cell, &r) in s.table(op).iter().enumerate() {
                decode_cell(n.max(1), cell, &mut args);
                let id = entries.len();
                let mut mentioned: Vec<usize> = args.iter().copied().chain([r]).collect();
                mentioned.sort_unstable();
                mentioned.dedup();
                for m in mentioned {
                    by_element[m].push(id);
                }
                entries.push((op, args.clone(), r));
            }
        }
        Cells { entries, by_element }
    }
}

fn class_count(colors: &[usize]) -> usize {
    let mut seen: Vec<usize> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Refines an ordered colouring until the number of classes is stable. New
/// colours are dense ranks of `(old colour, sorted occurrence signature)`,
/// which keeps the refinement order-preserving and isomorphism-invariant.
fn refine(cells: &Cells, mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    let mut classes = class_count(&colors);
    loop {
        if classes == n {
            return colors;
        }
        let mut signatures: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|x| {
                let mut feats: Vec<Vec<usize>> = cells.by_element[x]
                    .iter()
                    .map(|&id| {
                        let (op, args, r) = &cells.entries[id];
                        let mut f = Vec::with_capacity(2 * args.len() + 3);
                        f.push(*op);
                        for &a in args {
                            f.push(colors[a]);
                            f.push(usize::from(a == x));
                        }
                        f.push(colors[*r]);
                        f.push(usize::from(*r == x));
                        f
                    })
                    .collect();
                feats.sort_unstable();
                (colors[x], feats)
            })
            .collect();
        let mut sorted: Vec<&(usize, Vec<Vec<usize>>)> = signatures.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank = |sig: &(usize, Vec<Vec<usize>>)| sorted.binary_search(&sig).expect("present");
        let new_colors: Vec<usize> = signatures.iter().map(rank).collect();
        let new_classes = sorted.len();
        signatures.clear();
        colors = new_colors;
        if new_classes == classes {
            return colors;
        }
        classes = new_classes;
    }
}

fn encode(s: &Structure, perm: &[usize]) -> Vec<usize> {
    let n = s.size();
    let mut code = vec![n];
    for (op, decl) in s.kind().ops().iter().enumerate() {
        let t = s.table(op);
        let mut out = vec![0; t.len()];
        let mut args = vec![0; decl.arity];
        for (cell, &v) in t.iter().enumerate() {
            decode_cell(n.max(1), cell, &mut args);
            let new_cell = args.iter().fold(0, |acc, &a| acc * n + perm[a]);
            out[new_cell] = perm[v];
        }
        code.extend(out);
    }
    code
}

fn search(s: &Structure, cells: &Cells, colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
    let n = colors.len();
    if class_count(&colors) == n {
        let code = encode(s, &colors);
        if best.as_ref().is_none_or(|b| code < b.code) {
            *best = Some(CanonicalForm { code, perm: colors });
        }
        return;
    }
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1).expect("non-discrete partition");
    for v in (0..n).filter(|&x| colors[x] == target) {
        let individualized: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(x, &c)| {
                if c > target || (c == target && x != v) {
                    c + 1
                } else {
                    c
                }
            })
            .collect();
        search(s, cells, refine(cells, individualized), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::kinds;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn invariant_under_relabelling() {
        // 4-element semilattice: 0 < 1, 0 < 2, 1,2 < 3
        let join = vec![0, 1, 2, 3, 1, 1, 3, 3, 2, 3, 2, 3, 3, 3, 3, 3];
        let s = Structure::new(kinds::semilattice(), FinSet::new(4), vec![join]).unwrap();
        let reference = canonical_form(&s).code;
        for p in all_perms(4) {
            assert_eq!(canonical_form(&s.permuted(&p)).code, reference);
        }
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let chain = Structure::new(
            kinds::semilattice(),
            FinSet::new(3),
            vec![vec![0, 1, 2, 1, 1, 2, 2, 2, 2]],
        )
        .unwrap();
        let vee = Structure::new(
            kinds::semilattice(),
            FinSet::new(3),
            vec![vec![0, 2, 2, 2, 1, 2, 2, 2, 2]],
        )
        .unwrap();
        assert_ne!(canonical_form(&chain).code, canonical_form(&vee).code);
    }

    #[test]
    fn symmetric_structures() {
        let set = Structure::new(kinds::set(), FinSet::new(5), vec![]).unwrap();
        assert_eq!(canonical_form(&set).code, vec![5]);
        let empty = Structure::new(kinds::set(), FinSet::new(0), vec![]).unwrap();
        assert_eq!(canonical_form(&empty).code, vec![0]);
    }
}
