//! Independent oracles for integration tests. Nothing here calls the engine
//! beyond reading a structure's tables.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gaft::engine::Structure;
use gaft::finset::FinSet;
use gaft::kinds;

pub fn arity_of(s: &Structure, op: usize) -> usize {
    s.kind().ops()[op].arity
}

/// Table lookup with the first argument most significant.
pub fn lookup(s: &Structure, op: usize, args: &[usize]) -> usize {
    let n = s.size();
    let idx = args.iter().fold(0, |acc, &a| acc * n + a);
    s.tables()[op][idx]
}

/// Every argument tuple of the given arity over `0..n`.
pub fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn naive_is_hom(a: &Structure, b: &Structure, map: &[usize]) -> bool {
    (0..a.kind().ops().len()).all(|op| {
        tuples(a.size(), arity_of(a, op)).iter().all(|args| {
            let image: Vec<usize> = args.iter().map(|&x| map[x]).collect();
            map[lookup(a, op, args)] == lookup(b, op, &image)
        })
    })
}

/// All functions `0..n -> 0..m` as tables.
pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    tuples(m, n)
}

pub fn brute_homs(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    all_maps(a.size(), b.size())
        .into_iter()
        .filter(|m| naive_is_hom(a, b, m))
        .collect()
}

pub fn brute_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size()
        && brute_homs(a, b)
            .iter()
            .any(|m| m.iter().collect::<BTreeSet<_>>().len() == m.len())
}

/// Fixed-point closure: apply every operation to every tuple until stable.
pub fn naive_closure(s: &Structure, z: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = z.iter().copied().collect();
    loop {
        let members: Vec<usize> = set.iter().copied().collect();
        let mut grown = set.clone();
        for op in 0..s.kind().ops().len() {
            for pos in tuples(members.len(), arity_of(s, op)) {
                let args: Vec<usize> = pos.iter().map(|&p| members[p]).collect();
                grown.insert(lookup(s, op, &args));
            }
        }
        if grown == set {
            return set;
        }
        set = grown;
    }
}

pub fn set_object(n: usize) -> Arc<Structure> {
    Arc::new(Structure::new(kinds::set(), FinSet::new(n), Vec::new()).unwrap())
}

/// Free pointed set: the generators plus a new basepoint.
pub fn free_pointed(n: usize) -> Structure {
    Structure::new(kinds::pointed(), FinSet::new(n + 1), vec![vec![n]]).unwrap()
}

/// Free semilattice: non-empty subsets of the generators under union.
pub fn free_semilattice(n: usize) -> Structure {
    let subsets: Vec<u32> = (1..(1u32 << n)).collect();
    let m = subsets.len();
    let pos = |s: u32| subsets.iter().position(|&t| t == s).unwrap();
    let mut join = Vec::with_capacity(m * m);
    for &a in &subsets {
        for &b in &subsets {
            join.push(pos(a | b));
        }
    }
    Structure::new(kinds::semilattice(), FinSet::new(m), vec![join]).unwrap()
}

/// Free GF(2)-vector space: bit vectors of length n under xor.
pub fn free_gf2(n: usize) -> Structure {
    let m = 1usize << n;
    let add = (0..m * m).map(|c| (c / m) ^ (c % m)).collect();
    Structure::new(kinds::gf2_vector(), FinSet::new(m), vec![vec![0], add]).unwrap()
}

/// Free set acted on by `{1, e}`: pairs `(g, i)` stored as `2i + g`, with
/// `g = 1` meaning `e`.
pub fn free_mset2(n: usize) -> Structure {
    let act = (0..2 * n).map(|x| (x / 2) * 2 + 1).collect();
    Structure::new(kinds::mset2(), FinSet::new(2 * n), vec![act]).unwrap()
}

/// The symmetric group on three letters as a monoid; elements are
/// permutations of `[0, 1, 2]` in lexicographic order, identity first.
pub fn s3_monoid() -> Structure {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let mut mul = Vec::new();
    for a in &perms {
        for b in &perms {
            mul.push(idx([a[b[0]], a[b[1]], a[b[2]]]));
        }
    }
    Structure::new(kinds::monoid(), FinSet::new(6), vec![vec![0], mul]).unwrap()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Quotient of a finite monoid by the smallest congruence identifying `ab`
/// with `ba`, as a commutative monoid.
pub fn abelianization(m: &Structure) -> Structure {
    let n = m.size();
    let (unit, mul) = (0, 1);
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (lookup(m, mul, &[a, b]), lookup(m, mul, &[b, a]));
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if find(&mut parent, x) != find(&mut parent, y) {
                    continue;
                }
                for z in 0..n {
                    for (p, q) in [
                        (lookup(m, mul, &[x, z]), lookup(m, mul, &[y, z])),
                        (lookup(m, mul, &[z, x]), lookup(m, mul, &[z, y])),
                    ] {
                        let (rp, rq) = (find(&mut parent, p), find(&mut parent, q));
                        if rp != rq {
                            parent[rp] = rq;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut roots: Vec<usize> = (0..n)
        .map(|x| find(&mut parent, x))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    roots.sort_unstable();
    let class = |parent: &mut Vec<usize>, x: usize| roots.iter().position(|&r| r == find(parent, x)).unwrap();
    let k = roots.len();
    let u = class(&mut parent, m.tables()[unit][0]);
    let mut table = vec![0; k * k];
    for a in 0..n {
        for b in 0..n {
            let c = class(&mut parent, lookup(m, mul, &[a, b]));
            table[class(&mut parent, a) * k + class(&mut parent, b)] = c;
        }
    }
    Structure::new(kinds::commutative_monoid(), FinSet::new(k), vec![vec![u], table]).unwrap()
}

pub fn cyclic_cmon(k: usize) -> Arc<Structure> {
    let mul = (0..k * k).map(|c| (c / k + c % k) % k).collect();
    Arc::new(Structure::new(kinds::commutative_monoid(), FinSet::new(k), vec![vec![0], mul]).unwrap())
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
