mod common;

use std::sync::Arc;

use common::*;
use gaft::dsl::{KindSpec, Term};
use gaft::engine::{canonical_form, enumerate_size, EnumBudget, Structure};
use gaft::finset::FinSet;
use gaft::kinds;

fn eval(t: &Term, tables: &[Vec<usize>], n: usize, env: &[usize]) -> usize {
    match t {
        Term::Var(v) => env[*v],
        Term::App(op, args) => {
            let vals: Vec<usize> = args.iter().map(|a| eval(a, tables, n, env)).collect();
            tables[*op][vals.iter().fold(0, |acc, &v| acc * n + v)]
        }
    }
}

fn satisfies(kind: &KindSpec, n: usize, tables: &[Vec<usize>]) -> bool {
    let vars = kind.vars().len();
    kind.equations().iter().all(|eq| {
        tuples(n, vars)
            .iter()
            .all(|env| eval(&eq.lhs, tables, n, env) == eval(&eq.rhs, tables, n, env))
    })
}

/// Every model on `n` points, one per isomorphism class, by exhaustive search.
fn brute_classes(kind: &Arc<KindSpec>, n: usize) -> Vec<Structure> {
    let lens: Vec<usize> = kind.ops().iter().map(|o| n.pow(o.arity as u32)).collect();
    let total: usize = lens.iter().sum();
    let mut classes: Vec<Structure> = Vec::new();
    if n == 0 && kind.has_constants() {
        return classes;
    }
    for cells in tuples(n, total) {
        let mut tables = Vec::new();
        let mut at = 0;
        for &len in &lens {
            tables.push(cells[at..at + len].to_vec());
            at += len;
        }
        if !satisfies(kind, n, &tables) {
            continue;
        }
        let s = Structure::new(kind.clone(), FinSet::new(n), tables).unwrap();
        if !classes.iter().any(|c| brute_isomorphic(c, &s)) {
            classes.push(s);
        }
    }
    classes
}

#[test]
fn enumeration_matches_exhaustive_search() {
    let kinds = [
        kinds::set(),
        kinds::pointed(),
        kinds::semilattice(),
        kinds::bounded_semilattice(),
        kinds::gf2_vector(),
        kinds::mset2(),
        kinds::monoid(),
        kinds::commutative_monoid(),
        kinds::group(),
    ];
    for k in &kinds {
        for n in 0..=3 {
            let expected = brute_classes(k, n);
            let found = enumerate_size(k, n, EnumBudget::default()).unwrap();
            assert_eq!(found.len(), expected.len(), "{} on {n} points", k.name());
            for s in found.iter() {
                let matches = expected.iter().filter(|c| brute_isomorphic(c, s)).count();
                assert_eq!(matches, 1, "{} on {n} points", k.name());
            }
        }
    }
}

#[test]
fn representatives_are_canonical_and_distinct() {
    for k in [kinds::semilattice(), kinds::monoid(), kinds::mset2()] {
        let found = enumerate_size(&k, 4, EnumBudget::default()).unwrap();
        let mut codes: Vec<Vec<usize>> = found.iter().map(|s| canonical_form(s).code).collect();
        let before = codes.len();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), before, "{}", k.name());
    }
}

// Published counts of isomorphism classes, by carrier size from 1.
#[test]
fn counts_match_known_sequences() {
    let cases: [(Arc<KindSpec>, &[usize]); 5] = [
        (kinds::semilattice(), &[1, 1, 2, 5, 15, 53]),
        (kinds::monoid(), &[1, 2, 7, 35, 228]),
        (kinds::commutative_monoid(), &[1, 2, 5, 19, 78]),
        (kinds::group(), &[1, 1, 1, 2, 1, 2, 1, 5]),
        (kinds::gf2_vector(), &[1, 1, 0, 1, 0, 0, 0, 1]),
    ];
    for (k, counts) in cases {
        for (i, &c) in counts.iter().enumerate() {
            let n = i + 1;
            assert_eq!(
                enumerate_size(&k, n, EnumBudget::default()).unwrap().len(),
                c,
                "{} on {n} points",
                k.name()
            );
        }
    }
}
