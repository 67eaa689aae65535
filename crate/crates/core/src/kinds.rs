//! Built-in structure kinds, shipped as DSL sources.

use std::fmt::Write;
use std::sync::Arc;

use crate::dsl::{parse_kind, KindSpec};
use crate::error::{Error, Result};

pub const SET: &str = include_str!("../kinds/set.kind");
pub const POINTED: &str = include_str!("../kinds/pointed.kind");
pub const SEMILATTICE: &str = include_str!("../kinds/semilattice.kind");
pub const BOUNDED_SEMILATTICE: &str = include_str!("../kinds/bounded_semilattice.kind");
pub const GF2_VECTOR: &str = include_str!("../kinds/gf2_vector.kind");
pub const MSET2: &str = include_str!("../kinds/mset2.kind");
pub const MONOID: &str = include_str!("../kinds/monoid.kind");
pub const COMMUTATIVE_MONOID: &str = include_str!("../kinds/commutative_monoid.kind");
pub const GROUP: &str = include_str!("../kinds/group.kind");

/// `(cli name, source)` for every built-in kind.
pub const BUILTIN: &[(&str, &str)] = &[
    ("set", SET),
    ("pointed", POINTED),
    ("semilattice", SEMILATTICE),
    ("bounded-semilattice", BOUNDED_SEMILATTICE),
    ("gf2-vector", GF2_VECTOR),
    ("mset2", MSET2),
    ("monoid", MONOID),
    ("commutative-monoid", COMMUTATIVE_MONOID),
    ("group", GROUP),
];

fn load(source: &str) -> Arc<KindSpec> {
    Arc::new(parse_kind(source).expect("built-in kind source parses"))
}

pub fn by_name(name: &str) -> Option<Arc<KindSpec>> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, src)| load(src))
}

pub fn set() -> Arc<KindSpec> {
    load(SET)
}

pub fn pointed() -> Arc<KindSpec> {
    load(POINTED)
}

pub fn semilattice() -> Arc<KindSpec> {
    load(SEMILATTICE)
}

pub fn bounded_semilattice() -> Arc<KindSpec> {
    load(BOUNDED_SEMILATTICE)
}

pub fn gf2_vector() -> Arc<KindSpec> {
    load(GF2_VECTOR)
}

pub fn mset2() -> Arc<KindSpec> {
    load(MSET2)
}

pub fn monoid() -> Arc<KindSpec> {
    load(MONOID)
}

pub fn commutative_monoid() -> Arc<KindSpec> {
    load(COMMUTATIVE_MONOID)
}

pub fn group() -> Arc<KindSpec> {
    load(GROUP)
}

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteMonoid {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::pre("monoid table must be n x n with entries below n"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::pre("monoid table has no identity"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::pre("monoid table is not associative"));
                    }
                }
            }
        }
        Ok(FiniteMonoid { names, table, identity })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// DSL source for left `M`-sets: one unary operation `act_g` per
    /// non-identity element, with `act_g(act_h(x)) = act_{gh}(x)`.
    pub fn mset_source(&self, kind_name: &str) -> String {
        let op = |g: usize| format!("act_{}", self.names[g]);
        let apply = |g: usize, inner: String| {
            if g == self.identity {
                inner
            } else {
                format!("{}({inner})", op(g))
            }
        };
        let mut s = String::new();
        let _ = writeln!(s, "kind {kind_name} {{");
        let others: Vec<usize> = (0..self.len()).filter(|&g| g != self.identity).collect();
        for &g in &others {
            let _ = writeln!(s, "  op {}/1;", op(g));
        }
        s.push_str("  vars x;\n");
        for &g in &others {
            for &h in &others {
                let lhs = apply(g, apply(h, "x".into()));
                let rhs = apply(self.mul(g, h), "x".into());
                let _ = writeln!(s, "  eq {lhs} = {rhs};");
            }
        }
        let _ = writeln!(s, "  kappa {}*n", self.len());
        s.push_str("}\n");
        s
    }

    pub fn mset_kind(&self, kind_name: &str) -> Result<Arc<KindSpec>> {
        Ok(Arc::new(parse_kind(&self.mset_source(kind_name))?))
    }

    /// `{1, e}` with `e*e = e`.
    pub fn two_element_idempotent() -> Self {
        FiniteMonoid::new(vec!["1".into(), "e".into()], vec![vec![0, 1], vec![1, 1]]).expect("valid monoid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::print_kind;

    #[test]
    fn builtins_parse_and_round_trip() {
        for (name, src) in BUILTIN {
            let k = parse_kind(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(parse_kind(&print_kind(&k)).unwrap(), k, "{name}");
        }
    }

    #[test]
    fn shipped_mset2_matches_generator() {
        let generated = FiniteMonoid::two_element_idempotent().mset_kind("MSet2").unwrap();
        assert_eq!(*generated, *mset2());
    }

    #[test]
    fn rejects_bad_monoids() {
        assert!(FiniteMonoid::new(vec!["a".into(), "b".into()], vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(FiniteMonoid::new(vec!["a".into()], vec![vec![1]]).is_err());
    }
}
