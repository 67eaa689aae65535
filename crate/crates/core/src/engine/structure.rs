use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::dsl::{KindSpec, Term};
use crate::error::{Error, Result};
use crate::finset::FinSet;

/// A carrier with one operation table per signature operation.
///
/// The table of an arity-`k` operation lists its results over all `n^k`
/// argument tuples in mixed-radix order, first argument most significant.
#[derive(Clone, Debug)]
pub struct Structure {
    kind: Arc<KindSpec>,
    carrier: FinSet,
    tables: Vec<Vec<usize>>,
}

/// First equation instance that fails in a candidate structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub equation: usize,
    pub equation_text: String,
    /// `(variable, element)` pairs of the failing assignment.
    pub assignment: Vec<(String, usize)>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawCheck {
    Holds,
    Fails(LawViolation),
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        matches!(self, LawCheck::Holds)
    }
}

pub(crate) fn same_kind(a: &KindSpec, b: &KindSpec) -> bool {
    std::ptr::eq(a, b) || a == b
}

pub(crate) fn cell_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

pub(crate) fn table_len(n: usize, arity: usize) -> usize {
    n.pow(arity as u32)
}

fn check_shape(kind: &KindSpec, carrier: &FinSet, tables: &[Vec<usize>]) -> Result<()> {
    if tables.len() != kind.ops().len() {
        return Err(Error::pre(format!(
            "kind `{}` has {} operations but {} tables were given",
            kind.name(),
            kind.ops().len(),
            tables.len()
        )));
    }
    let n = carrier.size();
    for (op, table) in kind.ops().iter().zip(tables) {
        if table.len() != table_len(n, op.arity) {
            return Err(Error::pre(format!(
                "table of `{}` has {} cells, expected {}",
                op.name,
                table.len(),
                table_len(n, op.arity)
            )));
        }
        if table.iter().any(|&v| v >= n) {
            return Err(Error::pre(format!("table of `{}` leaves the carrier", op.name)));
        }
    }
    Ok(())
}

/// Checks every equation of `kind` under every variable assignment.
pub fn is_structure(kind: &KindSpec, carrier: &FinSet, tables: &[Vec<usize>]) -> Result<LawCheck> {
    check_shape(kind, carrier, tables)?;
    Ok(law_check(kind, carrier.size(), tables))
}

pub(crate) fn law_check(kind: &KindSpec, n: usize, tables: &[Vec<usize>]) -> LawCheck {
    let apply = |op: usize, args: &[usize]| Some(tables[op][cell_index(n, args)]);
    let mut env = vec![0usize; kind.vars().len()];
    for (ei, eq) in kind.equations().iter().enumerate() {
        let vars = eq.vars();
        if n == 0 && !vars.is_empty() {
            continue;
        }
        let total = table_len(n, vars.len());
        for code in 0..total {
            let mut c = code;
            for &v in vars.iter().rev() {
                env[v] = c % n.max(1);
                c /= n.max(1);
            }
            let l = eq.lhs.eval_partial(&env, &apply).expect("complete tables");
            let r = eq.rhs.eval_partial(&env, &apply).expect("complete tables");
            if l != r {
                return LawCheck::Fails(LawViolation {
                    equation: ei,
                    equation_text: format!("{} = {}", kind.display_term(&eq.lhs), kind.display_term(&eq.rhs)),
                    assignment: vars.iter().map(|&v| (kind.vars()[v].clone(), env[v])).collect(),
                    lhs: l,
                    rhs: r,
                });
            }
        }
    }
    LawCheck::Holds
}

impl Structure {
    /// Validates table shapes and all equations.
    pub fn new(kind: Arc<KindSpec>, carrier: FinSet, tables: Vec<Vec<usize>>) -> Result<Self> {
        match is_structure(&kind, &carrier, &tables)? {
            LawCheck::Holds => Ok(Structure { kind, carrier, tables }),
            LawCheck::Fails(v) => Err(Error::pre(format!(
                "tables violate `{}` at {:?}",
                v.equation_text, v.assignment
            ))),
        }
    }

    pub(crate) fn from_parts(kind: Arc<KindSpec>, carrier: FinSet, tables: Vec<Vec<usize>>) -> Self {
        debug_assert!(check_shape(&kind, &carrier, &tables).is_ok());
        Structure { kind, carrier, tables }
    }

    /// Builds from nested per-op tables given as JSON-like values.
    pub fn from_rows(kind: Arc<KindSpec>, size: usize, tables: &[Value]) -> Result<Self> {
        let flat = kind
            .ops()
            .iter()
            .zip(tables)
            .map(|(op, v)| flatten(v, op.arity))
            .collect::<Result<Vec<_>>>()?;
        if tables.len() != kind.ops().len() {
            return Err(Error::pre("one table per operation is required"));
        }
        Structure::new(kind, FinSet::new(size), flat)
    }

    pub fn kind(&self) -> &Arc<KindSpec> {
        &self.kind
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][cell_index(self.size(), args)]
    }

    /// Value of a nullary operation.
    pub fn constant(&self, op: usize) -> usize {
        self.tables[op][0]
    }

    /// Same tables on a relabelled carrier (labels are decoration).
    pub fn with_carrier(&self, carrier: FinSet) -> Result<Self> {
        if carrier.size() != self.size() {
            return Err(Error::pre("relabelling must preserve the carrier size"));
        }
        Ok(Structure {
            carrier,
            ..self.clone()
        })
    }

    /// The isomorphic copy along a bijection `perm` (old element to new).
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        let n = self.size();
        let tables = self
            .kind
            .ops()
            .iter()
            .zip(&self.tables)
            .map(|(op, t)| {
                let mut out = vec![0; t.len()];
                let mut args = vec![0; op.arity];
                for (cell, &v) in t.iter().enumerate() {
                    decode_cell(n, cell, &mut args);
                    let new_cell = args.iter().fold(0, |acc, &a| acc * n + perm[a]);
                    out[new_cell] = perm[v];
                }
                out
            })
            .collect();
        Structure {
            kind: self.kind.clone(),
            carrier: FinSet::new(n),
            tables,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut tables = Map::new();
        for (op, t) in self.kind.ops().iter().zip(&self.tables) {
            tables.insert(op.name.clone(), nest(t, self.size(), op.arity));
        }
        let mut obj = json!({
            "kind": self.kind.name(),
            "carrier": self.size(),
            "tables": tables,
        });
        if let Some(labels) = self.carrier.labels() {
            obj["labels"] = json!(labels);
        }
        obj
    }

    /// Parses `{"kind", "carrier", "tables": {op: nested}}` against a known kind.
    pub fn from_json(kind: Arc<KindSpec>, value: &Value) -> Result<Self> {
        let name = value["kind"].as_str().unwrap_or_default();
        if name != kind.name() {
            return Err(Error::pre(format!(
                "structure of kind `{name}` where `{}` was expected",
                kind.name()
            )));
        }
        let size = value["carrier"]
            .as_u64()
            .ok_or_else(|| Error::pre("structure JSON lacks a carrier size"))? as usize;
        let tables = kind
            .ops()
            .iter()
            .map(|op| {
                let v = value["tables"]
                    .get(&op.name)
                    .ok_or_else(|| Error::pre(format!("missing table for `{}`", op.name)))?;
                flatten(v, op.arity)
            })
            .collect::<Result<Vec<_>>>()?;
        let carrier = match value.get("labels") {
            Some(l) => FinSet::with_labels(serde_json::from_value::<Vec<String>>(l.clone())?)?,
            None => FinSet::new(size),
        };
        if carrier.size() != size {
            return Err(Error::pre("label count differs from carrier size"));
        }
        Structure::new(kind, carrier, tables)
    }
}

pub(crate) fn decode_cell(n: usize, mut cell: usize, args: &mut [usize]) {
    for slot in args.iter_mut().rev() {
        *slot = cell % n;
        cell /= n;
    }
}

fn nest(table: &[usize], n: usize, arity: usize) -> Value {
    if arity == 0 {
        return json!(table[0]);
    }
    if arity == 1 {
        return json!(table);
    }
    let stride = table_len(n, arity - 1);
    Value::Array(
        (0..n)
            .map(|i| nest(&table[i * stride..(i + 1) * stride], n, arity - 1))
            .collect(),
    )
}

fn flatten(v: &Value, arity: usize) -> Result<Vec<usize>> {
    if arity == 0 {
        let x = v
            .as_u64()
            .ok_or_else(|| Error::pre("constant table must be a number"))?;
        return Ok(vec![x as usize]);
    }
    let items = v
        .as_array()
        .ok_or_else(|| Error::pre("operation table must be a nested array"))?;
    let mut out = Vec::new();
    for item in items {
        out.extend(flatten(item, arity - 1)?);
    }
    Ok(out)
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.carrier.size() == other.carrier.size() && self.tables == other.tables && same_kind(&self.kind, &other.kind)
    }
}

impl Eq for Structure {}

impl Hash for Structure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.name().hash(state);
        self.carrier.size().hash(state);
        self.tables.hash(state);
    }
}

/// Evaluates a term of the structure's kind. `env[v]` assigns variable `v`.
pub fn eval_term(term: &Term, structure: &Structure, env: &[Option<usize>]) -> Result<usize> {
    let mut vars = Vec::new();
    term.collect_vars(&mut vars);
    let mut full = vec![0; term.var_bound()];
    for v in vars {
        let value = env.get(v).copied().flatten().ok_or_else(|| {
            let name = structure
                .kind()
                .vars()
                .get(v)
                .cloned()
                .unwrap_or_else(|| format!("#{v}"));
            Error::pre(format!("variable `{name}` is unbound"))
        })?;
        if value >= structure.size() {
            return Err(Error::pre(format!("assigned element {value} is outside the carrier")));
        }
        full[v] = value;
    }
    Ok(term
        .eval_partial(&full, &|op, args| Some(structure.apply(op, args)))
        .expect("bound variables"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_kind;
    use crate::kinds;

    fn chain2() -> Structure {
        Structure::new(kinds::semilattice(), FinSet::new(2), vec![vec![0, 1, 1, 1]]).unwrap()
    }

    #[test]
    fn two_chain_is_a_semilattice() {
        let k = kinds::semilattice();
        assert!(is_structure(&k, &FinSet::new(2), &[vec![0, 1, 1, 1]]).unwrap().holds());
    }

    #[test]
    fn left_projection_fails_commutativity() {
        let k = kinds::semilattice();
        let LawCheck::Fails(v) = is_structure(&k, &FinSet::new(2), &[vec![0, 0, 1, 1]]).unwrap() else {
            panic!("expected failure");
        };
        assert_eq!(v.equation, 0);
        assert_eq!(v.assignment, vec![("x".to_string(), 0), ("y".to_string(), 1)]);
    }

    #[test]
    fn empty_carrier_is_vacuous() {
        for k in [kinds::semilattice(), kinds::set(), kinds::mset2()] {
            let tables = vec![Vec::new(); k.ops().len()];
            assert!(is_structure(&k, &FinSet::new(0), &tables).unwrap().holds());
        }
    }

    #[test]
    fn malformed_tables_are_errors() {
        let k = kinds::semilattice();
        assert!(is_structure(&k, &FinSet::new(2), &[vec![0, 1, 1]]).is_err());
        assert!(is_structure(&k, &FinSet::new(2), &[]).is_err());
        assert!(is_structure(&k, &FinSet::new(2), &[vec![0, 1, 1, 2]]).is_err());
    }

    #[test]
    fn term_evaluation() {
        let s = chain2();
        let k = s.kind().clone();
        let join_xy = &k.equations()[0].lhs;
        assert_eq!(eval_term(join_xy, &s, &[Some(0), Some(1)]).unwrap(), 1);
        assert_eq!(eval_term(&Term::Var(0), &s, &[Some(1)]).unwrap(), 1);
        assert!(eval_term(join_xy, &s, &[Some(0), None]).is_err());

        let pk = parse_kind("kind P { op base/0; vars x; eq base = base; }").unwrap();
        let p = Structure::new(Arc::new(pk), FinSet::new(4), vec![vec![0]]).unwrap();
        let base = &p.kind().equations()[0].lhs;
        assert_eq!(eval_term(base, &p, &[]).unwrap(), 0);
        let x = Term::Var(0);
        assert_eq!(eval_term(&x, &p, &[Some(3)]).unwrap(), 3);
    }

    #[test]
    fn json_round_trip() {
        let s = chain2();
        let v = s.to_json();
        assert_eq!(
            v,
            json!({"kind": "Semilattice", "carrier": 2, "tables": {"join": [[0, 1], [1, 1]]}})
        );
        assert_eq!(Structure::from_json(s.kind().clone(), &v).unwrap(), s);
        let p = Structure::new(kinds::pointed(), FinSet::new(2), vec![vec![1]]).unwrap();
        assert_eq!(p.to_json()["tables"]["base"], json!(1));
        assert_eq!(Structure::from_json(p.kind().clone(), &p.to_json()).unwrap(), p);
    }

    #[test]
    fn permuting_preserves_laws() {
        let s = Structure::new(
            kinds::semilattice(),
            FinSet::new(3),
            vec![vec![0, 2, 2, 2, 1, 2, 2, 2, 2]],
        )
        .unwrap();
        let p = s.permuted(&[2, 0, 1]);
        assert!(is_structure(s.kind(), p.carrier(), p.tables()).unwrap().holds());
    }
}
