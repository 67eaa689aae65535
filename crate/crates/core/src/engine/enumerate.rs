//! Enumeration of structures up to isomorphism.
//!
//! Tables are filled cell by cell by backtracking. Elements not yet mentioned
//! by any filled cell are interchangeable, so a cell only ever receives an
//! already mentioned element or the least unmentioned one. Partial tables are
//! pruned as soon as a fully defined equation instance fails. Survivors are
//! deduplicated by canonical form.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::canon::canonical_structure;
use super::structure::{cell_index, decode_cell, law_check, table_len, LawCheck, Structure};
use crate::dsl::{KindSpec, Term};
use crate::error::{Error, Result};
use crate::finset::FinSet;

/// Limits on structure enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumBudget {
    /// Largest carrier the enumerator accepts.
    pub max_carrier: usize,
    /// Search nodes allowed per carrier size.
    pub max_nodes: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_carrier: 8,
            max_nodes: 50_000_000,
        }
    }
}

type Cache = Mutex<HashMap<(KindSpec, usize), Arc<Vec<Arc<Structure>>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// One representative per isomorphism class, carriers of size `1..=max_card`,
/// sorted by size and then canonical code.
pub fn enumerate_structures(kind: &Arc<KindSpec>, max_card: usize) -> Result<Vec<Arc<Structure>>> {
    enumerate_sizes(kind, 1, max_card, EnumBudget::default())
}

/// Representatives for every carrier size in `min_card..=max_card`. Size zero
/// yields the empty structure when the signature has no constants.
pub fn enumerate_sizes(
    kind: &Arc<KindSpec>,
    min_card: usize,
    max_card: usize,
    budget: EnumBudget,
) -> Result<Vec<Arc<Structure>>> {
    if max_card > budget.max_carrier {
        return Err(Error::Budget {
            what: "enumeration carrier size",
            bound: budget.max_carrier as u64,
        });
    }
    let mut out = Vec::new();
    for n in min_card..=max_card {
        out.extend(enumerate_size(kind, n, budget)?.iter().cloned());
    }
    Ok(out)
}

/// Representatives of carrier size exactly `n` (memoized per kind and size).
pub fn enumerate_size(kind: &Arc<KindSpec>, n: usize, budget: EnumBudget) -> Result<Arc<Vec<Arc<Structure>>>> {
    if n > budget.max_carrier {
        return Err(Error::Budget {
            what: "enumeration carrier size",
            bound: budget.max_carrier as u64,
        });
    }
    let key = ((**kind).clone(), n);
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let found = Arc::new(search_size(kind, n, budget.max_nodes)?);
    Ok(cache()
        .lock()
        .expect("cache poisoned")
        .entry(key)
        .or_insert(found)
        .clone())
}

const UNSET: usize = usize::MAX;

struct Cell {
    op: usize,
    args: Vec<usize>,
    index: usize,
    /// Largest argument plus one (0 for constants).
    top: usize,
}

struct Search<'a> {
    kind: &'a Arc<KindSpec>,
    n: usize,
    cells: Vec<Cell>,
    tables: Vec<Vec<usize>>,
    /// Per operation, every place it occurs in an equation.
    occurrences: Vec<Vec<Occurrence>>,
    env: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    found: BTreeMap<Vec<usize>, Structure>,
}

fn search_size(kind: &Arc<KindSpec>, n: usize, max_nodes: u64) -> Result<Vec<Arc<Structure>>> {
    if n == 0 {
        if kind.has_constants() {
            return Ok(Vec::new());
        }
        let tables = vec![Vec::new(); kind.ops().len()];
        return Ok(vec![Arc::new(Structure::from_parts(
            kind.clone(),
            FinSet::new(0),
            tables,
        ))]);
    }
    let mut cells = Vec::new();
    for (op, decl) in kind.ops().iter().enumerate() {
        let mut args = vec![0; decl.arity];
        for index in 0..table_len(n, decl.arity) {
            decode_cell(n, index, &mut args);
            let top = args.iter().map(|a| a + 1).max().unwrap_or(0);
            cells.push(Cell {
                op,
                args: args.clone(),
                index,
                top,
            });
        }
    }
    cells.sort_by(|a, b| (a.top, a.op, &a.args).cmp(&(b.top, b.op, &b.args)));

    let mut occurrences = vec![Vec::new(); kind.ops().len()];
    for (ei, eq) in kind.equations().iter().enumerate() {
        let vars = eq.vars();
        collect_occurrences(ei, &vars, &eq.lhs, &mut occurrences);
        collect_occurrences(ei, &vars, &eq.rhs, &mut occurrences);
    }

    let mut s = Search {
        kind,
        n,
        cells,
        tables: kind.ops().iter().map(|o| vec![UNSET; table_len(n, o.arity)]).collect(),
        occurrences,
        env: vec![0; kind.vars().len()],
        nodes: 0,
        max_nodes,
        found: BTreeMap::new(),
    };
    s.descend(0, 0)?;
    Ok(s.found.into_values().map(Arc::new).collect())
}

/// Calls `visit` on every permutation of `items` (Heap's algorithm) until it
/// returns false.
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize]) -> bool) {
    let k = items.len();
    let mut c = vec![0; k];
    if !visit(items) {
        return;
    }
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            if !visit(items) {
                return;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// One occurrence `op(t1, .., tk)` inside equation `eq`. Arguments that are
/// plain variables are pinned by the cell being tested; the remaining
/// variables are enumerated.
#[derive(Clone)]
struct Occurrence {
    eq: usize,
    args: Vec<Term>,
    pinned: Vec<(usize, usize)>,
    free: Vec<usize>,
}

fn collect_occurrences(eq: usize, vars: &[usize], t: &Term, out: &mut [Vec<Occurrence>]) {
    if let Term::App(op, args) = t {
        let pinned: Vec<(usize, usize)> = args
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match a {
                Term::Var(v) => Some((i, *v)),
                Term::App(..) => None,
            })
            .collect();
        let free = vars
            .iter()
            .copied()
            .filter(|v| !pinned.iter().any(|p| p.1 == *v))
            .collect();
        out[*op].push(Occurrence {
            eq,
            args: args.clone(),
            pinned,
            free,
        });
        args.iter().for_each(|a| collect_occurrences(eq, vars, a, out));
    }
}

impl Search<'_> {
    fn descend(&mut self, p: usize, mentioned: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget {
                what: "enumeration search nodes",
                bound: self.max_nodes,
            });
        }
        if p > 0 && (p == self.cells.len() || self.cells[p].top != self.cells[p - 1].top) {
            let k = self.cells[p - 1].top;
            if k >= 2 && !self.prefix_is_minimal(p, k) {
                return Ok(());
            }
        }
        if p == self.cells.len() {
            self.leaf();
            return Ok(());
        }
        let mentioned = mentioned.max(self.cells[p].top);
        let (op, index) = (self.cells[p].op, self.cells[p].index);
        let highest = mentioned.min(self.n - 1);
        for v in 0..=highest {
            self.tables[op][index] = v;
            let now = mentioned.max(v + 1);
            if self.consistent(p, now) {
                self.descend(p + 1, now)?;
            }
        }
        self.tables[op][index] = UNSET;
        Ok(())
    }

    /// Checks the equation instances whose evaluation passes through the cell
    /// `op(args)` just filled. Any instance that became fully defined by this
    /// assignment is among them, and its variables range over mentioned
    /// elements only, since every defined cell lies inside that range.
    fn consistent(&mut self, p: usize, mentioned: usize) -> bool {
        let n = self.n;
        let tables = &self.tables;
        let (op, args) = (self.cells[p].op, &self.cells[p].args[..]);
        let apply = |o: usize, a: &[usize]| {
            let v = tables[o][cell_index(n, a)];
            (v != UNSET).then_some(v)
        };
        let env = &mut self.env;
        'occ: for occ in &self.occurrences[op] {
            for &(i, v) in &occ.pinned {
                env[v] = args[i];
            }
            for &(i, v) in &occ.pinned {
                if env[v] != args[i] {
                    continue 'occ;
                }
            }
            let eq = &self.kind.equations()[occ.eq];
            'inst: for code in 0..table_len(mentioned, occ.free.len()) {
                let mut c = code;
                for &v in occ.free.iter().rev() {
                    env[v] = c % mentioned;
                    c /= mentioned;
                }
                for (i, a) in occ.args.iter().enumerate() {
                    if matches!(a, Term::App(..)) && a.eval_partial(env, &apply) != Some(args[i]) {
                        continue 'inst;
                    }
                }
                if let (Some(l), Some(r)) = (eq.lhs.eval_partial(env, &apply), eq.rhs.eval_partial(env, &apply)) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Orderly-generation test run when every cell over `0..k` is filled (the
    /// first `end` cells). Relabels `0..k` by each permutation, renames the
    /// later elements in order of first appearance, and rejects the branch
    /// if some relabelling reads smaller in cell order. The lexicographically
    /// least labelling of every structure passes all such tests and also obeys
    /// the least-number rule, so each isomorphism class keeps a member.
    fn prefix_is_minimal(&self, end: usize, k: usize) -> bool {
        let n = self.n;
        let mut inv: Vec<usize> = (0..k).collect();
        let mut sigma = vec![0; k];
        let mut rename = vec![UNSET; n];
        let mut src = Vec::new();
        let mut minimal = true;
        for_each_permutation(&mut inv, &mut |inv| {
            for (new, &old) in inv.iter().enumerate() {
                sigma[old] = new;
            }
            rename[k..].iter_mut().for_each(|r| *r = UNSET);
            let mut next = k;
            for cell in &self.cells[..end] {
                src.clear();
                src.extend(cell.args.iter().map(|&a| inv[a]));
                let w = self.tables[cell.op][cell_index(n, &src)];
                let mapped = if w < k {
                    sigma[w]
                } else {
                    if rename[w] == UNSET {
                        rename[w] = next;
                        next += 1;
                    }
                    rename[w]
                };
                let current = self.tables[cell.op][cell.index];
                if mapped != current {
                    if mapped < current {
                        minimal = false;
                    }
                    break;
                }
            }
            minimal
        });
        minimal
    }

    fn leaf(&mut self) {
        if !matches!(law_check(self.kind, self.n, &self.tables), LawCheck::Holds) {
            return;
        }
        let s = Structure::from_parts(self.kind.clone(), FinSet::new(self.n), self.tables.clone());
        let (canon, form) = canonical_structure(&s);
        self.found.entry(form.code).or_insert(canon);
    }
}
