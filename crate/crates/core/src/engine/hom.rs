use std::ops::ControlFlow;
use std::sync::Arc;

use serde_json::{json, Value};

use super::structure::{decode_cell, same_kind, table_len, Structure};
use crate::error::{Error, Result};
use crate::finset::FinMap;

/// A homomorphism between two structures of one kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hom {
    dom: Arc<Structure>,
    cod: Arc<Structure>,
    map: FinMap,
}

/// An operation instance where a candidate map fails to commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomViolation {
    pub op: String,
    pub args: Vec<usize>,
    /// `f(op(args))` versus `op(f(args))`.
    pub image_of_result: usize,
    pub result_of_images: usize,
}

pub(crate) fn check_kinds(a: &Structure, b: &Structure) -> Result<()> {
    if same_kind(a.kind(), b.kind()) {
        Ok(())
    } else {
        Err(Error::pre(format!(
            "structures of kinds `{}` and `{}` cannot be related",
            a.kind().name(),
            b.kind().name()
        )))
    }
}

/// First operation instance where `map` fails to commute, if any.
pub fn hom_violation(dom: &Structure, cod: &Structure, map: &FinMap) -> Result<Option<HomViolation>> {
    check_kinds(dom, cod)?;
    if map.dom().size() != dom.size() || map.cod().size() != cod.size() {
        return Err(Error::pre("map boundaries differ from the structures' carriers"));
    }
    let n = dom.size();
    for (op_i, op) in dom.kind().ops().iter().enumerate() {
        let mut args = vec![0; op.arity];
        let mut image = vec![0; op.arity];
        for cell in 0..table_len(n, op.arity) {
            decode_cell(n, cell, &mut args);
            for (img, &a) in image.iter_mut().zip(&args) {
                *img = map.apply(a);
            }
            let lhs = map.apply(dom.table(op_i)[cell]);
            let rhs = cod.apply(op_i, &image);
            if lhs != rhs {
                return Ok(Some(HomViolation {
                    op: op.name.clone(),
                    args,
                    image_of_result: lhs,
                    result_of_images: rhs,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_morphism(dom: &Structure, cod: &Structure, map: &FinMap) -> Result<bool> {
    Ok(hom_violation(dom, cod, map)?.is_none())
}

impl Hom {
    pub fn new(dom: Arc<Structure>, cod: Arc<Structure>, map: FinMap) -> Result<Self> {
        if let Some(v) = hom_violation(&dom, &cod, &map)? {
            return Err(Error::pre(format!(
                "map does not commute with `{}` at {:?}",
                v.op, v.args
            )));
        }
        Ok(Hom { dom, cod, map })
    }

    pub fn identity(s: &Arc<Structure>) -> Self {
        Hom {
            dom: s.clone(),
            cod: s.clone(),
            map: FinMap::identity(s.carrier()),
        }
    }

    pub fn dom(&self) -> &Arc<Structure> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Structure> {
        &self.cod
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &Hom) -> Result<Hom> {
        if self.cod.as_ref() != g.dom.as_ref() {
            return Err(Error::pre("composing homomorphisms through different structures"));
        }
        Ok(Hom {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            map: self.map.then(&g.map)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!(self.map.table())
    }
}

/// Backtracking search for homomorphisms `a -> b`, assigning elements of
/// `a` in increasing order and values of `b` in increasing order.
pub(crate) struct HomSearch<'a> {
    a: &'a Structure,
    b: &'a Structure,
    /// Constraints `(op, args, result)` of `a`, bucketed by the largest
    /// element they mention.
    buckets: Vec<Vec<(usize, Vec<usize>, usize)>>,
    injective: bool,
}

impl<'a> HomSearch<'a> {
    pub fn new(a: &'a Structure, b: &'a Structure, injective: bool) -> Result<Self> {
        check_kinds(a, b)?;
        let n = a.size();
        let mut buckets = vec![Vec::new(); n];
        for (op_i, op) in a.kind().ops().iter().enumerate() {
            let mut args = vec![0; op.arity];
            for cell in 0..table_len(n, op.arity) {
                decode_cell(n, cell, &mut args);
                let result = a.table(op_i)[cell];
                let top = args.iter().copied().chain([result]).max().expect("nonempty");
                buckets[top].push((op_i, args.clone(), result));
            }
        }
        Ok(HomSearch {
            a,
            b,
            buckets,
            injective,
        })
    }

    /// Visits every homomorphism (as a value table) in lexicographic order,
    /// honouring any values pinned in `fixed`.
    pub fn run<F>(&self, fixed: &[Option<usize>], mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.a.size();
        if n == 0 {
            let _ = visit(&[]);
            return;
        }
        if self.b.size() == 0 {
            return;
        }
        let mut assign = vec![0usize; n];
        let mut used = vec![false; self.b.size()];
        let _ = self.step(0, fixed, &mut assign, &mut used, &mut visit);
    }

    fn consistent(&self, i: usize, assign: &[usize]) -> bool {
        let mut image = [0usize; 8];
        self.buckets[i].iter().all(|(op, args, result)| {
            for (slot, &a) in image.iter_mut().zip(args) {
                *slot = assign[a];
            }
            assign[*result] == self.b.apply(*op, &image[..args.len()])
        })
    }

    fn step<F>(
        &self,
        i: usize,
        fixed: &[Option<usize>],
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if i == assign.len() {
            return visit(assign);
        }
        let range = match fixed.get(i).copied().flatten() {
            Some(v) if v < self.b.size() => v..v + 1,
            Some(_) => return ControlFlow::Continue(()),
            None => 0..self.b.size(),
        };
        for v in range {
            if self.injective && used[v] {
                continue;
            }
            assign[i] = v;
            if self.consistent(i, assign) {
                used[v] = true;
                let flow = self.step(i + 1, fixed, assign, used, visit);
                used[v] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// All homomorphisms `a -> b` in lexicographic order of their value tables.
pub fn enumerate_homs(a: &Arc<Structure>, b: &Arc<Structure>) -> Result<Vec<Hom>> {
    let search = HomSearch::new(a, b, false)?;
    let mut out = Vec::new();
    search.run(&[], |table| {
        out.push(Hom {
            dom: a.clone(),
            cod: b.clone(),
            map: FinMap::new(a.carrier().clone(), b.carrier().clone(), table.to_vec()).expect("search stays in range"),
        });
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Number of homomorphisms `a -> b`.
pub fn count_homs(a: &Structure, b: &Structure) -> Result<usize> {
    let search = HomSearch::new(a, b, false)?;
    let mut count = 0;
    search.run(&[], |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

/// An isomorphism `a -> b`, if one exists. The inverse of the bijective
/// homomorphism found is checked to be a homomorphism as well.
pub fn is_isomorphic(a: &Arc<Structure>, b: &Arc<Structure>) -> Result<Option<Hom>> {
    check_kinds(a, b)?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let search = HomSearch::new(a, b, true)?;
    let mut found = None;
    search.run(&[], |table| {
        let map = FinMap::new(a.carrier().clone(), b.carrier().clone(), table.to_vec()).expect("search stays in range");
        let inverse = map.inverse().expect("injective between equal sizes");
        if is_morphism(b, a, &inverse).unwrap_or(false) {
            found = Some(map);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found.map(|map| Hom {
        dom: a.clone(),
        cod: b.clone(),
        map,
    }))
}
