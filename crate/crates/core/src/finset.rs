//! Finite sets with canonically indexed elements, total maps between them,
//! and the set-level limits (products, equalizers, intersections).
//!
//! Elements of a [`FinSet`] of size `n` are the indices `0..n`. Labels are
//! decoration only: boundary checks compare sizes, never labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cardinality bound below which a [`TupleProduct`] may be
/// materialized.
pub const DEFAULT_MATERIALIZE_BOUND: u128 = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinSet")]
pub struct FinSet {
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawFinSet {
    size: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawFinSet> for FinSet {
    type Error = Error;

    fn try_from(raw: RawFinSet) -> Result<Self> {
        match raw.labels {
            Some(labels) => {
                let set = FinSet::with_labels(labels)?;
                if set.size != raw.size {
                    return Err(Error::pre(format!(
                        "finite set declares size {} but carries {} labels",
                        raw.size, set.size
                    )));
                }
                Ok(set)
            }
            None => Ok(FinSet::new(raw.size)),
        }
    }
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    /// A set whose elements carry the given names, which must be pairwise
    /// distinct.
    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut sorted: Vec<&String> = labels.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::pre(format!("duplicate element label `{}`", w[0])));
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Human-readable name of an element: its label if present, else its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// A total map between finite sets, stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinMap")]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl TryFrom<RawFinMap> for FinMap {
    type Error = Error;

    fn try_from(raw: RawFinMap) -> Result<Self> {
        FinMap::new(raw.dom, raw.cod, raw.table)
    }
}

impl FinMap {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::pre(format!(
                "map table has {} entries for a domain of size {}",
                table.len(),
                dom.size()
            )));
        }
        if let Some((x, &y)) = table.iter().enumerate().find(|(_, &y)| y >= cod.size()) {
            return Err(Error::pre(format!(
                "map sends {x} to {y}, outside a codomain of size {}",
                cod.size()
            )));
        }
        Ok(FinMap { dom, cod, table })
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap {
            dom: set.clone(),
            cod: set.clone(),
            table: set.elements().collect(),
        }
    }

    /// The composite `g ∘ f` (first `f`, then `g`).
    pub fn compose(f: &FinMap, g: &FinMap) -> Result<Self> {
        if f.cod.size() != g.dom.size() {
            return Err(Error::pre(format!(
                "cannot compose: codomain of size {} meets domain of size {}",
                f.cod.size(),
                g.dom.size()
            )));
        }
        Ok(FinMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&y| g.table[y]).collect(),
        })
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &FinMap) -> Result<Self> {
        FinMap::compose(self, g)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self) -> Subset {
        Subset::from_iter_unchecked(self.cod.clone(), self.table.iter().copied())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    /// The inverse of a bijection.
    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.dom.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table,
        })
    }

    /// Same table viewed between different (equal-sized) boundary sets.
    pub fn retarget(&self, dom: FinSet, cod: FinSet) -> Result<FinMap> {
        FinMap::new(dom, cod, self.table.clone())
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, y) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, ")")
    }
}

/// A subset of a finite set, as a strictly increasing member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSubset")]
pub struct Subset {
    ambient: FinSet,
    members: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSubset {
    ambient: FinSet,
    members: Vec<usize>,
}

impl TryFrom<RawSubset> for Subset {
    type Error = Error;

    fn try_from(raw: RawSubset) -> Result<Self> {
        if raw.members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::pre("subset members must be strictly increasing"));
        }
        Subset::new(raw.ambient, raw.members)
    }
}

impl Subset {
    /// Builds a subset from any member list; duplicates are merged.
    pub fn new(ambient: FinSet, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let s = Subset::from_iter_unchecked(ambient, members);
        if let Some(&m) = s.members.last() {
            if m >= s.ambient.size() {
                return Err(Error::pre(format!(
                    "subset member {m} outside an ambient set of size {}",
                    s.ambient.size()
                )));
            }
        }
        Ok(s)
    }

    pub(crate) fn from_iter_unchecked(ambient: FinSet, members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Subset { ambient, members }
    }

    pub fn full(ambient: &FinSet) -> Self {
        Subset {
            ambient: ambient.clone(),
            members: ambient.elements().collect(),
        }
    }

    pub fn empty(ambient: &FinSet) -> Self {
        Subset {
            ambient: ambient.clone(),
            members: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &FinSet {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of an ambient element inside the subset.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// The subset as a set of its own, indexed by position.
    pub fn as_set(&self) -> FinSet {
        match self.ambient.labels() {
            Some(labels) => FinSet {
                size: self.members.len(),
                labels: Some(self.members.iter().map(|&m| labels[m].clone()).collect()),
            },
            None => FinSet::new(self.members.len()),
        }
    }

    /// Inclusion of the subset into its ambient set.
    pub fn inclusion(&self) -> FinMap {
        FinMap {
            dom: self.as_set(),
            cod: self.ambient.clone(),
            table: self.members.clone(),
        }
    }

    /// Iterates over all subsets of `ambient` (2^n of them), in binary order.
    pub fn all_of(ambient: &FinSet) -> impl Iterator<Item = Subset> + '_ {
        let n = ambient.size();
        assert!(n < usize::BITS as usize, "ambient set too large to enumerate subsets");
        (0..1usize << n).map(move |bits| Subset {
            ambient: ambient.clone(),
            members: (0..n).filter(|i| bits >> i & 1 == 1).collect(),
        })
    }
}

/// A cartesian product that stores its factors rather than its elements.
///
/// Elements are tuples with one coordinate per factor. Mixed-radix indices
/// (first factor most significant) are available whenever the cardinality
/// fits in a `u128`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleProduct {
    factors: Vec<FinSet>,
}

pub fn product(factors: Vec<FinSet>) -> TupleProduct {
    TupleProduct { factors }
}

impl TupleProduct {
    pub fn factors(&self) -> &[FinSet] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Logical cardinality, or `None` when it overflows `u128`.
    pub fn cardinality(&self) -> Option<u128> {
        if self.factors.iter().any(FinSet::is_empty) {
            return Some(0);
        }
        self.factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.size() as u128))
    }

    /// Base-10 logarithm of the cardinality (negative infinity when empty).
    pub fn log10_cardinality(&self) -> f64 {
        self.factors.iter().map(|f| (f.size() as f64).log10()).sum()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.factors.len() && tuple.iter().zip(&self.factors).all(|(&t, f)| t < f.size())
    }

    /// Projection onto factor `i`.
    pub fn project(&self, tuple: &[usize], i: usize) -> usize {
        tuple[i]
    }

    /// Projection onto factor `i` as a map out of the materialized carrier.
    pub fn projection(&self, i: usize, bound: u128) -> Result<FinMap> {
        let tuples = self.materialize(bound)?;
        FinMap::new(
            FinSet::new(tuples.len()),
            self.factors[i].clone(),
            tuples.iter().map(|t| t[i]).collect(),
        )
    }

    /// The tuple `(f_0(x), .., f_k(x))` for a family of maps with a common domain.
    pub fn pair_at(&self, maps: &[FinMap], x: usize) -> Vec<usize> {
        maps.iter().map(|m| m.apply(x)).collect()
    }

    /// Mediating map of a family into the materialized product.
    pub fn pairing(&self, maps: &[FinMap], dom: &FinSet, bound: u128) -> Result<FinMap> {
        if maps.len() != self.factors.len() {
            return Err(Error::pre("pairing needs one map per factor"));
        }
        for (m, f) in maps.iter().zip(&self.factors) {
            if m.dom().size() != dom.size() || m.cod().size() != f.size() {
                return Err(Error::pre("pairing map does not match its factor"));
            }
        }
        let card = self.checked_card(bound)?;
        let table = dom
            .elements()
            .map(|x| self.index_of(&self.pair_at(maps, x)).expect("tuple in product"))
            .collect();
        FinMap::new(dom.clone(), FinSet::new(card), table)
    }

    /// Mixed-radix index of a tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if !self.contains(tuple) {
            return None;
        }
        let mut idx: usize = 0;
        for (&t, f) in tuple.iter().zip(&self.factors) {
            idx = idx.checked_mul(f.size())?.checked_add(t)?;
        }
        Some(idx)
    }

    pub fn tuple_at(&self, mut idx: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.factors.len()];
        for (slot, f) in tuple.iter_mut().zip(&self.factors).rev() {
            *slot = idx % f.size();
            idx /= f.size();
        }
        tuple
    }

    fn checked_card(&self, bound: u128) -> Result<usize> {
        match self.cardinality() {
            Some(c) if c <= bound => Ok(c as usize),
            _ => Err(Error::Budget {
                what: "product materialization",
                bound: bound.min(u64::MAX as u128) as u64,
            }),
        }
    }

    /// All tuples in index order, refusing when the cardinality exceeds `bound`.
    pub fn materialize(&self, bound: u128) -> Result<Vec<Vec<usize>>> {
        let card = self.checked_card(bound)?;
        Ok((0..card).map(|i| self.tuple_at(i)).collect())
    }
}

/// The largest subset of the common domain on which `f` and `g` agree.
pub fn equalizer(f: &FinMap, g: &FinMap) -> Result<Subset> {
    if f.dom().size() != g.dom().size() || f.cod().size() != g.cod().size() {
        return Err(Error::pre("equalizer of maps with different boundaries"));
    }
    Ok(Subset {
        ambient: f.dom().clone(),
        members: f.dom().elements().filter(|&x| f.apply(x) == g.apply(x)).collect(),
    })
}

pub fn intersection(subsets: &[Subset]) -> Result<Subset> {
    let (first, rest) = subsets
        .split_first()
        .ok_or_else(|| Error::pre("intersection of an empty family"))?;
    if rest.iter().any(|s| s.ambient.size() != first.ambient.size()) {
        return Err(Error::pre("intersection of subsets of different sets"));
    }
    Ok(Subset {
        ambient: first.ambient.clone(),
        members: first
            .members
            .iter()
            .copied()
            .filter(|&m| rest.iter().all(|s| s.contains(m)))
            .collect(),
    })
}

/// Corestriction of `f` to `s`, present iff the image of `f` lies in `s`.
pub fn factor_through(f: &FinMap, s: &Subset) -> Option<FinMap> {
    if s.ambient.size() != f.cod().size() {
        return None;
    }
    let table = f.table().iter().map(|&y| s.position(y)).collect::<Option<Vec<_>>>()?;
    Some(FinMap {
        dom: f.dom().clone(),
        cod: s.as_set(),
        table,
    })
}
