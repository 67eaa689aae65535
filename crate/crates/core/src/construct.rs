//! Construction and certification of universal arrows.
//!
//! For an object `x` of the target category, a solution set `Λ` of source
//! structures is fixed, every admissible map `φ: x -> E(z)` into a member is
//! listed (the family `Δ`), and `x` is sent into the product of all those
//! codomains by `ψ′(p) = (φ(p))_φ`. The product is never built: the universal
//! object is the closure of the image of `ψ′`, saturated coordinatewise.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::KindSpec;
use crate::engine::{
    canonical_form, closure, enumerate_homs, enumerate_sizes, induced_substructure, kappa, saturate, Cardinal,
    EnumBudget, Hom, Origin, Structure, DEFAULT_SATURATION_BUDGET,
};
use crate::error::{Error, Result};
use crate::finset::{factor_through, FinMap};
use crate::functor::{explain_st_failure, ConcreteFunctor};
use crate::report::{Check, Report};

/// How the solution set is obtained.
#[derive(Clone, Debug)]
pub enum Strategy {
    /// All source structures with carrier at most `kappa(|x|)`.
    Kappa,
    /// An explicit list of source structures.
    UserSupplied {
        description: String,
        members: Vec<Arc<Structure>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionStrategy {
    KappaBound(Cardinal),
    UserSupplied(String),
}

#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub for_object: Arc<Structure>,
    pub members: Vec<Arc<Structure>>,
    pub strategy: SolutionStrategy,
}

/// Limits for a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructBudget {
    pub enumeration: EnumBudget,
    /// Largest number of tuples the closure may reach.
    pub saturation: usize,
}

impl Default for ConstructBudget {
    fn default() -> Self {
        ConstructBudget {
            enumeration: EnumBudget::default(),
            saturation: DEFAULT_SATURATION_BUDGET,
        }
    }
}

pub fn solution_set(
    e: &ConcreteFunctor,
    x: &Arc<Structure>,
    strategy: &Strategy,
    budget: &ConstructBudget,
) -> Result<SolutionSet> {
    check_target_object(e, x)?;
    match strategy {
        Strategy::Kappa => {
            let bound = kappa(e.source(), Cardinal::Finite(x.size()))?;
            let Cardinal::Finite(k) = bound else {
                return Err(Error::NoFiniteSolutionSet {
                    kind: e.source().name().to_string(),
                    n: x.size(),
                });
            };
            let members = enumerate_sizes(e.source(), 0, k, budget.enumeration)?;
            Ok(SolutionSet {
                for_object: x.clone(),
                members,
                strategy: SolutionStrategy::KappaBound(bound),
            })
        }
        Strategy::UserSupplied { description, members } => {
            if let Some(m) = members.iter().find(|m| m.kind().as_ref() != e.source().as_ref()) {
                return Err(Error::pre(format!(
                    "solution set member of kind `{}` for functor from `{}`",
                    m.kind().name(),
                    e.source().name()
                )));
            }
            Ok(SolutionSet {
                for_object: x.clone(),
                members: members.clone(),
                strategy: SolutionStrategy::UserSupplied(description.clone()),
            })
        }
    }
}

fn check_target_object(e: &ConcreteFunctor, x: &Structure) -> Result<()> {
    if x.kind().as_ref() != e.target().as_ref() {
        return Err(Error::pre(format!(
            "generating object has kind `{}`, functor `{}` lands in `{}`",
            x.kind().name(),
            e.name(),
            e.target().name()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaEntry {
    /// Index into the solution set.
    pub member: usize,
    pub phi: FinMap,
}

/// All admissible maps from `x` into the solution set members, member by
/// member, each block in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaFamily {
    pub entries: Vec<DeltaEntry>,
}

impl DeltaFamily {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_delta(e: &ConcreteFunctor, x: &Arc<Structure>, lambda: &SolutionSet) -> Result<DeltaFamily> {
    let blocks: Vec<Vec<DeltaEntry>> = lambda
        .members
        .par_iter()
        .enumerate()
        .map(|(member, z)| {
            Ok(e.st_morphisms(x, z)?
                .into_iter()
                .map(|h| DeltaEntry {
                    member,
                    phi: h.map().clone(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(DeltaFamily {
        entries: blocks.into_iter().flatten().collect(),
    })
}

/// `ψ′` as one tuple per element of `x`; coordinate `j` belongs to the
/// `j`-th entry of `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleMap {
    pub tuples: Vec<Vec<usize>>,
}

impl TupleMap {
    /// Composite with the projection onto coordinate `j`.
    pub fn coordinate(&self, j: usize) -> Vec<usize> {
        self.tuples.iter().map(|t| t[j]).collect()
    }
}

pub fn induced_into_product(x: &Structure, delta: &DeltaFamily) -> TupleMap {
    TupleMap {
        tuples: x
            .carrier()
            .elements()
            .map(|p| delta.entries.iter().map(|d| d.phi.apply(p)).collect())
            .collect(),
    }
}

/// The closure of `im ψ′` as a structure.
#[derive(Clone, Debug)]
pub struct ClosureOfImage {
    pub object: Arc<Structure>,
    /// `ψ`, the corestriction of `ψ′`.
    pub psi: FinMap,
    /// The tuple of each element of the object.
    pub embedding: Vec<Vec<usize>>,
    /// How each element arose, indices referring to earlier elements.
    pub derivation: Vec<Origin>,
}

pub fn closure_of_image(
    e: &ConcreteFunctor,
    x: &Structure,
    lambda: &SolutionSet,
    delta: &DeltaFamily,
    psi_prime: &TupleMap,
    saturation_budget: usize,
) -> Result<ClosureOfImage> {
    let kind = e.source();
    let arities: Vec<usize> = kind.ops().iter().map(|o| o.arity).collect();
    let factors: Vec<&Structure> = delta
        .entries
        .iter()
        .map(|d| lambda.members[d.member].as_ref())
        .collect();
    let apply = |op: usize, args: &[&Vec<usize>]| -> Vec<usize> {
        let mut coords = [0usize; 8];
        factors
            .iter()
            .enumerate()
            .map(|(j, f)| {
                for (c, a) in coords.iter_mut().zip(args) {
                    *c = a[j];
                }
                f.apply(op, &coords[..args.len()])
            })
            .collect()
    };
    let sat = saturate(&arities, psi_prime.tuples.iter().cloned(), apply, saturation_budget)?;
    let m = sat.elements.len();
    let index: HashMap<&Vec<usize>, usize> = sat.elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut tables = Vec::with_capacity(arities.len());
    for (op, &k) in arities.iter().enumerate() {
        let mut args = vec![0; k];
        let len = m.pow(k as u32);
        let mut table = Vec::with_capacity(len);
        for cell in 0..len {
            let mut c = cell;
            for slot in args.iter_mut().rev() {
                *slot = c % m.max(1);
                c /= m.max(1);
            }
            let refs: Vec<&Vec<usize>> = args.iter().map(|&a| &sat.elements[a]).collect();
            let value = apply(op, &refs);
            table.push(*index.get(&value).expect("saturated set is closed"));
        }
        tables.push(table);
    }
    let object = Structure::new(kind.clone(), crate::finset::FinSet::new(m), tables)
        .map_err(|err| Error::Certification(format!("closure of the image is not a structure: {err}")))?;
    let psi = FinMap::new(
        x.carrier().clone(),
        object.carrier().clone(),
        sat.generator_positions.clone(),
    )?;
    Ok(ClosureOfImage {
        object: Arc::new(object),
        psi,
        embedding: sat.elements,
        derivation: sat.origins,
    })
}

/// Outcome of one factorization during verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationEntry {
    /// Index into the test family.
    pub target: usize,
    pub phi: Vec<usize>,
    /// The factorization, when it exists.
    pub f: Option<Vec<usize>>,
    /// Whether exactly one morphism factors `phi`.
    pub unique: bool,
}

/// A universal arrow `ψ: x -> E(object)` with its construction record.
#[derive(Clone, Debug)]
pub struct UniversalArrowResult {
    pub functor: Arc<ConcreteFunctor>,
    pub lambda: SolutionSet,
    pub delta: DeltaFamily,
    pub object: Arc<Structure>,
    pub psi: FinMap,
    pub embedding: Vec<Vec<usize>>,
    pub derivation: Vec<Origin>,
    /// Factorizations checked over the solution set.
    pub verification: Vec<VerificationEntry>,
}

impl UniversalArrowResult {
    pub fn source(&self) -> &Arc<Structure> {
        &self.lambda.for_object
    }

    /// Position of the element produced from generator `i`.
    fn generator_position(&self, i: usize) -> Option<usize> {
        self.derivation.iter().position(|o| *o == Origin::Generator(i))
    }

    /// The certificate as JSON; identical inputs give identical output.
    pub fn certificate(&self) -> Value {
        let kind = self.object.kind();
        let strategy = match &self.lambda.strategy {
            SolutionStrategy::KappaBound(k) => json!({"kappa_bound": k}),
            SolutionStrategy::UserSupplied(d) => json!({"user_supplied": d}),
        };
        let derivation: Vec<Value> = self
            .derivation
            .iter()
            .enumerate()
            .map(|(el, origin)| match origin {
                Origin::Generator(g) => json!({
                    "element": el,
                    "tuple": self.embedding[el],
                    "op": Value::Null,
                    "generator": g,
                }),
                Origin::Op { op, args } => json!({
                    "element": el,
                    "tuple": self.embedding[el],
                    "op": kind.ops()[*op].name,
                    "args": args,
                }),
            })
            .collect();
        json!({
            "functor": self.functor.name(),
            "source_kind": self.functor.source().name(),
            "target_kind": self.functor.target().name(),
            "generators": self.source().to_json(),
            "lambda": {
                "strategy": strategy,
                "members": self.lambda.members.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            },
            "delta": self.delta.entries.iter().map(|d| json!({"member": d.member, "phi": d.phi.table()})).collect::<Vec<_>>(),
            "object": self.object.to_json(),
            "psi": self.psi.table(),
            "derivation": derivation,
            "verification": self.verification,
            "test_family": "lambda",
        })
    }
}

/// Runs the whole construction and certifies the result over the solution
/// set before returning it.
pub fn construct_universal(
    e: &Arc<ConcreteFunctor>,
    x: &Arc<Structure>,
    strategy: &Strategy,
    budget: &ConstructBudget,
) -> Result<UniversalArrowResult> {
    let lambda = solution_set(e, x, strategy, budget)?;
    let delta = build_delta(e, x, &lambda)?;
    let psi_prime = induced_into_product(x, &delta);
    let closed = closure_of_image(e, x, &lambda, &delta, &psi_prime, budget.saturation)?;
    let mut result = UniversalArrowResult {
        functor: e.clone(),
        lambda,
        delta,
        object: closed.object,
        psi: closed.psi,
        embedding: closed.embedding,
        derivation: closed.derivation,
        verification: Vec::new(),
    };
    if !e.is_st_morphism(x, &result.object, &result.psi)? {
        let why = explain_st_failure(e, x, &result.object, &result.psi)?.unwrap_or_default();
        return Err(Error::Certification(format!("psi is not admissible: {why}")));
    }
    let members = result.lambda.members.clone();
    let verified = verify_universality(e, &result, &members)?;
    if !verified.report.passed {
        return Err(Error::Certification(verified.report.summary()));
    }
    result.verification = verified.entries;
    Ok(result)
}

/// The unique morphism `f: object -> y` with `E(f) . ψ = φ`.
///
/// Generators are sent to the values of `φ` and every other element is
/// evaluated along its derivation; the result is then checked to be a
/// morphism that reproduces `φ`.
pub fn factorize(e: &ConcreteFunctor, result: &UniversalArrowResult, y: &Arc<Structure>, phi: &FinMap) -> Result<Hom> {
    let x = result.source();
    if phi.dom().size() != x.size() || phi.cod().size() != y.size() {
        return Err(Error::pre("map to factor has the wrong boundary"));
    }
    if !e.is_st_morphism(x, y, phi)? {
        let why = explain_st_failure(e, x, y, phi)?.unwrap_or_default();
        return Err(Error::pre(format!("map to factor is not admissible: {why}")));
    }
    let m = result.object.size();
    let mut f = vec![usize::MAX; m];
    for (el, origin) in result.derivation.iter().enumerate() {
        f[el] = match origin {
            Origin::Generator(g) => phi.apply(*g),
            Origin::Op { op, args } => {
                let vals: Vec<usize> = args.iter().map(|&a| f[a]).collect();
                if vals.contains(&usize::MAX) {
                    return Err(Error::NoFactorization(format!(
                        "element {el} derived from undefined arguments {args:?}"
                    )));
                }
                y.apply(*op, &vals)
            }
        };
    }
    if let Some(el) = f.iter().position(|&v| v == usize::MAX) {
        return Err(Error::NoFactorization(format!("element {el} has no derivation")));
    }
    for p in x.carrier().elements() {
        let generated = result.generator_position(p).map(|g| f[g]);
        let via_psi = f[result.psi.apply(p)];
        if via_psi != phi.apply(p) || generated.is_some_and(|v| v != via_psi) {
            return Err(Error::NoFactorization(format!(
                "generator {p}: f(psi({p})) = {via_psi} but phi({p}) = {}",
                phi.apply(p)
            )));
        }
    }
    let map = FinMap::new(result.object.carrier().clone(), y.carrier().clone(), f)?;
    Hom::new(result.object.clone(), y.clone(), map).map_err(|err| Error::NoFactorization(err.to_string()))
}

/// Report plus the per-map transcript of a universality check.
#[derive(Clone, Debug)]
pub struct Universality {
    pub report: Report,
    pub entries: Vec<VerificationEntry>,
}

struct TargetOutcome {
    entries: Vec<VerificationEntry>,
    existence: Check,
    uniqueness: Check,
    generators: Check,
}

fn verify_target(
    e: &ConcreteFunctor,
    result: &UniversalArrowResult,
    t: usize,
    y: &Arc<Structure>,
) -> Result<TargetOutcome> {
    let x = result.source();
    let mut existence = Check::new("existence", "");
    let mut uniqueness = Check::new("uniqueness", "");
    let mut generators = Check::new("generators", "");
    let phis = e.st_morphisms(x, y)?;
    let homs = enumerate_homs(&result.object, y)?;
    let mut by_restriction: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, h) in homs.iter().enumerate() {
        let restricted: Vec<usize> = result.psi.table().iter().map(|&q| h.apply(q)).collect();
        by_restriction.entry(restricted).or_default().push(i);
    }
    let mut groups: Vec<(&Vec<usize>, &Vec<usize>)> = by_restriction.iter().collect();
    groups.sort();
    for (restricted, members) in groups {
        generators.expect(
            members.len() == 1,
            || format!("{} morphisms into target {t} agree on the generators {restricted:?}", members.len()),
            || json!({"target": t, "maps": members.iter().map(|&i| homs[i].map().table().to_vec()).collect::<Vec<_>>()}),
        );
    }
    let mut entries = Vec::with_capacity(phis.len());
    for phi in &phis {
        let phi_table = phi.map().table().to_vec();
        let factored = factorize(e, result, y, phi.map());
        let matching = by_restriction.get(&phi_table).map_or(&[][..], |v| v.as_slice());
        let f = match &factored {
            Ok(f) => {
                existence.case();
                Some(f.map().table().to_vec())
            }
            Err(err) => {
                existence.fail(
                    format!("no factorization of {} through target {t}: {err}", phi.map()),
                    json!({"target": t, "phi": phi_table}),
                );
                None
            }
        };
        let unique = matching.len() == 1 && f.as_deref().is_some_and(|f| homs[matching[0]].map().table() == f);
        uniqueness.expect(
            unique || (f.is_none() && matching.is_empty()),
            || format!("{} morphisms factor {} through target {t}", matching.len(), phi.map()),
            || json!({"target": t, "phi": phi_table, "f": f, "candidates": matching.iter().map(|&i| homs[i].map().table().to_vec()).collect::<Vec<_>>()}),
        );
        entries.push(VerificationEntry {
            target: t,
            phi: phi_table,
            f,
            unique,
        });
    }
    Ok(TargetOutcome {
        entries,
        existence,
        uniqueness,
        generators,
    })
}

fn merge(into: &mut Check, from: Check) {
    into.cases += from.cases;
    for w in from.witnesses {
        if into.witnesses.len() < crate::report::MAX_WITNESSES {
            into.witnesses.push(w);
        }
    }
    into.violations += from.violations;
    into.passed &= from.passed;
}

/// Checks existence and uniqueness of factorizations for every admissible
/// map into every structure of `family`, plus the internal consistency of
/// the construction record.
pub fn verify_universality(
    e: &ConcreteFunctor,
    result: &UniversalArrowResult,
    family: &[Arc<Structure>],
) -> Result<Universality> {
    let mut report = Report::new(format!(
        "universality of a {}-element {} on {} generators",
        result.object.size(),
        e.source().name(),
        result.source().size()
    ));
    report.note(format!("test family of {} structures", family.len()));

    let mut internal = Check::new(
        "internal",
        "psi is admissible and the embedding reproduces every map of the family",
    );
    let x = result.source();
    internal.expect(
        e.is_st_morphism(x, &result.object, &result.psi)?,
        || "psi is not an admissible map".into(),
        || json!({"psi": result.psi.table()}),
    );
    internal.expect(
        result.embedding.len() == result.object.size() && result.derivation.len() == result.object.size(),
        || "construction record does not cover the object".into(),
        || json!({"object": result.object.size(), "embedding": result.embedding.len()}),
    );
    if result.embedding.len() == result.object.size() {
        for (j, d) in result.delta.entries.iter().enumerate() {
            let along: Vec<usize> = x
                .carrier()
                .elements()
                .map(|p| result.embedding[result.psi.apply(p)][j])
                .collect();
            internal.expect(
                along == d.phi.table(),
                || format!("coordinate {j} of the embedding along psi differs from its map"),
                || json!({"coordinate": j, "expected": d.phi.table(), "found": along}),
            );
        }
    }
    report.push(internal);

    let outcomes: Vec<TargetOutcome> = family
        .par_iter()
        .enumerate()
        .map(|(t, y)| verify_target(e, result, t, y))
        .collect::<Result<_>>()?;
    let mut existence = Check::new("existence", "every admissible map factors through psi");
    let mut uniqueness = Check::new("uniqueness", "exactly one morphism factors each admissible map");
    let mut generators = Check::new("generators", "morphisms agreeing on the image of psi are equal");
    let mut entries = Vec::new();
    for o in outcomes {
        merge(&mut existence, o.existence);
        merge(&mut uniqueness, o.uniqueness);
        merge(&mut generators, o.generators);
        entries.extend(o.entries);
    }
    report.push(existence);
    report.push(uniqueness);
    report.push(generators);
    Ok(Universality { report, entries })
}

/// Test family: the solution set plus every source structure with carrier
/// at most `margin`, without repeating isomorphic copies.
pub fn test_family(
    kind: &Arc<KindSpec>,
    lambda: &SolutionSet,
    margin: usize,
    budget: EnumBudget,
) -> Result<Vec<Arc<Structure>>> {
    let mut family = lambda.members.clone();
    let mut seen: std::collections::HashSet<Vec<usize>> = family.iter().map(|m| canonical_form(m).code).collect();
    for s in enumerate_sizes(kind, 0, margin, budget)? {
        if seen.insert(canonical_form(&s).code) {
            family.push(s);
        }
    }
    Ok(family)
}

/// Checks that every admissible map into each target factors through a
/// solution set member via the closure of its image.
pub fn check_solset(e: &ConcreteFunctor, lambda: &SolutionSet, targets: &[Arc<Structure>]) -> Result<Report> {
    let x = &lambda.for_object;
    let mut report = Report::new(format!(
        "solution set of {} members for {} generators",
        lambda.members.len(),
        x.size()
    ));
    let codes: HashMap<Vec<usize>, usize> = lambda
        .members
        .iter()
        .enumerate()
        .rev()
        .map(|(i, m)| (canonical_form(m).code, i))
        .collect();
    let mut corestricts = Check::new(
        "corestriction",
        "maps corestrict admissibly to the closure of their image",
    );
    let mut factors = Check::new(
        "factors",
        "the closure of each image is a member and the triangle commutes",
    );
    for (t, y) in targets.iter().enumerate() {
        for phi in e.st_morphisms(x, y)? {
            let cl = closure(y, &phi.map().image())?;
            let sub = induced_substructure(y, &cl)?.expect("closures are closed");
            let core = factor_through(phi.map(), &cl)
                .expect("image inside its closure")
                .retarget(x.carrier().clone(), sub.structure.carrier().clone())?;
            let admissible = e.is_st_morphism(x, &sub.structure, &core)?;
            corestricts.expect(
                admissible,
                || format!("corestriction of {} into target {t} is not admissible", phi.map()),
                || json!({"target": t, "phi": phi.map().table(), "closure": cl.members()}),
            );
            let form = canonical_form(&sub.structure);
            let Some(&i) = codes.get(&form.code) else {
                factors.fail(
                    format!(
                        "closure of the image of {} in target {t} has {} elements and matches no member",
                        phi.map(),
                        cl.len()
                    ),
                    json!({"target": t, "phi": phi.map().table(), "closure": sub.structure.to_json()}),
                );
                continue;
            };
            // iso: closure -> member, through the shared canonical labelling
            let member = &lambda.members[i];
            let member_form = canonical_form(member);
            let mut back = vec![0; member.size()];
            for (old, &new) in member_form.perm.iter().enumerate() {
                back[new] = old;
            }
            let iso: Vec<usize> = form.perm.iter().map(|&c| back[c]).collect();
            let into_member = FinMap::new(
                x.carrier().clone(),
                member.carrier().clone(),
                core.table().iter().map(|&c| iso[c]).collect(),
            )?;
            let mut out_of_member = vec![0; member.size()];
            for (c, &mm) in iso.iter().enumerate() {
                out_of_member[mm] = cl.members()[c];
            }
            let out_map = FinMap::new(member.carrier().clone(), y.carrier().clone(), out_of_member)?;
            let f_ok = Hom::new(member.clone(), y.clone(), out_map.clone()).is_ok();
            let triangle = into_member.then(&out_map)? == *phi.map();
            let psi_ok = e.is_st_morphism(x, member, &into_member)?;
            factors.expect(
                f_ok && triangle && psi_ok,
                || format!("factorization of {} through member {i} fails (morphism {f_ok}, triangle {triangle}, admissible {psi_ok})", phi.map()),
                || json!({"target": t, "phi": phi.map().table(), "member": i}),
            );
        }
    }
    report.push(corestricts);
    report.push(factors);
    Ok(report)
}

/// The isomorphism between two universal arrows for the same object,
/// obtained by factoring each through the other. Both composites must be
/// identities.
pub fn compare_universal(e: &ConcreteFunctor, a: &UniversalArrowResult, b: &UniversalArrowResult) -> Result<Hom> {
    if a.source() != b.source() {
        return Err(Error::pre("universal arrows for different generating objects"));
    }
    let ab = factorize(e, a, &b.object, &b.psi)?;
    let ba = factorize(e, b, &a.object, &a.psi)?;
    let round_a = ab.then(&ba)?;
    let round_b = ba.then(&ab)?;
    if *round_a.map() != FinMap::identity(a.object.carrier()) || *round_b.map() != FinMap::identity(b.object.carrier())
    {
        return Err(Error::Certification(
            "cross factorizations are not mutually inverse".into(),
        ));
    }
    Ok(ab)
}
