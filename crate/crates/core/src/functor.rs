//! Concrete functors between categories of structures.
//!
//! A [`ConcreteFunctor`] keeps carriers and underlying maps unchanged and
//! reinterprets every target operation as a source operation of the same
//! arity. The maps "from an object of the target category into the image of
//! a source object" are the target homomorphisms `x -> E(y)`.

use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::dsl::KindSpec;
use crate::engine::{
    closure, enumerate_homs, hom_violation, induced_substructure, is_morphism, is_structure, product_structure,
    sample_structures, Hom, LawCheck, Structure,
};
use crate::error::{Error, Result};
use crate::finset::{equalizer, factor_through, intersection, FinMap, Subset};
use crate::kinds;
use crate::report::{Check, Report, SampleBudget, Sampler};

/// Decides which target homomorphisms `x -> E(y)` count as admissible.
pub type MapFilter = Arc<dyn Fn(&Structure, &Structure, &FinMap) -> bool + Send + Sync>;

/// Carrier-preserving functor from structures of `source` to structures of
/// `target`.
#[derive(Clone)]
pub struct ConcreteFunctor {
    name: String,
    source: Arc<KindSpec>,
    target: Arc<KindSpec>,
    /// Source operation interpreting each target operation.
    interpretation: Vec<usize>,
    filter: Option<MapFilter>,
}

impl fmt::Debug for ConcreteFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConcreteFunctor")
            .field("name", &self.name)
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("interpretation", &self.interpretation)
            .field("filtered", &self.filter.is_some())
            .finish()
    }
}

impl ConcreteFunctor {
    /// The functor forgetting all structure, into the kind of bare sets.
    pub fn forgetful(source: &Arc<KindSpec>) -> Self {
        ConcreteFunctor {
            name: "forgetful".into(),
            source: source.clone(),
            target: kinds::set(),
            interpretation: Vec::new(),
            filter: None,
        }
    }

    /// Interprets each target operation by the source operation of the same
    /// name, unless `renames` lists it as `(target_op, source_op)`.
    pub fn inclusion(source: &Arc<KindSpec>, target: &Arc<KindSpec>, renames: &[(&str, &str)]) -> Result<Self> {
        let mut interpretation = Vec::new();
        for t in target.ops() {
            let wanted = renames
                .iter()
                .find(|(to, _)| *to == t.name)
                .map_or(t.name.as_str(), |(_, from)| *from);
            let Some(s) = source.op_index(wanted) else {
                return Err(Error::pre(format!(
                    "kind `{}` has no operation `{wanted}` to interpret `{}` of `{}`",
                    source.name(),
                    t.name,
                    target.name()
                )));
            };
            if source.ops()[s].arity != t.arity {
                return Err(Error::pre(format!(
                    "`{wanted}` has arity {} but `{}` has arity {}",
                    source.ops()[s].arity,
                    t.name,
                    t.arity
                )));
            }
            interpretation.push(s);
        }
        let name = if renames.is_empty() {
            "inclusion".to_string()
        } else {
            let pairs: Vec<String> = renames.iter().map(|(t, s)| format!("{t}={s}")).collect();
            format!("inclusion:{}", pairs.join(","))
        };
        Ok(ConcreteFunctor {
            name,
            source: source.clone(),
            target: target.clone(),
            interpretation,
            filter: None,
        })
    }

    /// Looks up a functor by name: `forgetful`, `inclusion`, or
    /// `inclusion:t1=s1,t2=s2` with explicit operation renames.
    pub fn builtin(name: &str, source: &Arc<KindSpec>, target: Option<&Arc<KindSpec>>) -> Result<Self> {
        match name {
            "forgetful" => Ok(ConcreteFunctor::forgetful(source)),
            _ if name == "inclusion" || name.starts_with("inclusion:") => {
                let target = target.ok_or_else(|| Error::pre("an inclusion functor needs a target kind"))?;
                let mut renames = Vec::new();
                if let Some(spec) = name.strip_prefix("inclusion:") {
                    for pair in spec.split(',').filter(|p| !p.is_empty()) {
                        let (t, s) = pair
                            .split_once('=')
                            .ok_or_else(|| Error::pre(format!("malformed rename `{pair}`, expected target=source")))?;
                        renames.push((t.trim(), s.trim()));
                    }
                }
                ConcreteFunctor::inclusion(source, target, &renames)
            }
            _ => Err(Error::pre(format!("unknown functor `{name}`"))),
        }
    }

    /// Restricts the admissible maps to those accepted by `filter`.
    pub fn with_filter(mut self, name: impl Into<String>, filter: MapFilter) -> Self {
        self.name = name.into();
        self.filter = Some(filter);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<KindSpec> {
        &self.source
    }

    pub fn target(&self) -> &Arc<KindSpec> {
        &self.target
    }

    fn check_source(&self, y: &Structure) -> Result<()> {
        if y.kind().as_ref() != self.source.as_ref() {
            return Err(Error::pre(format!(
                "functor `{}` expects a `{}` structure, got `{}`",
                self.name,
                self.source.name(),
                y.kind().name()
            )));
        }
        Ok(())
    }

    /// Image of an object: the same carrier with reinterpreted tables,
    /// revalidated against the target laws.
    pub fn apply(&self, y: &Structure) -> Result<Arc<Structure>> {
        self.check_source(y)?;
        let tables: Vec<Vec<usize>> = self.interpretation.iter().map(|&s| y.table(s).to_vec()).collect();
        match is_structure(&self.target, y.carrier(), &tables)? {
            LawCheck::Holds => Ok(Arc::new(
                Structure::new(self.target.clone(), y.carrier().clone(), tables).expect("laws just checked"),
            )),
            LawCheck::Fails(v) => Err(Error::IllDefinedFunctor {
                functor: self.name.clone(),
                witness: format!(
                    "image of a {}-element `{}` violates `{}` at {:?}",
                    y.size(),
                    self.source.name(),
                    v.equation_text,
                    v.assignment
                ),
            }),
        }
    }

    /// Image of a morphism: the same underlying map between the images.
    pub fn apply_hom(&self, h: &Hom) -> Result<Hom> {
        let dom = self.apply(h.dom())?;
        let cod = self.apply(h.cod())?;
        Hom::new(dom, cod, h.map().clone()).map_err(|e| Error::IllDefinedFunctor {
            functor: self.name.clone(),
            witness: format!("image of a morphism is not a morphism: {e}"),
        })
    }

    fn admits(&self, x: &Structure, y: &Structure, map: &FinMap) -> bool {
        self.filter.as_ref().is_none_or(|f| f(x, y, map))
    }

    /// Whether `map` is an admissible map `x -> E(y)`.
    pub fn is_st_morphism(&self, x: &Structure, y: &Structure, map: &FinMap) -> Result<bool> {
        let ey = self.apply(y)?;
        Ok(is_morphism(x, &ey, map)? && self.admits(x, y, map))
    }

    /// All admissible maps `x -> E(y)`, as target homomorphisms, in
    /// lexicographic order.
    pub fn st_morphisms(&self, x: &Arc<Structure>, y: &Structure) -> Result<Vec<Hom>> {
        let ey = self.apply(y)?;
        let mut homs = enumerate_homs(x, &ey)?;
        homs.retain(|h| self.admits(x, y, h.map()));
        Ok(homs)
    }
}

/// Inclusions between built-in kinds as `(source, target, functor name)`.
pub const BUILTIN_INCLUSIONS: &[(&str, &str, &str)] = &[
    ("commutative-monoid", "monoid", "inclusion"),
    (
        "bounded-semilattice",
        "commutative-monoid",
        "inclusion:unit=bot,mul=join",
    ),
];

/// The forgetful functor of every built-in kind, then the built-in inclusions.
pub fn builtin_functors() -> Vec<ConcreteFunctor> {
    let mut out: Vec<ConcreteFunctor> = kinds::BUILTIN
        .iter()
        .map(|(name, _)| ConcreteFunctor::forgetful(&kinds::by_name(name).expect("listed built-in")))
        .collect();
    for (s, t, name) in BUILTIN_INCLUSIONS {
        let s = kinds::by_name(s).expect("listed built-in");
        let t = kinds::by_name(t).expect("listed built-in");
        out.push(ConcreteFunctor::builtin(name, &s, Some(&t)).expect("built-in inclusion resolves"));
    }
    out
}

/// Largest carrier of sampled target objects in the functor checks.
const SOURCE_OBJECT_CARRIER: usize = 3;
const PRODUCT_BOUND: u128 = 4096;

struct Samples {
    xs: Vec<Arc<Structure>>,
    ys: Vec<Arc<Structure>>,
}

fn samples(e: &ConcreteFunctor, budget: &SampleBudget) -> Result<Samples> {
    Ok(Samples {
        xs: sample_structures(e.target(), budget.max_carrier.min(SOURCE_OBJECT_CARRIER))?,
        ys: sample_structures(e.source(), budget.max_carrier)?,
    })
}

fn table(h: &FinMap) -> serde_json::Value {
    json!(h.table())
}

/// Checks the four axioms relating admissible maps to morphisms, plus
/// functoriality, on sampled objects.
///
/// * `ST1`: an admissible map followed by the image of a morphism is admissible.
/// * `ST2`: the map into a product induced by admissible maps is admissible.
/// * `ST3`: an admissible map corestricted to the closure of its image is admissible.
/// * `ST3'`: a map that is admissible into each of two closed subobjects is
///   admissible into their intersection.
pub fn check_st_axioms(e: &ConcreteFunctor, budget: &SampleBudget) -> Result<Report> {
    let mut report = Report::new(format!(
        "functor axioms for {} ({} -> {})",
        e.name(),
        e.source().name(),
        e.target().name()
    ));
    let mut sampler = Sampler::new(budget);
    let Samples { xs, ys } = samples(e, budget)?;
    report.note(format!("{} target objects, {} source objects", xs.len(), ys.len()));

    let mut functoriality = Check::new("functor", "images are structures, E(id) = id and E(g.f) = E(g).E(f)");
    for y in &ys {
        match e.apply(y) {
            Ok(ey) => functoriality.expect(
                ey.carrier() == y.carrier(),
                || "image changes the carrier".into(),
                || y.to_json(),
            ),
            Err(err) => functoriality.fail(err.to_string(), y.to_json()),
        }
    }
    let pairs: Vec<(usize, usize)> = (0..ys.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect();
    let pairs = sampler.pick(&pairs);
    let mut homs_yy = Vec::new();
    for &(i, j) in &pairs {
        homs_yy.push(((i, j), enumerate_homs(&ys[i], &ys[j])?));
    }
    let homs_between = |i: usize, j: usize| homs_yy.iter().find(|(p, _)| *p == (i, j)).map(|(_, h)| h);
    for y in &ys {
        let id = Hom::identity(y);
        match e.apply_hom(&id) {
            Ok(eid) => functoriality.expect(
                *eid.map() == FinMap::identity(y.carrier()),
                || "E(id) is not the identity".into(),
                || y.to_json(),
            ),
            Err(err) => functoriality.fail(err.to_string(), y.to_json()),
        }
    }
    for &(i, j) in &pairs {
        for &(j2, k) in &pairs {
            if j2 != j {
                continue;
            }
            let (Some(fs), Some(gs)) = (homs_between(i, j), homs_between(j, k)) else {
                continue;
            };
            for f in sampler.pick_n(fs, 3) {
                for g in sampler.pick_n(gs, 3) {
                    let composite = e.apply_hom(&f.then(&g)?);
                    let separately = e.apply_hom(&f).and_then(|ef| ef.then(&e.apply_hom(&g)?));
                    match (composite, separately) {
                        (Ok(a), Ok(b)) => functoriality.expect(
                            a.map() == b.map(),
                            || "E(g.f) differs from E(g).E(f)".into(),
                            || json!({"f": table(f.map()), "g": table(g.map())}),
                        ),
                        (Err(err), _) | (_, Err(err)) => {
                            functoriality.fail(err.to_string(), json!({"f": table(f.map())}))
                        }
                    }
                }
            }
        }
    }
    report.push(functoriality);

    let xy: Vec<(usize, usize)> = (0..xs.len()).flat_map(|a| (0..ys.len()).map(move |b| (a, b))).collect();
    let xy = sampler.pick(&xy);

    // ST1
    let mut st1 = Check::new("ST1", "admissible maps followed by morphisms are admissible");
    for &(a, b) in &xy {
        let (x, y) = (&xs[a], &ys[b]);
        let phis = e.st_morphisms(x, y)?;
        for phi in sampler.pick_n(&phis, 6) {
            for (c, y2) in ys.iter().enumerate() {
                let fs = match homs_between(b, c) {
                    Some(fs) => fs.clone(),
                    None => continue,
                };
                for f in sampler.pick_n(&fs, 4) {
                    let composite = phi.map().then(f.map())?;
                    st1.expect(
                        e.is_st_morphism(x, y2, &composite)?,
                        || format!("admissible {} followed by morphism {} is not admissible", phi.map(), f.map()),
                        || json!({"x": x.to_json(), "y": y.to_json(), "y2": y2.to_json(), "phi": table(phi.map()), "f": table(f.map())}),
                    );
                }
            }
        }
    }
    report.push(st1);

    // ST2
    let mut st2 = Check::new(
        "ST2",
        "maps into products induced by admissible families are admissible",
    );
    let mut families: Vec<Vec<usize>> = vec![Vec::new()];
    families.extend((0..ys.len()).map(|i| vec![i]));
    families.extend(pairs.iter().map(|&(i, j)| vec![i, j]));
    let families = sampler.pick(&families);
    for x in &xs {
        for family in sampler.pick_n(&families, 40) {
            let factors: Vec<Arc<Structure>> = family.iter().map(|&i| ys[i].clone()).collect();
            let prod = product_structure(e.source(), factors.clone())?;
            let Ok(mat) = prod.materialize(PRODUCT_BOUND) else {
                continue;
            };
            let phi_sets = factors
                .iter()
                .map(|y| e.st_morphisms(x, y))
                .collect::<Result<Vec<_>>>()?;
            if phi_sets.iter().any(|s| s.is_empty()) {
                continue;
            }
            for _ in 0..3 {
                let choice: Vec<FinMap> = phi_sets.iter().map(|s| sampler.pick_n(s, 1)[0].map().clone()).collect();
                let carrier = prod.carrier();
                let induced: Vec<usize> = x
                    .carrier()
                    .elements()
                    .map(|p| {
                        carrier
                            .index_of(&carrier.pair_at(&choice, p))
                            .expect("tuple in product")
                    })
                    .collect();
                let induced = FinMap::new(x.carrier().clone(), mat.carrier().clone(), induced)?;
                st2.expect(
                    e.is_st_morphism(x, &mat, &induced)?,
                    || format!("induced map into the product of {family:?} is not admissible"),
                    || json!({"x": x.to_json(), "family": family, "components": choice.iter().map(table).collect::<Vec<_>>()}),
                );
            }
        }
    }
    report.push(st2);

    // ST3 and ST3'
    let mut st3 = Check::new("ST3", "corestrictions to the closure of the image are admissible");
    let mut st3p = Check::new(
        "ST3'",
        "factorizations through intersections of closed subobjects are admissible",
    );
    let mut agree = Check::new("ST3~ST3'", "ST3 and ST3' give the same verdict per sampled map");
    for &(a, b) in &xy {
        let (x, y) = (&xs[a], &ys[b]);
        let closed: Vec<Subset> = Subset::all_of(y.carrier())
            .filter(|s| crate::engine::is_closed(y, s))
            .collect();
        let phis = e.st_morphisms(x, y)?;
        for phi in sampler.pick_n(&phis, 6) {
            let cl = closure(y, &phi.map().image())?;
            let sub = induced_substructure(y, &cl)?.expect("closures are closed");
            let core = factor_through(phi.map(), &cl)
                .expect("image inside its closure")
                .retarget(x.carrier().clone(), sub.structure.carrier().clone())?;
            let ok3 = e.is_st_morphism(x, &sub.structure, &core)?;
            st3.expect(
                ok3,
                || format!("corestriction of {} to {:?} is not admissible", phi.map(), cl.members()),
                || json!({"x": x.to_json(), "y": y.to_json(), "phi": table(phi.map()), "closure": cl.members()}),
            );

            let over: Vec<&Subset> = closed.iter().filter(|s| phi.map().image().is_subset_of(s)).collect();
            let mut ok3p = true;
            let admissible_into = |s: &Subset| -> Result<bool> {
                let sub = induced_substructure(y, s)?.expect("closed");
                let m = factor_through(phi.map(), s)
                    .expect("image inside")
                    .retarget(x.carrier().clone(), sub.structure.carrier().clone())?;
                e.is_st_morphism(x, &sub.structure, &m)
            };
            let over_pairs: Vec<(usize, usize)> = (0..over.len())
                .flat_map(|i| (i..over.len()).map(move |j| (i, j)))
                .collect();
            for (i, j) in sampler.pick_n(&over_pairs, 10) {
                if !(admissible_into(over[i])? && admissible_into(over[j])?) {
                    continue;
                }
                let meet = intersection(&[over[i].clone(), over[j].clone()])?;
                let ok = admissible_into(&meet)?;
                ok3p &= ok;
                st3p.expect(
                    ok,
                    || format!("factorization of {} through {:?} is not admissible", phi.map(), meet.members()),
                    || json!({"x": x.to_json(), "y": y.to_json(), "phi": table(phi.map()), "a": over[i].members(), "b": over[j].members()}),
                );
            }
            agree.expect(
                ok3 == ok3p,
                || format!("ST3 says {ok3}, ST3' says {ok3p} for {}", phi.map()),
                || json!({"x": x.to_json(), "y": y.to_json(), "phi": table(phi.map())}),
            );
        }
    }
    report.push(st3);
    report.push(st3p);
    report.push(agree);
    Ok(report)
}

/// Checks that the functor preserves products, equalizers and intersections
/// on sampled diagrams, comparing images over the identical carrier.
pub fn check_limit_preservation(e: &ConcreteFunctor, budget: &SampleBudget) -> Result<Report> {
    let mut report = Report::new(format!("limit preservation for {}", e.name()));
    let mut sampler = Sampler::new(budget);
    let ys = sample_structures(e.source(), budget.max_carrier)?;

    let mut products = Check::new("products", "E(product) equals the product of the images");
    let mut families: Vec<Vec<usize>> = vec![Vec::new()];
    families.extend((0..ys.len()).map(|i| vec![i]));
    families.extend((0..ys.len()).flat_map(|i| (0..ys.len()).map(move |j| vec![i, j])));
    for family in sampler.pick(&families) {
        let factors: Vec<Arc<Structure>> = family.iter().map(|&i| ys[i].clone()).collect();
        let Ok(mat) = product_structure(e.source(), factors.clone())?.materialize(PRODUCT_BOUND) else {
            continue;
        };
        let images = factors.iter().map(|y| e.apply(y)).collect::<Result<Vec<_>>>()?;
        let target_prod = product_structure(e.target(), images)?.materialize(PRODUCT_BOUND)?;
        let image = e.apply(&mat)?;
        products.expect(
            *image == target_prod,
            || format!("image of the product of {family:?} differs from the product of images"),
            || json!({"family": family}),
        );
    }
    report.push(products);

    let mut equalizers = Check::new("equalizers", "E(equalizer) is the equalizer of the images");
    let mut intersections = Check::new("intersections", "E(intersection) is the intersection of the images");
    let pairs: Vec<(usize, usize)> = (0..ys.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect();
    for (i, j) in sampler.pick(&pairs) {
        let homs = enumerate_homs(&ys[i], &ys[j])?;
        let picked = sampler.pick_n(&homs, 6);
        for f in &picked {
            for g in &picked {
                let eq = equalizer(f.map(), g.map())?;
                let ef = e.apply_hom(f)?;
                let eg = e.apply_hom(g)?;
                let eq_images = equalizer(ef.map(), eg.map())?;
                let sub = induced_substructure(&ys[i], &eq)?;
                let image_sub = induced_substructure(&e.apply(&ys[i])?, &eq_images)?;
                let ok = eq == eq_images
                    && match (sub, image_sub) {
                        (Some(s), Some(t)) => *e.apply(&s.structure)? == *t.structure,
                        _ => false,
                    };
                equalizers.expect(
                    ok,
                    || format!("equalizer of {} and {} is not preserved", f.map(), g.map()),
                    || json!({"f": table(f.map()), "g": table(g.map()), "equalizer": eq.members()}),
                );
            }
        }
    }
    for y in &ys {
        let ey = e.apply(y)?;
        let closed: Vec<Subset> = Subset::all_of(y.carrier())
            .filter(|s| crate::engine::is_closed(y, s))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..closed.len())
            .flat_map(|i| (0..closed.len()).map(move |j| (i, j)))
            .collect();
        for (a, b) in sampler.pick_n(&pairs, 40) {
            let meet = intersection(&[closed[a].clone(), closed[b].clone()])?;
            let ok = match (induced_substructure(y, &meet)?, induced_substructure(&ey, &meet)?) {
                (Some(s), Some(t)) => *e.apply(&s.structure)? == *t.structure,
                _ => false,
            };
            intersections.expect(
                ok,
                || format!("intersection {:?} is not preserved", meet.members()),
                || json!({"y": y.to_json(), "a": closed[a].members(), "b": closed[b].members()}),
            );
        }
    }
    report.push(equalizers);
    report.push(intersections);
    Ok(report)
}

/// The first target morphism condition broken by a map, for diagnostics.
pub fn explain_st_failure(e: &ConcreteFunctor, x: &Structure, y: &Structure, map: &FinMap) -> Result<Option<String>> {
    let ey = e.apply(y)?;
    if let Some(v) = hom_violation(x, &ey, map)? {
        return Ok(Some(format!("`{}` does not commute at {:?}", v.op, v.args)));
    }
    if !e.admits(x, y, map) {
        return Ok(Some(format!("map {map} is excluded by functor `{}`", e.name())));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    fn chain2() -> Arc<Structure> {
        Arc::new(Structure::new(kinds::semilattice(), FinSet::new(2), vec![vec![0, 1, 1, 1]]).unwrap())
    }

    fn set(n: usize) -> Arc<Structure> {
        Arc::new(Structure::new(kinds::set(), FinSet::new(n), Vec::new()).unwrap())
    }

    #[test]
    fn forgetful_erases_structure() {
        let e = ConcreteFunctor::forgetful(&kinds::semilattice());
        let image = e.apply(&chain2()).unwrap();
        assert_eq!(image.kind().name(), "Set");
        assert_eq!(image.size(), 2);
        let h = enumerate_homs(&chain2(), &chain2()).unwrap().pop().unwrap();
        assert_eq!(e.apply_hom(&h).unwrap().map(), h.map());
    }

    #[test]
    fn st_morphism_counts() {
        let pointed = Arc::new(Structure::new(kinds::pointed(), FinSet::new(2), vec![vec![0]]).unwrap());
        let e = ConcreteFunctor::forgetful(&kinds::pointed());
        assert_eq!(e.st_morphisms(&set(1), &pointed).unwrap().len(), 2);
        let e = ConcreteFunctor::forgetful(&kinds::semilattice());
        assert_eq!(e.st_morphisms(&set(2), &chain2()).unwrap().len(), 4);
        assert_eq!(e.st_morphisms(&set(0), &chain2()).unwrap().len(), 1);
    }

    #[test]
    fn inclusion_revalidates() {
        let cm = kinds::commutative_monoid();
        let e = ConcreteFunctor::inclusion(&cm, &kinds::monoid(), &[]).unwrap();
        let z2 = Structure::new(cm, FinSet::new(2), vec![vec![0], vec![0, 1, 1, 0]]).unwrap();
        let image = e.apply(&z2).unwrap();
        assert_eq!(image.tables(), z2.tables());
        assert_eq!(image.kind().name(), "Monoid");
    }

    #[test]
    fn renamed_inclusion_and_errors() {
        let e = ConcreteFunctor::builtin(
            "inclusion:unit=bot,mul=join",
            &kinds::bounded_semilattice(),
            Some(&kinds::commutative_monoid()),
        )
        .unwrap();
        let b = Structure::new(
            kinds::bounded_semilattice(),
            FinSet::new(2),
            vec![vec![0], vec![0, 1, 1, 1]],
        )
        .unwrap();
        assert_eq!(e.apply(&b).unwrap().size(), 2);
        assert!(ConcreteFunctor::inclusion(&kinds::semilattice(), &kinds::commutative_monoid(), &[]).is_err());
        assert!(ConcreteFunctor::builtin("mystery", &kinds::set(), None).is_err());
    }

    #[test]
    fn ill_defined_images_are_reported() {
        // reading a non-commutative monoid as commutative must fail
        let m = kinds::monoid();
        let e = ConcreteFunctor::inclusion(&m, &kinds::commutative_monoid(), &[]).unwrap();
        // left-zero band with identity adjoined: 0 identity, 1 and 2 left zeros
        let table = vec![0, 1, 2, 1, 1, 1, 2, 2, 2];
        let s = Structure::new(m, FinSet::new(3), vec![vec![0], table]).unwrap();
        assert!(matches!(e.apply(&s), Err(Error::IllDefinedFunctor { .. })));
    }

    #[test]
    fn forgetful_semilattice_passes_checks() {
        let e = ConcreteFunctor::forgetful(&kinds::semilattice());
        let b = SampleBudget {
            max_carrier: 3,
            ..Default::default()
        };
        let r = check_st_axioms(&e, &b).unwrap();
        assert!(r.passed, "{}", r.summary());
        let r = check_limit_preservation(&e, &b).unwrap();
        assert!(r.passed, "{}", r.summary());
    }
}
