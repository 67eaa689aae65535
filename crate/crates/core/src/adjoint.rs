//! The left adjoint assembled from universal arrows, one object at a time.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde_json::json;

use crate::construct::{construct_universal, factorize, ConstructBudget, Strategy, UniversalArrowResult};
use crate::engine::{enumerate_homs, kappa, sample_structures, Cardinal, Hom, Structure};
use crate::error::{Error, Result};
use crate::finset::FinMap;
use crate::functor::ConcreteFunctor;
use crate::report::{Check, Report, SampleBudget, Sampler};

/// Largest generating object sampled by [`check_adjunction_laws`].
pub const MAX_SAMPLED_GENERATORS: usize = 2;

/// A functor together with lazily constructed universal arrows for the
/// objects it has been asked about.
pub struct Adjunction {
    functor: Arc<ConcreteFunctor>,
    budget: ConstructBudget,
    objects: RwLock<HashMap<Structure, Arc<UniversalArrowResult>>>,
}

/// The bijection between morphisms `F(x) -> y` and admissible maps
/// `x -> E(y)`, as index tables between the two enumerated sides.
#[derive(Clone, Debug)]
pub struct HomBijection {
    pub morphisms: Vec<Hom>,
    pub maps: Vec<FinMap>,
    /// `f |-> E(f) . ψ`, as an index into `maps` when it lands there.
    pub forward: Vec<Option<usize>>,
    /// `φ |-> factorize(φ)`, as an index into `morphisms` when it exists.
    pub backward: Vec<Option<usize>>,
}

impl HomBijection {
    pub fn is_bijective(&self) -> bool {
        self.morphisms.len() == self.maps.len()
            && self
                .forward
                .iter()
                .enumerate()
                .all(|(i, f)| f.is_some_and(|j| self.backward[j] == Some(i)))
            && self
                .backward
                .iter()
                .enumerate()
                .all(|(j, b)| b.is_some_and(|i| self.forward[i] == Some(j)))
    }
}

impl Adjunction {
    pub fn new(functor: Arc<ConcreteFunctor>, budget: ConstructBudget) -> Self {
        Adjunction {
            functor,
            budget,
            objects: RwLock::new(HashMap::new()),
        }
    }

    pub fn functor(&self) -> &Arc<ConcreteFunctor> {
        &self.functor
    }

    /// Stores a universal arrow for its generating object. The first value
    /// stored for an object wins; the stored value is returned.
    pub fn seed(&self, result: UniversalArrowResult) -> Arc<UniversalArrowResult> {
        let key = (**result.source()).clone();
        let mut objects = self.objects.write().expect("adjunction cache poisoned");
        objects.entry(key).or_insert_with(|| Arc::new(result)).clone()
    }

    /// `F(x)` with its unit, constructed with the kappa strategy on first use.
    pub fn left_on_object(&self, x: &Arc<Structure>) -> Result<Arc<UniversalArrowResult>> {
        if let Some(hit) = self.objects.read().expect("adjunction cache poisoned").get(x.as_ref()) {
            return Ok(hit.clone());
        }
        let result = construct_universal(&self.functor, x, &Strategy::Kappa, &self.budget)?;
        Ok(self.seed(result))
    }

    /// The unit component `ψ_x: x -> E(F(x))`.
    pub fn unit(&self, x: &Arc<Structure>) -> Result<FinMap> {
        Ok(self.left_on_object(x)?.psi.clone())
    }

    /// `F(g): F(x) -> F(x′)` for a target morphism `g: x -> x′`, the
    /// factorization of `ψ_x′ . g` through `ψ_x`.
    pub fn left_on_morphism(&self, g: &Hom) -> Result<Hom> {
        let from = self.left_on_object(g.dom())?;
        let to = self.left_on_object(g.cod())?;
        let phi = g.map().then(&to.psi)?;
        factorize(&self.functor, &from, &to.object, &phi)
    }

    /// The counit `ε_y: F(E(y)) -> y`, the factorization of the identity.
    pub fn counit(&self, y: &Arc<Structure>) -> Result<Hom> {
        let ey = self.functor.apply(y)?;
        let r = self.left_on_object(&ey)?;
        factorize(&self.functor, &r, y, &FinMap::identity(y.carrier()))
    }

    pub fn hom_bijection(&self, x: &Arc<Structure>, y: &Arc<Structure>) -> Result<HomBijection> {
        let r = self.left_on_object(x)?;
        let morphisms = enumerate_homs(&r.object, y)?;
        let maps: Vec<FinMap> = self
            .functor
            .st_morphisms(x, y)?
            .into_iter()
            .map(|h| h.map().clone())
            .collect();
        let map_index: HashMap<&[usize], usize> = maps.iter().enumerate().map(|(i, m)| (m.table(), i)).collect();
        let hom_index: HashMap<&[usize], usize> = morphisms
            .iter()
            .enumerate()
            .map(|(i, h)| (h.map().table(), i))
            .collect();
        let forward = morphisms
            .iter()
            .map(|f| {
                let along = r.psi.then(f.map())?;
                Ok(map_index.get(along.table()).copied())
            })
            .collect::<Result<Vec<_>>>()?;
        let backward = maps
            .iter()
            .map(|phi| match factorize(&self.functor, &r, y, phi) {
                Ok(f) => Ok(hom_index.get(f.map().table()).copied()),
                Err(Error::NoFactorization(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HomBijection {
            morphisms,
            maps,
            forward,
            backward,
        })
    }
}

fn failure_message(e: &Error) -> String {
    e.to_string()
}

/// Checks the hom-set bijection, its naturality in both variables,
/// functoriality of `F`, naturality of the unit, and both triangle identities
/// on sampled objects.
pub fn check_adjunction_laws(adj: &Adjunction, budget: &SampleBudget) -> Result<Report> {
    let e = adj.functor().clone();
    let mut report = Report::new(format!(
        "adjunction laws for {} ({} -> {})",
        e.name(),
        e.source().name(),
        e.target().name()
    ));
    let mut sampler = Sampler::new(budget);
    let xs = sample_structures(e.target(), budget.max_carrier.min(MAX_SAMPLED_GENERATORS))?;
    let ys = sample_structures(e.source(), budget.max_carrier)?;
    report.note(format!("{} generating objects, {} targets", xs.len(), ys.len()));

    let mut cardinality = Check::new("cardinality", "|T(F x, y)| = |S(x, E y)|");
    let mut bijection = Check::new("bijection", "forward and backward maps are mutually inverse");
    let mut nat_y = Check::new("naturality-y", "factorize(E(h) . phi) = h . factorize(phi)");
    let mut nat_x = Check::new("naturality-x", "factorize(phi . g) = factorize(phi) . F(g)");
    let mut functoriality = Check::new("functoriality", "F(id) = id and F(g2 . g1) = F(g2) . F(g1)");
    let mut unit_nat = Check::new("unit-naturality", "F(g) . psi_x = psi_x2 . g");
    let mut triangle_unit = Check::new("triangle-unit", "factorize(psi_x) is the identity of F(x)");
    let mut triangle_counit = Check::new("triangle-counit", "E(eps_y) . psi_(E y) is the identity of E(y)");

    for x in &xs {
        let r = adj.left_on_object(x)?;
        match factorize(&e, &r, &r.object, &r.psi) {
            Ok(f) => triangle_unit.expect(
                *f.map() == FinMap::identity(r.object.carrier()),
                || format!("factorizing psi over {} generators is not the identity", x.size()),
                || json!({"x": x.to_json(), "f": f.map().table()}),
            ),
            Err(err) => triangle_unit.fail(failure_message(&err), json!({"x": x.to_json(), "psi": r.psi.table()})),
        }
        for y in &ys {
            let b = adj.hom_bijection(x, y)?;
            cardinality.expect(
                b.morphisms.len() == b.maps.len(),
                || format!("{} morphisms against {} maps", b.morphisms.len(), b.maps.len()),
                || json!({"x": x.to_json(), "y": y.to_json()}),
            );
            bijection.expect(
                b.is_bijective(),
                || "hom-set correspondence is not a bijection".into(),
                || json!({"x": x.to_json(), "y": y.to_json(), "forward": b.forward, "backward": b.backward}),
            );
        }
    }

    // naturality in y
    let (nx, ny) = (xs.len(), ys.len());
    let xy: Vec<(usize, usize, usize)> = (0..nx)
        .flat_map(|a| (0..ny).flat_map(move |b| (0..ny).map(move |c| (a, b, c))))
        .collect();
    for (a, b, c) in sampler.pick(&xy) {
        let (x, y, y2) = (&xs[a], &ys[b], &ys[c]);
        let r = adj.left_on_object(x)?;
        let hs = enumerate_homs(y, y2)?;
        let phis = e.st_morphisms(x, y)?;
        for h in sampler.pick_n(&hs, 3) {
            for phi in sampler.pick_n(&phis, 3) {
                let lhs = phi.map().then(h.map()).and_then(|m| factorize(&e, &r, y2, &m));
                let rhs = factorize(&e, &r, y, phi.map()).and_then(|f| f.then(&h));
                match (lhs, rhs) {
                    (Ok(l), Ok(rr)) => nat_y.expect(
                        l.map() == rr.map(),
                        || "naturality square in y does not commute".into(),
                        || json!({"phi": phi.map().table(), "h": h.map().table()}),
                    ),
                    (Err(err), _) | (_, Err(err)) => {
                        nat_y.fail(failure_message(&err), json!({"phi": phi.map().table()}))
                    }
                }
            }
        }
    }

    // naturality in x, functoriality, unit naturality
    let xx: Vec<(usize, usize)> = (0..xs.len()).flat_map(|a| (0..xs.len()).map(move |b| (a, b))).collect();
    for &(a, b) in &xx {
        let (x2, x) = (&xs[a], &xs[b]);
        let gs = enumerate_homs(x2, x)?;
        for g in sampler.pick_n(&gs, 4) {
            let fg = match adj.left_on_morphism(&g) {
                Ok(fg) => fg,
                Err(err) => {
                    functoriality.fail(failure_message(&err), json!({"g": g.map().table()}));
                    continue;
                }
            };
            let r2 = adj.left_on_object(x2)?;
            let r = adj.left_on_object(x)?;
            let lhs = r2.psi.then(fg.map())?;
            let rhs = g.map().then(&r.psi)?;
            unit_nat.expect(
                lhs == rhs,
                || format!("unit is not natural along {}", g.map()),
                || json!({"g": g.map().table(), "F(g)": fg.map().table()}),
            );
            for y in sampler.pick_n(&ys, 4) {
                for phi in sampler.pick_n(&e.st_morphisms(x, &y)?, 3) {
                    let lhs = g.map().then(phi.map()).and_then(|m| factorize(&e, &r2, &y, &m));
                    let rhs = factorize(&e, &r, &y, phi.map()).and_then(|f| fg.then(&f));
                    match (lhs, rhs) {
                        (Ok(l), Ok(rr)) => nat_x.expect(
                            l.map() == rr.map(),
                            || "naturality square in x does not commute".into(),
                            || json!({"g": g.map().table(), "phi": phi.map().table()}),
                        ),
                        (Err(err), _) | (_, Err(err)) => {
                            nat_x.fail(failure_message(&err), json!({"g": g.map().table()}))
                        }
                    }
                }
            }
        }
    }
    for x in &xs {
        let id = Hom::identity(x);
        match adj.left_on_morphism(&id) {
            Ok(f) => functoriality.expect(
                *f.map() == FinMap::identity(f.dom().carrier()),
                || "F(id) is not the identity".into(),
                || json!({"x": x.to_json()}),
            ),
            Err(err) => functoriality.fail(failure_message(&err), json!({"x": x.to_json()})),
        }
    }
    let triples: Vec<(usize, usize, usize)> = (0..nx)
        .flat_map(|a| (0..nx).flat_map(move |b| (0..nx).map(move |c| (a, b, c))))
        .collect();
    for (a, b, c) in sampler.pick(&triples) {
        let g1s = enumerate_homs(&xs[a], &xs[b])?;
        let g2s = enumerate_homs(&xs[b], &xs[c])?;
        for g1 in sampler.pick_n(&g1s, 2) {
            for g2 in sampler.pick_n(&g2s, 2) {
                let whole = g1.then(&g2).and_then(|g| adj.left_on_morphism(&g));
                let parts = adj
                    .left_on_morphism(&g1)
                    .and_then(|f1| f1.then(&adj.left_on_morphism(&g2)?));
                match (whole, parts) {
                    (Ok(w), Ok(p)) => functoriality.expect(
                        w.map() == p.map(),
                        || "F does not preserve composition".into(),
                        || json!({"g1": g1.map().table(), "g2": g2.map().table()}),
                    ),
                    (Err(err), _) | (_, Err(err)) => {
                        functoriality.fail(failure_message(&err), json!({"g1": g1.map().table()}))
                    }
                }
            }
        }
    }

    // counit triangle, where F(E(y)) stays within the enumeration budget
    let mut skipped = 0;
    for y in &ys {
        let bound = kappa(e.source(), Cardinal::Finite(y.size()))?;
        if bound > Cardinal::Finite(adj.budget.enumeration.max_carrier) {
            skipped += 1;
            continue;
        }
        let ey = e.apply(y)?;
        let r = adj.left_on_object(&ey)?;
        match adj.counit(y) {
            Ok(eps) => {
                let round = r.psi.then(eps.map())?;
                triangle_counit.expect(
                    round == FinMap::identity(y.carrier()),
                    || format!("counit triangle fails on a {}-element structure", y.size()),
                    || json!({"y": y.to_json(), "eps": eps.map().table()}),
                );
            }
            Err(err) => triangle_counit.fail(failure_message(&err), json!({"y": y.to_json()})),
        }
    }
    if skipped > 0 {
        report.note(format!(
            "counit triangle skipped for {skipped} targets whose free object exceeds the enumeration budget"
        ));
    }

    for c in [
        cardinality,
        bijection,
        nat_y,
        nat_x,
        functoriality,
        unit_nat,
        triangle_unit,
        triangle_counit,
    ] {
        report.push(c);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::kinds;

    fn set(n: usize) -> Arc<Structure> {
        Arc::new(Structure::new(kinds::set(), FinSet::new(n), Vec::new()).unwrap())
    }

    fn adjunction(kind: &Arc<crate::dsl::KindSpec>) -> Adjunction {
        Adjunction::new(Arc::new(ConcreteFunctor::forgetful(kind)), ConstructBudget::default())
    }

    #[test]
    fn identity_maps_to_identity() {
        let adj = adjunction(&kinds::semilattice());
        let x = set(2);
        let f = adj.left_on_morphism(&Hom::identity(&x)).unwrap();
        assert_eq!(*f.map(), FinMap::identity(f.dom().carrier()));
    }

    #[test]
    fn collapsing_generators() {
        let adj = adjunction(&kinds::semilattice());
        let (x, x1) = (set(2), set(1));
        let g = Hom::new(
            x.clone(),
            x1.clone(),
            FinMap::new(FinSet::new(2), FinSet::new(1), vec![0, 0]).unwrap(),
        )
        .unwrap();
        let f = adj.left_on_morphism(&g).unwrap();
        assert_eq!(f.dom().size(), 3);
        assert_eq!(f.map().table(), &[0, 0, 0]);
    }

    #[test]
    fn memoized_objects_are_shared() {
        let adj = adjunction(&kinds::pointed());
        let a = adj.left_on_object(&set(1)).unwrap();
        let b = adj.left_on_object(&set(1)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn pointed_laws_hold() {
        let adj = adjunction(&kinds::pointed());
        let r = check_adjunction_laws(
            &adj,
            &SampleBudget {
                max_carrier: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.passed, "{}", r.summary());
        assert!(r.checks.iter().all(|c| c.cases > 0), "{}", r.summary());
    }
}
