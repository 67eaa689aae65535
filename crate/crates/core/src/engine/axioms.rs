//! Executable versions of the T-set axioms: isomorphisms and composition
//! (A1–A3), induced structures (I1, I2), equalizers, intersections and the
//! closure bound (S1–S3), and products (P1, P2).

use std::sync::Arc;

use serde_json::json;

use super::cardinal::{kappa, Cardinal};
use super::closure::{closure, corestrict, induced_substructure, is_closed};
use super::enumerate::{enumerate_sizes, EnumBudget};
use super::hom::{enumerate_homs, hom_violation, is_isomorphic, is_morphism, Hom};
use super::product::product_structure;
use super::structure::{law_check, LawCheck, Structure};
use crate::dsl::KindSpec;
use crate::error::Result;
use crate::finset::{equalizer, intersection, FinMap, Subset};
use crate::report::{Check, Report, SampleBudget, Sampler};

const PRODUCT_BOUND: u128 = 4096;

fn subsets(s: &Structure) -> Vec<Subset> {
    Subset::all_of(s.carrier()).collect()
}

fn closed_subsets(s: &Structure) -> Vec<Subset> {
    subsets(s).into_iter().filter(|z| is_closed(s, z)).collect()
}

/// Structures of carrier `0..=max` (or `1..=max` with constants).
pub(crate) fn sample_structures(kind: &Arc<KindSpec>, max_carrier: usize) -> Result<Vec<Arc<Structure>>> {
    enumerate_sizes(kind, 0, max_carrier, EnumBudget::default())
}

pub fn check_kind_axioms(kind: &Arc<KindSpec>, budget: &SampleBudget) -> Result<Report> {
    let mut report = Report::new(format!("kind axioms for {}", kind.name()));
    let mut sampler = Sampler::new(budget);
    let structures = sample_structures(kind, budget.max_carrier)?;
    report.note(format!(
        "{} isomorphism classes with carrier <= {}",
        structures.len(),
        budget.max_carrier
    ));

    let pairs: Vec<(usize, usize)> = (0..structures.len())
        .flat_map(|i| (0..structures.len()).map(move |j| (i, j)))
        .collect();
    let pairs = sampler.pick(&pairs);
    let hom_sets: Vec<((usize, usize), Vec<Hom>)> = pairs
        .iter()
        .map(|&(i, j)| Ok(((i, j), enumerate_homs(&structures[i], &structures[j])?)))
        .collect::<Result<_>>()?;
    let homs_between = |i: usize, j: usize| hom_sets.iter().find(|(p, _)| *p == (i, j)).map(|(_, h)| h);

    // A1: identities and isomorphisms onto relabelled copies are morphisms.
    let mut a1 = Check::new("A1", "every isomorphism is a morphism");
    for s in &structures {
        a1.expect(
            is_morphism(s, s, &FinMap::identity(s.carrier()))?,
            || format!("identity on a {}-element structure fails", s.size()),
            || s.to_json(),
        );
        let perm = sampler.permutation(s.size());
        let copy = Arc::new(s.permuted(&perm));
        match is_isomorphic(s, &copy)? {
            Some(iso) => a1.expect(
                is_morphism(s, &copy, iso.map())?,
                || "isomorphism fails the morphism test".into(),
                || json!({"structure": s.to_json(), "iso": iso.map().table()}),
            ),
            None => a1.expect(
                false,
                || "relabelled copy not recognised as isomorphic".into(),
                || s.to_json(),
            ),
        }
    }
    report.push(a1);

    // A2: composites of morphisms are morphisms.
    let mut a2 = Check::new("A2", "composites of morphisms are morphisms");
    let mut triples = Vec::new();
    for &(i, j) in &pairs {
        for &(j2, k) in &pairs {
            if j2 == j {
                triples.push((i, j, k));
            }
        }
    }
    for (i, j, k) in sampler.pick(&triples) {
        let (Some(fs), Some(gs)) = (homs_between(i, j), homs_between(j, k)) else {
            continue;
        };
        for f in sampler.pick_n(fs, 6) {
            for g in sampler.pick_n(gs, 6) {
                let h = f.then(&g)?;
                a2.expect(
                    is_morphism(&structures[i], &structures[k], h.map())?,
                    || "composite is not a morphism".into(),
                    || json!({"f": f.map().table(), "g": g.map().table()}),
                );
            }
        }
    }
    report.push(a2);

    // A3: a bijection is an isomorphism iff it and its inverse are morphisms.
    let mut a3 = Check::new("A3", "bijective morphisms have morphism inverses");
    for ((i, j), homs) in &hom_sets {
        for h in homs.iter().filter(|h| h.map().is_bijective()) {
            let inv = h.map().inverse().expect("bijective");
            a3.expect(
                is_morphism(&structures[*j], &structures[*i], &inv)?,
                || "inverse of a bijective morphism is not a morphism".into(),
                || json!({"map": h.map().table()}),
            );
        }
    }
    report.push(a3);

    // I1/I2: closed subsets carry induced structures.
    let mut i1 = Check::new("I1", "closed subsets carry a structure whose inclusion is a morphism");
    let mut i2 = Check::new("I2", "morphisms landing in a closed subset corestrict to morphisms");
    for (si, s) in structures.iter().enumerate() {
        for z in subsets(s) {
            let induced = induced_substructure(s, &z)?;
            let closed = is_closed(s, &z);
            i1.expect(
                induced.is_some() == closed
                    && induced.as_ref().is_none_or(|sub| {
                        law_check(kind, sub.structure.size(), sub.structure.tables()) == LawCheck::Holds
                    }),
                || {
                    format!(
                        "subset {:?} closed={closed} but induced structure disagrees",
                        z.members()
                    )
                },
                || json!({"structure": s.to_json(), "subset": z.members()}),
            );
            let Some(sub) = induced else { continue };
            for ((_, j), homs) in hom_sets.iter().filter(|((_, j), _)| *j == si) {
                debug_assert_eq!(*j, si);
                for h in homs.iter().filter(|h| h.map().table().iter().all(|&y| z.contains(y))) {
                    let ok = matches!(corestrict(h, &sub), Ok(Some(_)));
                    i2.expect(
                        ok,
                        || format!("corestriction to {:?} is not a morphism", z.members()),
                        || json!({"map": h.map().table(), "subset": z.members()}),
                    );
                }
            }
        }
    }
    report.push(i1);
    report.push(i2);

    // S1: equalizers of morphism pairs are closed.
    let mut s1 = Check::new("S1", "equalizers of morphism families are closed");
    for ((i, _), homs) in &hom_sets {
        let picked = sampler.pick_n(homs, 12);
        for f in &picked {
            for g in &picked {
                let eq = equalizer(f.map(), g.map())?;
                s1.expect(
                    is_closed(&structures[*i], &eq),
                    || format!("equalizer {:?} is not closed", eq.members()),
                    || json!({"f": f.map().table(), "g": g.map().table(), "equalizer": eq.members()}),
                );
            }
        }
    }
    report.push(s1);

    // S2: intersections of closed sets are closed; closure is the least one.
    let mut s2 = Check::new("S2", "intersections of closed subsets are closed");
    for s in &structures {
        let closed = closed_subsets(s);
        for a in &closed {
            for b in &closed {
                let meet = intersection(&[a.clone(), b.clone()])?;
                s2.expect(
                    is_closed(s, &meet),
                    || format!("intersection {:?} is not closed", meet.members()),
                    || json!({"structure": s.to_json(), "a": a.members(), "b": b.members()}),
                );
            }
        }
        for z in subsets(s) {
            let supersets: Vec<Subset> = closed.iter().filter(|c| z.is_subset_of(c)).cloned().collect();
            let least = intersection(&supersets)?;
            let cl = closure(s, &z)?;
            s2.expect(
                cl == least,
                || format!("closure of {:?} differs from the least closed superset", z.members()),
                || json!({"structure": s.to_json(), "z": z.members(), "closure": cl.members(), "least": least.members()}),
            );
        }
    }
    report.push(s2);

    // S3: card closure(Z) <= kappa(card Z).
    let mut s3 = Check::new("S3", "closures are bounded by kappa of the generating set");
    if kind.kappa_hint().is_none() {
        report.note("S3 skipped: kind has no kappa hint");
    } else {
        for s in &structures {
            for z in subsets(s) {
                let bound = kappa(kind, Cardinal::Finite(z.len()))?;
                let cl = closure(s, &z)?;
                s3.expect(
                    Cardinal::Finite(cl.len()) <= bound,
                    || {
                        format!(
                            "closure of {:?} has {} elements, kappa({}) = {bound}",
                            z.members(),
                            cl.len(),
                            z.len()
                        )
                    },
                    || json!({"structure": s.to_json(), "z": z.members(), "closure": cl.members(), "kappa": bound}),
                );
            }
        }
    }
    report.push(s3);

    // P1/P2: componentwise products.
    let mut p1 = Check::new("P1", "products satisfy the laws and projections are morphisms");
    let mut p2 = Check::new("P2", "tuple maps of morphism families are morphisms");
    let mut families: Vec<Vec<usize>> = vec![Vec::new()];
    families.extend((0..structures.len()).map(|i| vec![i]));
    families.extend(pairs.iter().map(|&(i, j)| vec![i, j]));
    for family in sampler.pick(&families) {
        let factors: Vec<Arc<Structure>> = family.iter().map(|&i| structures[i].clone()).collect();
        let prod = product_structure(kind, factors)?;
        let Ok(mat) = prod.materialize(PRODUCT_BOUND) else {
            continue;
        };
        let mat = Arc::new(mat);
        p1.expect(
            law_check(kind, mat.size(), mat.tables()) == LawCheck::Holds,
            || format!("product of {family:?} violates the laws"),
            || json!({"family": family}),
        );
        for i in 0..family.len() {
            let proj_ok = prod.projection(&mat, i).is_ok();
            p1.expect(
                proj_ok,
                || format!("projection {i} of {family:?} is not a morphism"),
                || json!({"family": family}),
            );
        }
        // P2 with every sampled source whose hom-sets into all factors are known.
        for (src, _) in structures.iter().enumerate() {
            let Some(sets) = family.iter().map(|&f| homs_between(src, f)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            if sets.iter().any(|h| h.is_empty()) {
                continue;
            }
            for _ in 0..4 {
                let choice: Vec<Hom> = sets.iter().map(|h| sampler.pick_n(h, 1)[0].clone()).collect();
                let maps: Vec<FinMap> = choice.iter().map(|h| h.map().clone()).collect();
                let carrier = prod.carrier();
                let table: Vec<usize> = structures[src]
                    .carrier()
                    .elements()
                    .map(|x| carrier.index_of(&carrier.pair_at(&maps, x)).expect("tuple in product"))
                    .collect();
                let map = FinMap::new(structures[src].carrier().clone(), mat.carrier().clone(), table)?;
                let bad = hom_violation(&structures[src], &mat, &map)?;
                p2.expect(
                    bad.is_none(),
                    || format!("tuple map into product of {family:?} fails at {bad:?}"),
                    || json!({"family": family, "maps": maps.iter().map(|m| m.table().to_vec()).collect::<Vec<_>>()}),
                );
            }
        }
    }
    report.push(p1);
    report.push(p2);

    Ok(report)
}
