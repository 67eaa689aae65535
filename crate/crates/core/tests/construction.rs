mod common;

use std::sync::Arc;

use common::*;
use gaft::adjoint::Adjunction;
use gaft::construct::{
    compare_universal, construct_universal, factorize, test_family, verify_universality, ConstructBudget, Strategy,
    UniversalArrowResult,
};
use gaft::engine::{EnumBudget, Origin, Structure};
use gaft::finset::{FinMap, FinSet};
use gaft::functor::ConcreteFunctor;
use gaft::kinds;

fn free(kind: &Arc<gaft::dsl::KindSpec>, n: usize) -> (Arc<ConcreteFunctor>, UniversalArrowResult) {
    let e = Arc::new(ConcreteFunctor::forgetful(kind));
    let r = construct_universal(&e, &set_object(n), &Strategy::Kappa, &ConstructBudget::default()).unwrap();
    (e, r)
}

#[test]
fn deleting_a_closure_tuple_breaks_existence() {
    let (e, r) = free(&kinds::semilattice(), 2);
    assert_eq!(r.object.size(), 3);
    // keep the two generators and let join(a, b) = b, a two-element chain
    let gens: Vec<usize> = (0..2).map(|i| r.psi.apply(i)).collect();
    assert!(r.derivation[..2].iter().all(|o| matches!(o, Origin::Generator(_))));
    let chain = Arc::new(Structure::new(kinds::semilattice(), FinSet::new(2), vec![vec![0, 1, 1, 1]]).unwrap());
    let tampered = UniversalArrowResult {
        object: chain.clone(),
        psi: FinMap::new(FinSet::new(2), FinSet::new(2), vec![0, 1]).unwrap(),
        embedding: gens.iter().map(|&g| r.embedding[g].clone()).collect(),
        derivation: r.derivation[..2].to_vec(),
        ..r.clone()
    };
    let v = verify_universality(&e, &tampered, &r.lambda.members).unwrap();
    assert!(!v.report.passed);
    assert!(!v.report.check("existence").unwrap().passed);
}

#[test]
fn tampered_psi_is_caught_by_factorization() {
    let (e, mut r) = free(&kinds::gf2_vector(), 2);
    let y = r.object.clone();
    let phi = r.psi.clone();
    r.psi = FinMap::new(
        r.psi.dom().clone(),
        r.psi.cod().clone(),
        vec![r.psi.apply(1), r.psi.apply(0)],
    )
    .unwrap();
    assert!(factorize(&e, &r, &y, &phi).is_err());
}

#[test]
fn certificate_records_every_tuple() {
    let (_, r) = free(&kinds::mset2(), 2);
    let cert = r.certificate();
    let derivation = cert["derivation"].as_array().unwrap();
    assert_eq!(derivation.len(), r.object.size());
    for (el, d) in derivation.iter().enumerate() {
        assert_eq!(d["element"], el);
        assert_eq!(d["tuple"].as_array().unwrap().len(), r.delta.len());
    }
    assert_eq!(cert["delta"].as_array().unwrap().len(), r.delta.len());
    assert_eq!(cert["lambda"]["strategy"]["kappa_bound"], 4);
}

#[test]
fn universal_arrow_embeds_into_product_coordinates() {
    let (_, r) = free(&kinds::semilattice(), 3);
    for (j, d) in r.delta.entries.iter().enumerate() {
        for p in 0..3 {
            assert_eq!(r.embedding[r.psi.apply(p)][j], d.phi.apply(p));
        }
    }
}

#[test]
fn labelled_and_plain_generators_give_isomorphic_objects() {
    let e = Arc::new(ConcreteFunctor::forgetful(&kinds::pointed()));
    let plain = construct_universal(&e, &set_object(2), &Strategy::Kappa, &ConstructBudget::default()).unwrap();
    let labelled_x =
        Arc::new(Structure::new(kinds::set(), FinSet::with_labels(["u", "v"]).unwrap(), Vec::new()).unwrap());
    let labelled = construct_universal(&e, &labelled_x, &Strategy::Kappa, &ConstructBudget::default()).unwrap();
    assert_eq!(plain.object.size(), labelled.object.size());
    let (_, other) = free(&kinds::pointed(), 2);
    let iso = compare_universal(&e, &plain, &other).unwrap();
    assert!(iso.map().is_bijective());
}

#[test]
fn abelianization_of_a_cyclic_monoid_is_itself() {
    let cmon = kinds::commutative_monoid();
    let e = Arc::new(ConcreteFunctor::inclusion(&cmon, &kinds::monoid(), &[]).unwrap());
    let z3 = cyclic_cmon(3);
    let as_monoid = Arc::new(e.apply(&z3).unwrap().as_ref().clone());
    let strategy = Strategy::UserSupplied {
        description: "cyclic".into(),
        members: vec![cyclic_cmon(1), z3.clone()],
    };
    let r = construct_universal(&e, &as_monoid, &strategy, &ConstructBudget::default()).unwrap();
    assert_eq!(r.object.size(), abelianization(&as_monoid).size());
    let family = test_family(&cmon, &r.lambda, 4, EnumBudget::default()).unwrap();
    assert!(verify_universality(&e, &r, &family).unwrap().report.passed);
}

#[test]
fn counit_of_free_structure_matches_brute_force() {
    let e = Arc::new(ConcreteFunctor::forgetful(&kinds::pointed()));
    let adj = Adjunction::new(e, ConstructBudget::default());
    let y = Arc::new(Structure::new(kinds::pointed(), FinSet::new(3), vec![vec![1]]).unwrap());
    let eps = adj.counit(&y).unwrap();
    let free_y = adj.left_on_object(&set_object(3)).unwrap();
    // the counit is the unique morphism out of F(E y) restricting to the identity
    let candidates: Vec<Vec<usize>> = brute_homs(&free_y.object, &y)
        .into_iter()
        .filter(|m| (0..3).all(|p| m[free_y.psi.apply(p)] == p))
        .collect();
    assert_eq!(candidates, vec![eps.map().table().to_vec()]);
}

#[test]
fn left_adjoint_on_morphisms_is_functorial() {
    let e = Arc::new(ConcreteFunctor::forgetful(&kinds::semilattice()));
    let adj = Adjunction::new(e, ConstructBudget::default());
    let (x1, x2) = (set_object(1), set_object(2));
    let g = gaft::engine::Hom::new(
        x1.clone(),
        x2.clone(),
        FinMap::new(FinSet::new(1), FinSet::new(2), vec![1]).unwrap(),
    )
    .unwrap();
    let fg = adj.left_on_morphism(&g).unwrap();
    assert_eq!(fg.dom().size(), 1);
    assert_eq!(fg.cod().size(), 3);
    assert!(naive_is_hom(fg.dom(), fg.cod(), fg.map().table()));
    let psi1 = adj.unit(&x1).unwrap();
    let psi2 = adj.unit(&x2).unwrap();
    assert_eq!(fg.apply(psi1.apply(0)), psi2.apply(1));
}
