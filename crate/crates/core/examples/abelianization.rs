//! The universal commutative monoid under a non-commutative one: the
//! symmetric group on three letters collapses to two elements.

use std::sync::Arc;

use gaft::construct::{construct_universal, ConstructBudget, Strategy};
use gaft::engine::Structure;
use gaft::finset::FinSet;
use gaft::functor::ConcreteFunctor;
use gaft::kinds;

fn cyclic(k: usize) -> gaft::Result<Arc<Structure>> {
    let mul = (0..k * k).map(|c| (c / k + c % k) % k).collect();
    Ok(Arc::new(Structure::new(
        kinds::commutative_monoid(),
        FinSet::new(k),
        vec![vec![0], mul],
    )?))
}

fn main() -> gaft::Result<()> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let mul = perms
        .iter()
        .flat_map(|a| perms.iter().map(move |b| [a[b[0]], a[b[1]], a[b[2]]]))
        .map(idx)
        .collect();
    let s3 = Arc::new(Structure::new(kinds::monoid(), FinSet::new(6), vec![vec![0], mul])?);

    let e = Arc::new(ConcreteFunctor::inclusion(
        &kinds::commutative_monoid(),
        &kinds::monoid(),
        &[],
    )?);
    let strategy = Strategy::UserSupplied {
        description: "cyclic monoids of order 1 and 2".into(),
        members: vec![cyclic(1)?, cyclic(2)?],
    };
    let r = construct_universal(&e, &s3, &strategy, &ConstructBudget::default())?;
    println!("abelianization has {} elements", r.object.size());
    println!("psi sends the permutations to {:?}", r.psi.table());
    Ok(())
}
