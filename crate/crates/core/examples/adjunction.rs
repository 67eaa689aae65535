//! The left adjoint assembled from universal arrows: units, counits and the
//! hom-set bijection.

use std::sync::Arc;

use gaft::adjoint::{check_adjunction_laws, Adjunction};
use gaft::construct::ConstructBudget;
use gaft::engine::{enumerate_size, EnumBudget, Structure};
use gaft::finset::FinSet;
use gaft::functor::ConcreteFunctor;
use gaft::kinds;
use gaft::report::SampleBudget;

fn main() -> gaft::Result<()> {
    let e = Arc::new(ConcreteFunctor::forgetful(&kinds::gf2_vector()));
    let adj = Adjunction::new(e, ConstructBudget::default());

    let x = Arc::new(Structure::new(kinds::set(), FinSet::new(2), Vec::new())?);
    println!("unit on two generators: {}", adj.unit(&x)?);
    for y in enumerate_size(&kinds::gf2_vector(), 2, EnumBudget::default())?.iter() {
        let b = adj.hom_bijection(&x, y)?;
        println!(
            "|Hom(F x, y)| = {}, |maps x -> E y| = {}, bijective: {}",
            b.morphisms.len(),
            b.maps.len(),
            b.is_bijective()
        );
        println!("counit at y: {}", adj.counit(y)?.map());
    }
    print!("{}", check_adjunction_laws(&adj, &SampleBudget::default())?.summary());
    Ok(())
}
