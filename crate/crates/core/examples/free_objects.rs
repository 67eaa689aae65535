//! Free structures on a few generators, built as universal arrows out of a
//! bare set.

use std::sync::Arc;

use gaft::construct::{construct_universal, ConstructBudget, Strategy};
use gaft::engine::Structure;
use gaft::finset::FinSet;
use gaft::functor::ConcreteFunctor;
use gaft::kinds;

fn main() -> gaft::Result<()> {
    for kind in [
        kinds::pointed(),
        kinds::semilattice(),
        kinds::gf2_vector(),
        kinds::mset2(),
    ] {
        let e = Arc::new(ConcreteFunctor::forgetful(&kind));
        for n in 0..=3 {
            let x = Arc::new(Structure::new(kinds::set(), FinSet::new(n), Vec::new())?);
            let r = construct_universal(&e, &x, &Strategy::Kappa, &ConstructBudget::default())?;
            println!(
                "{:<12} n={n}  |solution set|={:<3} |delta|={:<4} free object has {} elements",
                kind.name(),
                r.lambda.members.len(),
                r.delta.len(),
                r.object.size()
            );
        }
    }
    Ok(())
}
