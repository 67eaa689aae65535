//! A functor that reads a bounded semilattice as a commutative monoid, and
//! the universal bounded semilattice under a small commutative monoid.

use std::sync::Arc;

use gaft::construct::{construct_universal, ConstructBudget, Strategy};
use gaft::engine::Structure;
use gaft::finset::FinSet;
use gaft::functor::ConcreteFunctor;
use gaft::kinds;

fn main() -> gaft::Result<()> {
    let e = Arc::new(ConcreteFunctor::inclusion(
        &kinds::bounded_semilattice(),
        &kinds::commutative_monoid(),
        &[("unit", "bot"), ("mul", "join")],
    )?);
    // {0, 1, 2} under addition capped at 2
    let mul = (0..9).map(|c| (c / 3 + c % 3).min(2)).collect();
    let capped = Arc::new(Structure::new(
        kinds::commutative_monoid(),
        FinSet::new(3),
        vec![vec![0], mul],
    )?);
    let r = construct_universal(&e, &capped, &Strategy::Kappa, &ConstructBudget::default())?;
    println!(
        "{} sends capped addition into a {}-element bounded semilattice",
        e.name(),
        r.object.size()
    );
    println!("psi = {}", r.psi);
    Ok(())
}
