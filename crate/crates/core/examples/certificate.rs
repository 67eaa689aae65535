//! The JSON certificate and Graphviz diagram for one construction.

use std::sync::Arc;

use gaft::cli::render_dot;
use gaft::construct::{construct_universal, ConstructBudget, Strategy};
use gaft::engine::Structure;
use gaft::finset::FinSet;
use gaft::functor::ConcreteFunctor;
use gaft::kinds;

fn main() -> gaft::Result<()> {
    let e = Arc::new(ConcreteFunctor::forgetful(&kinds::semilattice()));
    let x = Arc::new(Structure::new(
        kinds::set(),
        FinSet::with_labels(["a", "b"])?,
        Vec::new(),
    )?);
    let r = construct_universal(&e, &x, &Strategy::Kappa, &ConstructBudget::default())?;
    let cert = r.certificate();
    println!("{}", serde_json::to_string_pretty(&cert["derivation"])?);
    println!("{}", render_dot(&r));
    Ok(())
}
