//! Runs the structural checkers on a built-in kind and on a kind whose
//! closure bound is wrong.

use std::sync::Arc;

use gaft::dsl::parse_kind;
use gaft::engine::check_kind_axioms;
use gaft::functor::{check_limit_preservation, check_st_axioms, ConcreteFunctor};
use gaft::kinds;
use gaft::report::SampleBudget;

const MAGMA: &str = "
kind CommutativeIdempotent {
  op join/2;
  vars x y;
  eq join(x, y) = join(y, x);
  eq join(x, x) = x;
  kappa 2^n - 1
}";

fn main() -> gaft::Result<()> {
    let budget = SampleBudget::default();
    let e = ConcreteFunctor::forgetful(&kinds::mset2());
    print!("{}", check_kind_axioms(e.source(), &budget)?.summary());
    print!("{}", check_st_axioms(&e, &budget)?.summary());
    print!("{}", check_limit_preservation(&e, &budget)?.summary());

    let broken = Arc::new(parse_kind(MAGMA)?);
    print!("{}", check_kind_axioms(&broken, &budget)?.summary());
    Ok(())
}
