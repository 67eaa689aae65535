use std::sync::Arc;

use super::hom::{check_kinds, Hom};
use super::structure::{decode_cell, same_kind, table_len, Structure};
use crate::dsl::KindSpec;
use crate::error::{Error, Result};
use crate::finset::{product, FinMap, FinSet, TupleProduct};

/// Product of a family of structures with componentwise operations.
///
/// Operations are evaluated on tuples on demand; the carrier is only
/// enumerated by [`ProductStructure::materialize`].
#[derive(Clone, Debug)]
pub struct ProductStructure {
    kind: Arc<KindSpec>,
    factors: Vec<Arc<Structure>>,
}

pub fn product_structure(kind: &Arc<KindSpec>, factors: Vec<Arc<Structure>>) -> Result<ProductStructure> {
    if let Some(f) = factors.iter().find(|f| !same_kind(f.kind(), kind)) {
        return Err(Error::pre(format!(
            "factor of kind `{}` in a product of `{}`",
            f.kind().name(),
            kind.name()
        )));
    }
    Ok(ProductStructure {
        kind: kind.clone(),
        factors,
    })
}

impl ProductStructure {
    pub fn kind(&self) -> &Arc<KindSpec> {
        &self.kind
    }

    pub fn factors(&self) -> &[Arc<Structure>] {
        &self.factors
    }

    pub fn carrier(&self) -> TupleProduct {
        product(self.factors.iter().map(|f| f.carrier().clone()).collect())
    }

    /// Componentwise application of `op` to tuples.
    pub fn apply_op(&self, op: usize, args: &[&[usize]]) -> Vec<usize> {
        let mut coords = vec![0; args.len()];
        self.factors
            .iter()
            .enumerate()
            .map(|(j, f)| {
                for (c, a) in coords.iter_mut().zip(args) {
                    *c = a[j];
                }
                f.apply(op, &coords)
            })
            .collect()
    }

    /// The product as an ordinary structure on the mixed-radix indexed carrier.
    pub fn materialize(&self, bound: u128) -> Result<Structure> {
        let carrier = self.carrier();
        let tuples = carrier.materialize(bound)?;
        let n = tuples.len();
        let tables = self
            .kind
            .ops()
            .iter()
            .enumerate()
            .map(|(op, decl)| {
                let mut args = vec![0; decl.arity];
                (0..table_len(n, decl.arity))
                    .map(|cell| {
                        decode_cell(n.max(1), cell, &mut args);
                        let refs: Vec<&[usize]> = args.iter().map(|&a| tuples[a].as_slice()).collect();
                        carrier
                            .index_of(&self.apply_op(op, &refs))
                            .expect("componentwise result in product")
                    })
                    .collect()
            })
            .collect();
        Ok(Structure::from_parts(self.kind.clone(), FinSet::new(n), tables))
    }

    /// Projection onto factor `i`, out of the materialized product.
    pub fn projection(&self, materialized: &Arc<Structure>, i: usize) -> Result<Hom> {
        let carrier = self.carrier();
        let table = (0..materialized.size()).map(|x| carrier.tuple_at(x)[i]).collect();
        let map = FinMap::new(materialized.carrier().clone(), self.factors[i].carrier().clone(), table)?;
        Hom::new(materialized.clone(), self.factors[i].clone(), map)
    }

    /// The mediating homomorphism `x -> product` of a family `h_i: x -> factor_i`.
    pub fn tuple_hom(&self, materialized: &Arc<Structure>, homs: &[Hom], source: &Arc<Structure>) -> Result<Hom> {
        if homs.len() != self.factors.len() {
            return Err(Error::pre("tuple map needs one homomorphism per factor"));
        }
        for (h, f) in homs.iter().zip(&self.factors) {
            check_kinds(h.dom(), source)?;
            if h.dom().as_ref() != source.as_ref() || h.cod().as_ref() != f.as_ref() {
                return Err(Error::pre("tuple map component has the wrong boundary"));
            }
        }
        let carrier = self.carrier();
        let maps: Vec<FinMap> = homs.iter().map(|h| h.map().clone()).collect();
        let table = source
            .carrier()
            .elements()
            .map(|x| carrier.index_of(&carrier.pair_at(&maps, x)).expect("tuple in product"))
            .collect();
        let map = FinMap::new(source.carrier().clone(), materialized.carrier().clone(), table)?;
        Hom::new(source.clone(), materialized.clone(), map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{enumerate_homs, is_isomorphic};
    use crate::finset::DEFAULT_MATERIALIZE_BOUND;
    use crate::kinds;

    fn chain2() -> Arc<Structure> {
        Arc::new(Structure::new(kinds::semilattice(), FinSet::new(2), vec![vec![0, 1, 1, 1]]).unwrap())
    }

    #[test]
    fn empty_product_is_terminal() {
        let p = product_structure(&kinds::pointed(), vec![]).unwrap();
        let t = p.materialize(DEFAULT_MATERIALIZE_BOUND).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.constant(0), 0);
    }

    #[test]
    fn square_of_two_chain_is_the_diamond() {
        let p = product_structure(&kinds::semilattice(), vec![chain2(), chain2()]).unwrap();
        let sq = Arc::new(p.materialize(DEFAULT_MATERIALIZE_BOUND).unwrap());
        // diamond: bottom 0, two atoms 1 and 2, top 3 with join 1∨2 = 3
        let mut join = vec![0; 16];
        for a in 0..4usize {
            for b in 0..4usize {
                join[a * 4 + b] = a | b;
            }
        }
        let diamond = Arc::new(Structure::new(kinds::semilattice(), FinSet::new(4), vec![join]).unwrap());
        assert!(is_isomorphic(&sq, &diamond).unwrap().is_some());
        for i in 0..2 {
            p.projection(&sq, i).unwrap();
        }
        let homs = enumerate_homs(&chain2(), &chain2()).unwrap();
        for f in &homs {
            for g in &homs {
                p.tuple_hom(&sq, &[f.clone(), g.clone()], &chain2()).unwrap();
            }
        }
    }

    #[test]
    fn pointed_product_basepoint() {
        let star = Arc::new(Structure::new(kinds::pointed(), FinSet::new(1), vec![vec![0]]).unwrap());
        let two = Arc::new(Structure::new(kinds::pointed(), FinSet::new(2), vec![vec![0]]).unwrap());
        let p = product_structure(&kinds::pointed(), vec![star, two]).unwrap();
        assert_eq!(p.apply_op(0, &[]), vec![0, 0]);
        let m = p.materialize(100).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(p.carrier().tuple_at(m.constant(0)), vec![0, 0]);
    }

    #[test]
    fn kind_mismatch_rejected() {
        assert!(product_structure(&kinds::pointed(), vec![chain2()]).is_err());
    }
}
