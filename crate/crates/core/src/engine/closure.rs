use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use super::hom::Hom;
use super::structure::{cell_index, decode_cell, table_len, Structure};
use crate::error::{Error, Result};
use crate::finset::{FinMap, Subset};

/// How a saturated element first arose.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// The `i`-th generator.
    Generator(usize),
    /// `op` applied to earlier elements (indices into the saturation).
    Op { op: usize, args: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct Saturation<E> {
    pub elements: Vec<E>,
    /// One entry per element.
    pub origins: Vec<Origin>,
    /// Position of each generator in `elements`.
    pub generator_positions: Vec<usize>,
}

/// Worklist saturation of `generators` under operations of the given arities.
///
/// Each round applies every operation to the argument tuples that involve at
/// least one element found in the previous round, so nothing is computed
/// twice. Element order is generators first, then constants, then rounds.
pub fn saturate<E, F>(
    arities: &[usize],
    generators: impl IntoIterator<Item = E>,
    mut apply: F,
    budget: usize,
) -> Result<Saturation<E>>
where
    E: Clone + Eq + Hash,
    F: FnMut(usize, &[&E]) -> E,
{
    let mut sat = Saturation {
        elements: Vec::new(),
        origins: Vec::new(),
        generator_positions: Vec::new(),
    };
    let mut index: HashMap<E, usize> = HashMap::new();

    let insert = |sat: &mut Saturation<E>, index: &mut HashMap<E, usize>, e: E, origin: Origin| -> Result<usize> {
        if let Some(&i) = index.get(&e) {
            return Ok(i);
        }
        if sat.elements.len() >= budget {
            return Err(Error::Budget {
                what: "closure saturation",
                bound: budget as u64,
            });
        }
        let i = sat.elements.len();
        index.insert(e.clone(), i);
        sat.elements.push(e);
        sat.origins.push(origin);
        Ok(i)
    };

    for (g, e) in generators.into_iter().enumerate() {
        let pos = insert(&mut sat, &mut index, e, Origin::Generator(g))?;
        sat.generator_positions.push(pos);
    }
    for (op, &arity) in arities.iter().enumerate() {
        if arity == 0 {
            let c = apply(op, &[]);
            insert(&mut sat, &mut index, c, Origin::Op { op, args: Vec::new() })?;
        }
    }

    let mut start = 0;
    loop {
        let end = sat.elements.len();
        if start == end {
            break;
        }
        for (op, &arity) in arities.iter().enumerate() {
            if arity == 0 {
                continue;
            }
            let mut args = vec![0usize; arity];
            for cell in 0..table_len(end, arity) {
                decode_cell(end, cell, &mut args);
                if args.iter().all(|&a| a < start) {
                    continue;
                }
                let refs: Vec<&E> = args.iter().map(|&a| &sat.elements[a]).collect();
                let value = apply(op, &refs);
                insert(&mut sat, &mut index, value, Origin::Op { op, args: args.clone() })?;
            }
        }
        start = end;
    }
    Ok(sat)
}

/// Default element budget for saturation.
pub const DEFAULT_SATURATION_BUDGET: usize = 10_000;

fn arities(a: &Structure) -> Vec<usize> {
    a.kind().ops().iter().map(|o| o.arity).collect()
}

/// Smallest closed subset containing `z`.
pub fn closure(a: &Structure, z: &Subset) -> Result<Subset> {
    Ok(closure_with_origins(a, z)?.0)
}

/// Closure together with the saturation trace (elements in discovery order).
pub fn closure_with_origins(a: &Structure, z: &Subset) -> Result<(Subset, Saturation<usize>)> {
    if z.ambient().size() != a.size() {
        return Err(Error::pre("subset is not a subset of the structure's carrier"));
    }
    let sat = saturate(
        &arities(a),
        z.members().iter().copied(),
        |op, args| {
            let raw: Vec<usize> = args.iter().map(|&&x| x).collect();
            a.apply(op, &raw)
        },
        a.size().max(1),
    )?;
    let subset = Subset::new(a.carrier().clone(), sat.elements.iter().copied())?;
    Ok((subset, sat))
}

/// Whether `s` is closed under every operation (including constants).
pub fn is_closed(a: &Structure, s: &Subset) -> bool {
    let n = a.size();
    let members = s.members();
    a.kind().ops().iter().enumerate().all(|(op, decl)| {
        let k = decl.arity;
        let m = members.len();
        if m == 0 && k > 0 {
            return true;
        }
        let mut pos = vec![0; k];
        let mut args = vec![0; k];
        (0..table_len(m, k)).all(|cell| {
            decode_cell(m.max(1), cell, &mut pos);
            for (slot, &p) in args.iter_mut().zip(&pos) {
                *slot = members[p];
            }
            s.contains(a.table(op)[cell_index(n, &args)])
        })
    })
}

/// A closed subset with its induced structure and the inclusion.
#[derive(Clone, Debug)]
pub struct Substructure {
    pub structure: Arc<Structure>,
    pub subset: Subset,
    pub inclusion: Hom,
}

/// The induced structure on `s`, present iff `s` is closed. The inclusion is
/// checked to be a homomorphism before returning.
pub fn induced_substructure(a: &Arc<Structure>, s: &Subset) -> Result<Option<Substructure>> {
    if s.ambient().size() != a.size() {
        return Err(Error::pre("subset is not a subset of the structure's carrier"));
    }
    if !is_closed(a, s) {
        return Ok(None);
    }
    let m = s.len();
    let members = s.members();
    let tables = a
        .kind()
        .ops()
        .iter()
        .enumerate()
        .map(|(op, decl)| {
            let mut pos = vec![0; decl.arity];
            let mut args = vec![0; decl.arity];
            (0..table_len(m, decl.arity))
                .map(|cell| {
                    decode_cell(m.max(1), cell, &mut pos);
                    for (slot, &p) in args.iter_mut().zip(&pos) {
                        *slot = members[p];
                    }
                    s.position(a.apply(op, &args)).expect("closed subset")
                })
                .collect()
        })
        .collect();
    let structure = Arc::new(Structure::from_parts(a.kind().clone(), s.as_set(), tables));
    let inclusion = Hom::new(structure.clone(), a.clone(), s.inclusion())
        .map_err(|e| Error::Certification(format!("inclusion of a closed subset: {e}")))?;
    Ok(Some(Substructure {
        structure,
        subset: s.clone(),
        inclusion,
    }))
}

/// Corestriction of a homomorphism into a substructure containing its image.
pub fn corestrict(h: &Hom, sub: &Substructure) -> Result<Option<Hom>> {
    let Some(map) = crate::finset::factor_through(h.map(), &sub.subset) else {
        return Ok(None);
    };
    let map: FinMap = map.retarget(h.dom().carrier().clone(), sub.structure.carrier().clone())?;
    Ok(Some(Hom::new(h.dom().clone(), sub.structure.clone(), map)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::kinds;

    fn gf2_square() -> Arc<Structure> {
        // elements: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1); addition is xor
        let add = (0..16).map(|c| (c / 4) ^ (c % 4)).collect();
        Arc::new(Structure::new(kinds::gf2_vector(), FinSet::new(4), vec![vec![0], add]).unwrap())
    }

    #[test]
    fn gf2_closure_saturates() {
        let v = gf2_square();
        let z = Subset::new(FinSet::new(4), [1, 2]).unwrap();
        assert_eq!(closure(&v, &z).unwrap().members(), &[0, 1, 2, 3]);
        let s = Subset::new(FinSet::new(4), [0, 1, 2]).unwrap();
        assert!(induced_substructure(&v, &s).unwrap().is_none());
    }

    #[test]
    fn pointed_closure_of_empty_is_basepoint() {
        let p = Structure::new(kinds::pointed(), FinSet::new(3), vec![vec![2]]).unwrap();
        let z = Subset::empty(p.carrier());
        assert_eq!(closure(&p, &z).unwrap().members(), &[2]);
    }

    #[test]
    fn closed_sets_are_fixed_points() {
        let c = Arc::new(Structure::new(kinds::semilattice(), FinSet::new(2), vec![vec![0, 1, 1, 1]]).unwrap());
        let z = Subset::new(FinSet::new(2), [0]).unwrap();
        assert_eq!(closure(&c, &z).unwrap(), z);
        let sub = induced_substructure(&c, &z).unwrap().unwrap();
        assert_eq!(sub.structure.size(), 1);
        let full = induced_substructure(&c, &Subset::full(c.carrier())).unwrap().unwrap();
        assert_eq!(*full.structure, *c);
    }

    #[test]
    fn saturation_records_origins() {
        let sat = saturate(&[2], [1u32, 2], |_, a| a[0] | a[1], 10).unwrap();
        assert_eq!(sat.elements, vec![1, 2, 3]);
        assert_eq!(
            sat.origins[2],
            Origin::Op {
                op: 0,
                args: vec![0, 1]
            }
        );
        let err = saturate(&[1], [0u64], |_, a| a[0] + 1, 5).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}
