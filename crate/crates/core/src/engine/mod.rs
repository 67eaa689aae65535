//! The category of structures of one kind: structures, homomorphisms,
//! closures, products, enumeration up to isomorphism and axiom checks.

mod axioms;
mod canon;
mod cardinal;
mod closure;
mod enumerate;
mod hom;
mod product;
mod structure;

pub use axioms::check_kind_axioms;
pub(crate) use axioms::sample_structures;
pub use canon::{canonical_form, canonical_structure, CanonicalForm};
pub use cardinal::{kappa, Cardinal};
pub use closure::{
    closure, closure_with_origins, corestrict, induced_substructure, is_closed, saturate, Origin, Saturation,
    Substructure, DEFAULT_SATURATION_BUDGET,
};
pub use enumerate::{enumerate_size, enumerate_sizes, enumerate_structures, EnumBudget};
pub use hom::{count_homs, enumerate_homs, hom_violation, is_isomorphic, is_morphism, Hom, HomViolation};
pub use product::{product_structure, ProductStructure};
pub use structure::{eval_term, is_structure, LawCheck, LawViolation, Structure};
