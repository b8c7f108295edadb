//! Integral hypergeometric monodromy groups: exponent data, the local
//! monodromies `A`, `B`, `C = A^{-1} B`, the invariant form and the type of
//! the Zariski closure.

mod atlas;
mod build;
mod params;

pub use atlas::{calabi_yau_atlas, family_atlas, AtlasRecord, KnownStatus};
pub use build::{
    build_monodromy, classify_closure, classify_triple, companion, exponent_polynomial, ClosureClass, ClosureTag,
    MonodromyTriple,
};
pub use params::{family_catalog, Family, HGParams};
