//! Reduction modulo `q`, closure of the reduced generators, congruence
//! Cayley graphs and their spectra.

mod closure;
mod modmatrix;
mod scan;
mod spectrum;

pub use closure::{
    closure_mod, congruence_graph, is_squarefree, prime_factors, sl_order, ClosureOptions, ClosureResult,
    CongruenceGraph, TargetGroup,
};
pub use modmatrix::{reduce_mod, ModMatrix};
pub use scan::{expander_scan, ScanOptions, ScanReport, ScanRow};
pub use spectrum::{cayley_spectrum, dense_spectrum, graph_spectrum, CayleySpectrum, SpectrumOptions};
