//! Continued fractions with bounded partial quotients and curvatures of
//! integral Apollonian packings.

mod apollonian;
mod zaremba;

pub use apollonian::{
    apollonian_orbit, apollonian_orbit_oracle, apollonian_orbit_visit, descartes_form, swap, ApollonianOptions,
    CurvatureReport,
};
pub use zaremba::{continued_fraction, zaremba_forward, zaremba_scan, ZarembaReport, ZarembaRow};
