//! Manifest-driven runner for the thinlab experiments.
//!
//! A [`Manifest`] names one experiment kind and its parameters. [`execute`]
//! validates it and runs the matching library operation, and
//! [`bundle::write`] emits the results as a bundle of canonical JSON or CSV
//! files.

pub mod bundle;
pub mod emit;
pub mod error;
pub mod manifest;
pub mod run;

pub use bundle::Format;
pub use error::CliError;
pub use manifest::{Caps, Kind, Manifest, Params};
pub use run::{execute, Category, ItemError, Outcome};
