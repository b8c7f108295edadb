//! Words, balls, random walks and relation search in a finitely generated
//! integer matrix group.

mod ball;
mod genset;
mod modp;
mod reducibility;
mod relations;
mod walk;

pub use ball::{ball_enumerate, BallOptions, BallReport};
pub use genset::GenSet;
pub use modp::is_irreducible_mod;
pub use reducibility::{classify_polynomial, Certificate, PolyVerdict};
pub use relations::{relation_search, Relation, RelationReport};
pub use walk::{random_walk_word, walk_charpoly_stats, ReducibilityReport, ReducibilityRow, Word};
