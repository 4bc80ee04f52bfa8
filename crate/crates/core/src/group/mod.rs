//! Abelianization, relation verification, Dehn twist candidates and the
//! elimination homomorphism.

pub mod analysis;
pub mod expr;
pub mod presentation;
pub mod relations;
pub mod snf;

pub use analysis::{eliminate, find_dehn_twist_candidates, restrict, DehnCandidate};
pub use presentation::{AbelianInvariants, GroupPresentation, Relator};
pub use relations::{verify_file, verify_relation, RelationFile, VerificationReport};
pub use snf::{smith_normal_form, SmithForm};
