//! Exact quiver mutation, finite mutation classes, and presentations of
//! saturated cluster modular groups.
//!
//! Words follow composition notation throughout: `σ μ_k` means "mutate at
//! `k`, then relabel by `σ`". See [`word::APPLICATION_ORDER`].

pub mod brown;
pub mod canon;
pub mod catalog;
pub mod class;
pub mod error;
pub mod graph;
pub mod group;
pub mod laurent;
pub mod matrix;
pub mod perm;
pub mod rational;
pub mod seed;
pub mod word;

pub use brown::{assemble_presentation, choose_representatives, Assembly, BrownGenerator, DataOfRepresentatives};
pub use class::{MutationClass, DEFAULT_CAP};
pub use canon::{automorphisms, canonical_form, CanonicalForm};
pub use graph::{EdgeOrbit, ModularGraph, StandardCycle};
pub use error::{Error, Result};
pub use group::{AbelianInvariants, GroupPresentation};
pub use matrix::ExchangeMatrix;
pub use perm::Permutation;
pub use seed::{is_trivial_loop, FramedMatrix, LoopReport, Mode, Seed};
pub use word::{MutationWord, Token, WordAction};
