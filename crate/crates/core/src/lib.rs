//! Homomorphism dualities for finite digraphs and relational structures.
//!
//! The crate covers the arc-graph functor and its left adjoint, general
//! pattern-defined (Pultr) functors, sproink obstruction families, decision
//! procedures for tree, bounded-height tree and finite duality, and
//! near-unanimity polymorphisms, together with brute-force oracles that
//! check all of these on small instances.

pub mod arcgraph;
pub mod cli;
pub mod duality;
pub mod error;
pub mod hom;
pub mod oracle;
pub mod pultr;
pub mod sproink;
pub mod structures;

pub use error::{Error, Result};
pub use hom::{core, find_hom, hom_equivalent, hom_exists, is_hom, is_isomorphic, Homomorphism};
pub use structures::{Digraph, Partition, Relation, Structure, Vocabulary};
