//! Exact computation in the monogenic free inverse semigroup.
//!
//! The crate provides:
//!
//! - [`triple`]: element arithmetic in the triple model, word evaluation,
//!   Green's data and the natural partial order;
//! - [`eset`]: exact descriptions of eventually periodic subsets of the
//!   idempotent semilattice;
//! - [`subsemigroup`]: bounded closure, membership, structure parameters,
//!   finite generating sets and finiteness tests for inverse subsemigroups;
//! - [`stephen`]: Stephen's procedure over inverse semigroup presentations
//!   (linear graphs, folding, expansion, language membership, word
//!   equality) plus the idempotent-label probe;
//! - [`presentations`]: builders for Cayley-table, amalgamated and
//!   conjugation presentations, with truncation reports.

pub mod error;
pub mod eset;
pub mod presentations;
pub mod stephen;
pub mod subsemigroup;
pub mod triple;
mod unionfind;
pub mod word;

pub use error::{Fi1Error, Result};
pub use eset::{IdemPoint, PeriodicSet};
pub use subsemigroup::SubsemigroupSpec;
pub use triple::Triple;
pub use word::Word;
