//! Combinatorics of templates for nonsingular Smale flows.
//!
//! The crate is organized bottom-up: [`shift`] holds edge shifts and their
//! surgeries, [`invariants`] the flow-equivalence invariants, [`template`]
//! branch-line templates and their thickened boundaries, [`filtrating`] the
//! attachment-pattern bookkeeping, and [`search`] the bounded move searches.

pub mod filtrating;
pub mod generate;
pub mod invariants;
pub mod search;
pub mod shift;
pub mod template;
pub mod trace;
