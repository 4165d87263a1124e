//! Exact structure theory of finitely generated abelian groups and decision
//! procedures for self-smallness of their products and sums.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and
//! the command line live in the `selfsmall` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod catalogue;
pub mod decision;
pub mod family;
pub mod group;
pub mod matrix;
pub mod oracle;
pub mod rules;

pub use catalogue::{FactBase, GroupId, GroupKind, GroupRef, Relation, Subject, Truth};
pub use decision::{CertNode, Certificate, Member, Outcome, Verdict};
pub use family::{Cardinal, Family, FamilyEntry, PrimeSet, ProductNormalForm, Size};
pub use group::{FgGroup, PrimaryDecomposition};
pub use matrix::{IntMatrix, SnfResult};
pub use rules::RuleId;
