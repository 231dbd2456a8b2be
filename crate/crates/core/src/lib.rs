//! Object-oriented design measurement over a language-agnostic class model.
//!
//! The crate is `no_std` and needs only `alloc`. File access, formats and the
//! command line live in the `qualimeter` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ck;
pub mod complexity;
pub mod detect;
pub mod java;
pub mod lines;
pub mod maintain;
pub mod model;
pub mod mood;
pub mod qmood;
pub mod stats;
pub mod treemap;

pub use model::{ClassModel, FieldDecl, HalsteadCounts, LineCounts, MethodDecl, TypeDecl, TypeKind, Visibility};
