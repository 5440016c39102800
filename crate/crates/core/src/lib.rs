//! Cascade products of finite transformation semigroups and permutation groups.
//!
//! The crate is `no_std` (it needs `alloc`). States are numbered from 1 in
//! every public API, and transformations act on the right: `x^(st) = (x^s)^t`.
//!
//! - [`Transformation`], [`TransformationSemigroup`], [`PermGroup`]: the algebraic atoms.
//! - [`cascade`]: component lists, dependency functions, cascades and the
//!   semigroups they generate.
//! - [`flg`]: coordinatizing a permutation group along a subgroup chain.
//! - [`holonomy`]: the holonomy decomposition of a transformation semigroup.
//! - [`viz`]: DOT emitters for dependency trees and tiling pictures.
#![no_std]

extern crate alloc;

pub mod cascade;
mod error;
pub mod flg;
mod group;
pub mod holonomy;
mod limits;
pub mod radix;
mod semigroup;
mod stateset;
mod transformation;
pub mod viz;

pub use cascade::{Cascade, CascadeProduct, ComponentList, DependencyFunction};
pub use error::{Error, Result};
pub use group::PermGroup;
pub use limits::Limits;
pub use semigroup::{Enumeration, TransformationSemigroup, Word};
pub use stateset::StateSet;
pub use transformation::Transformation;
