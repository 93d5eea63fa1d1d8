//! Exact classification of rigid diagonal group actions on products
//! `E^{n-1} × C`, where the `E` are elliptic curves and `C` is a triangle
//! curve of genus at least two.
//!
//! The groups are the semidirect products `A ⋊ Z_d` (`d ∈ {3, 4, 6}`) with
//! `A` a twist-invariant subgroup of `Z_n²`. Everything is computed from
//! generating triples with exact integer and rational arithmetic:
//!
//! * [`group`] builds the groups, their automorphisms and quotients;
//! * [`triples`] enumerates generating triples and their braid orbits;
//! * [`character`] decides rigidity through one-dimensional characters;
//! * [`census`] tabulates the cyclic quotient singularities of the quotient;
//! * [`toric`] checks the toric resolutions of those singularities;
//! * [`arith`] holds the number-theoretic existence criteria and the
//!   minimal-group search;
//! * [`classify`] ties the pieces into the end-to-end classification.

pub mod arith;
pub mod census;
pub mod character;
pub mod classify;
pub mod error;
pub mod group;
pub mod toric;
pub mod triples;

pub use error::{Error, Result};
pub use group::{AbelianSubgroup, Elem, Group, GroupElement, TwistAction};
pub use triples::{ActionTuple, Triple};
