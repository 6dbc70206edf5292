//! Cross-intersecting families of affine subspaces over finite fields.
//!
//! A pair of families of affine subspaces `(A_i, B_i)` of `F_q^n`, `1 <= i <= m`,
//! is *cross-intersecting* (skew) when `A_i ∩ B_i = ∅` for every `i` and
//! `A_i ∩ B_j ≠ ∅` whenever `i < j`. This crate provides everything needed to
//! work with such families at desk scale:
//!
//! - [`fq`] — exact arithmetic in `GF(q)` for prime powers `q <= 512`,
//!   with Conway-polynomial moduli and exp/log product tables;
//! - [`linalg`] — reduced row echelon form, system solving, kernels and
//!   subspace sums over `GF(q)`;
//! - [`geometry`] — canonical cosets (affine subspaces), intersection,
//!   Minkowski-difference membership, point indexing, and enumeration of
//!   linear, affine, and projective subspaces;
//! - [`families`] — set-pair families over four geometries with skew and
//!   symmetric cross-intersection verifiers, the Bollobás sum, and the
//!   uniform binomial bound;
//! - [`construction`] — the hyperplane-shift family achieving
//!   `m = (q^n - 1)/(q - 1)`;
//! - [`certificate`] — the degree-one polynomial certificate over `F_p`
//!   (`p | q - 1`) whose triangular evaluation matrix forces
//!   `m <= q^n + 1` for `q >= 3`;
//! - [`search`] — exact branch-and-bound computation of the maximal family
//!   size `m(n, q)` and its projective analogue for small parameters;
//! - [`fileio`] — stable JSON file formats and reports for the `affbol` CLI.
//!
//! The `examples/` directory contains one runnable example per capability;
//! start with `construct_and_verify`.

// Dense matrix kernels read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod certificate;
pub mod construction;
pub mod families;
pub mod fileio;
pub mod fq;
pub mod geometry;
pub mod linalg;
pub mod search;

pub use fq::{FieldError, Fq};
pub use geometry::{AffineSubspace, IntersectionResult, LinearSubspace, ProjectiveSubspace, SpaceDesc};
