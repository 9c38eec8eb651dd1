//! Core engine for computing Zariski-closed supports of local cohomology of
//! complete-intersection quotients `R/(f1, f2)` over `R = F_p[x_1..x_n]`.
//!
//! The computation runs entirely in positive characteristic: local cohomology
//! of `R` is approached through Frobenius-truncated Cech complexes, presented
//! at level 0 as cokernels with a Frobenius structure map (root data), and the
//! contribution of each spectral-sequence piece to `H^k_I(R/(f1,f2))` is
//! extracted from finite Groebner-basis computations over `F_p[x_1..x_n]`.
//!
//! Layering (each module builds on the previous):
//! - [`ring`]: exact polynomial arithmetic over `F_p`, parsing, printing,
//!   Frobenius powers.
//! - [`matrix`]: dense polynomial matrices and entrywise Frobenius (bracket)
//!   powers.
//! - [`groebner`]: module Groebner engine with membership transcripts,
//!   syzygies, preimages, intersections, colons, annihilators.
//! - [`chains`]: stabilizing increasing chains with certified or windowed
//!   heuristic stop rules.
//! - [`fmodule`]: cokernel presentations with Frobenius structure maps and
//!   Koszul-cohomology support formulas over them.
//! - [`cech`]: truncated Cech complexes, their cohomology and root
//!   presentations, edge-map kernels, per-piece support computations, and the
//!   total-versus-row cross-check oracle.
//! - [`support`]: the end-to-end pipeline assembling per-degree supports.

pub mod cech;
pub mod chains;
pub mod error;
pub mod fmodule;
pub mod groebner;
pub mod matrix;
pub mod ring;
pub mod support;

pub use error::{Error, Result};
