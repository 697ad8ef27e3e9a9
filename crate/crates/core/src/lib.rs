//! Combinatorics of rays and loops on the sphere minus a Cantor set union a
//! point at infinity.
//!
//! A fixed equator circle through the Cantor set and ∞ cuts the sphere into a
//! north and a south hemisphere; a ray (a simple arc from ∞ to a Cantor
//! point) or a loop (a simple arc from ∞ back to itself) is recorded by the
//! sequence of equator segments it crosses. On top of that coding the crate
//! provides:
//!
//! - [`coding`] — code words, reduction, the standard ray families and the
//!   prefix-depth function `A`;
//! - [`model`] — a finite marked-sphere model: realization of codes as
//!   normal arcs, tightening to minimal position, exact geometric and signed
//!   crossing numbers, disjointness, simplicity, and the `hat` map to loops;
//! - [`mcg`] — mapping classes (the shifts `t1`, `t2`, the half-turn `phi`,
//!   and their compositions) acting on codes;
//! - [`unicorn`] — unicorn arcs and paths between oriented loops, with the
//!   thin-triangle and subpath checks;
//! - [`graphs`] — finite slices of the ray and loop graphs, BFS distances
//!   with honest certificates, quasi-isometry checks, thinness sampling;
//! - [`qm`] — counting quasimorphisms on axis segments and the
//!   non-reversal evidence machinery.

pub mod coding;
pub mod graphs;
pub mod mcg;
pub mod model;
pub mod qm;
pub mod unicorn;
