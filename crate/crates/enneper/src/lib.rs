//! Exact minimal surfaces from harmonic height fields with helical motifs.
//!
//! A harmonic multivalued height field `h` built from helical motifs (sums of
//! `pitch * arg(z - center)` terms, or their periodic chain analogues) can be
//! turned into an exactly minimal surface by the immersion
//! `r(z) = (z - conj(P(z)), h(z))` where `P` is the holomorphic potential with
//! `P' = (dh/dz)^2`. This crate implements that construction in closed form
//! for finite motif sets and for twist/untwisted grain-boundary chains, plus
//! the analysis machinery around it: curvature and Gauss maps, graph
//! comparisons, far-field multipole expansions, Gauss-map level sets and
//! structural transitions, stability criteria, and mesh export.
//!
//! Start with [`MotifField`], then see the `examples/` directory; each example
//! exercises one capability end to end. The `enneper` binary exposes the same
//! operations as a small command line tool.

pub mod area;
pub mod cli;
pub mod error;
pub mod field;
pub mod graph;
pub mod immersion;
pub mod levelset;
pub mod mesh;
pub mod multipole;
pub mod quad;
pub mod region;
pub mod stability;

pub use error::{Error, Result};
pub use field::{Complex, FieldJet, HelicalMotif, MotifField};
