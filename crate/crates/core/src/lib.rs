//! Exact-arithmetic rack/quandle homology and knot-diagram cocycle invariants.
//!
//! The crate is organised bottom-up:
//!
//! * [`quandle`] — finite racks/quandles as operation tables, with axiom
//!   validation, orbits, and homomorphism checks.
//! * [`chain`] — sparse formal chains and cochains over exact coefficients,
//!   boundary/coboundary maps, the degenerate quotient, and the shifting and
//!   splitting chain maps.
//! * [`matrix`] — arbitrary-precision integer matrices, Smith normal form,
//!   and prime-field elimination.
//! * [`homology`] — homology groups, boundary-membership certificates, and
//!   cocycle-space bases.
//! * [`diagram`] — oriented PD-coded link diagrams: regions, signs,
//!   colourings, shadow colourings, and chain extraction.
//! * [`invariants`] — Boltzmann weights and the (based) shadow cocycle
//!   state-sum invariants.
//! * [`wirtinger`] — formal arc-words, word assignments between diagrams,
//!   symbolic shadow chains, and pushforwards.
//! * [`realization`] — realizing rack 3-cycles as glued unit squares on a
//!   closed oriented surface.

pub mod chain;
pub mod cli;
pub mod diagram;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod quandle;
pub mod realization;
pub mod wirtinger;

/// Dense 0-based element of a finite rack or quandle.
pub type El = usize;
