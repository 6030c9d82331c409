//! Exact-arithmetic checks for the images of mod-ℓ Galois representations
//! attached to modular eigenforms.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: integers, polynomials over Q and F_ℓ, finite fields,
//!   number fields, prime splitting and subfields.
//! * [`groups`]: explicit finite groups, coset orbits and exact densities of
//!   congruence and splitting conditions on primes.
//! * [`newform_data`]: eigenform tables, Dirichlet characters, twisting,
//!   validation and an elliptic-curve point-count oracle.
//! * [`galois_image`]: reduction modulo a prime slot, projective image
//!   classification, CM and inner-twist detection.
//! * [`constructions`]: tamely-dihedral certificates, level-raising prime
//!   sieves, hypothesis checkers and realization scans.

pub mod algebra;
pub mod constructions;
pub mod galois_image;
pub mod groups;
pub mod newform_data;
pub mod par;
pub mod primes;
