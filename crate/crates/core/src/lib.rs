//! Numerical toolkit for the break-up of small-dispersion KdV solutions.
//!
//! The library computes, for a single-bump negative initial datum `u_0`:
//!
//! * the gradient-catastrophe point of the dispersionless (Hopf) equation
//!   and Hopf solutions up to that time ([`profile`], [`hopf`]),
//! * the semiclassical phase functions and their identities ([`phase`]),
//! * exact and WKB scattering data of the associated Schroedinger operator
//!   ([`scattering`]),
//! * the pole-free solution `U(X,T)` of the second Painleve-I equation as a
//!   boundary-value problem with continuation in `T` ([`pi2`]),
//! * small-dispersion KdV solutions by a Fourier integrating-factor scheme
//!   ([`kdv`]),
//! * and the double-scaling comparison that exhibits the universal break-up
//!   profile together with its error rate ([`harness`]).
//!
//! Plain-text cache formats used by the command-line front end live in
//! [`cache`].

pub mod cache;
pub mod error;
pub mod gamma;
pub mod harness;
pub mod hopf;
pub mod kdv;
pub mod phase;
pub mod pi2;
pub mod profile;
pub mod quad;
pub mod scattering;

pub use error::{Error, Result};
