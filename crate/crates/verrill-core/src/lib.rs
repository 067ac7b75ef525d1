//! Exact arithmetic core for verifying the modularity of Verrill's rigid
//! Calabi-Yau threefold.
//!
//! The crate ties two independent computations to one another:
//!
//! - the *geometric* side counts points of the threefold over prime fields
//!   and assembles the degree-3 Frobenius trace `t3(p)` through the Lefschetz
//!   fixed point formula ([`geometry`], [`lefschetz`]);
//! - the *modular* side expands the weight-4 eta product
//!   `eta(q)^2 eta(q^2)^2 eta(q^3)^2 eta(q^6)^2` on Gamma_0(6) and reads off
//!   its Hecke eigenvalues `a_p` ([`qseries`], [`lfunction`]).
//!
//! Modularity at desk scale is the exact equality `t3(p) = a_p` for every
//! good prime in range, calibrated on a handful of small primes and verified
//! on the held-out rest.
//!
//! The remaining modules carry the supporting algebra:
//!
//! - [`ffield`]: modular arithmetic and enumeration of products of
//!   projective spaces over `F_p`;
//! - [`polyalg`]: exact sparse multivariate polynomials over big rationals,
//!   with a text parser, rational substitution, exact division, and
//!   pseudo-division;
//! - [`invariants`]: Hodge/Betti bookkeeping, the Beauville fiber table, and
//!   the `P Gamma_1(N) = P Gamma_0(N)` criterion;
//! - [`birat`]: a machine-checkable replay of the birational equivalence
//!   between the bidegree-(4,2) model in `P^3 x P^1` and the self fiber
//!   product of the elliptic modular surface of level 6.
//!
//! Everything here is `no_std` (with `alloc`) and pure: all functions are
//! deterministic, and the expensive counting loops may be distributed over
//! primes by the caller.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod birat;
pub mod ffield;
pub mod geometry;
pub mod invariants;
pub mod lefschetz;
pub mod lfunction;
pub mod polyalg;
pub mod qseries;

pub use ffield::PrimeModulus;
pub use polyalg::MPoly;
pub use qseries::IntSeries;
