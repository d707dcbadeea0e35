//! Oscillation analytics for plurisubharmonic functions and weighted Bergman
//! kernels at the origin.
//!
//! The crate is organised bottom-up:
//!
//! * [`types`] and [`catalog`]: regions in ℂⁿ and the catalog of test
//!   functions with their closed-form metadata,
//! * [`quad`]: deterministic quadrature over polydiscs, tori, segments and
//!   convex polytopes,
//! * [`osc`]: sup / mean / upper and mean oscillation, the Harnack
//!   decomposition, Lelong-class and counterexample sweeps,
//! * [`gammaremez`]: the segment constant γ and the Remez-type bound for
//!   `log|p|`,
//! * [`bergman`]: weighted Bergman kernels at the origin of polydiscs,
//! * [`jn`]: empirical John–Nirenberg machinery on anisotropic boxes,
//! * [`verify`]: the acceptance suite, shared by the CLI and the tests.

pub mod bergman;
pub mod catalog;
pub mod defaults;
pub mod error;
pub mod fit;
pub mod gammaremez;
pub mod grammar;
pub mod jn;
pub mod osc;
pub mod quad;
pub mod types;
pub mod verify;

pub use catalog::{Polynomial, PshFunction};
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use types::{AnisotropicBox, ComplexVector, ConvexPolytope, Polydisc, Region, Segment};
