//! Numerical laboratory for type-II blowup of the radial semilinear heat equation
//!
//! ```text
//! u_t = Δu + |u|^{p-1} u - |u|^{q-1} u,   p = (n+2)/(n-2),  0 < q < 1
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation: steady profiles, the two linearized spectra, matched-asymptotics
//! exponents, the monomial correction ladder, the cutoff ansatz and a radial
//! method-of-lines simulator. IO, configuration and the command line live in
//! the `blowuplab` crate.
#![no_std]
// `num_traits::Float` supplies the math methods without std; whenever std is
// linked into the same build its inherent methods shadow the trait
#![allow(unused_imports)]
// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ansatz;
pub mod corrections;
pub mod error;
pub mod fit;
pub mod matching;
pub mod model;
pub mod monomial;
pub mod ode;
pub mod profiles;
pub mod quad;
pub mod simulator;
pub mod spectra;
pub mod table;

pub use error::{Error, Result};
pub use model::{ModelParams, Nonlinearity, NonlinearityKind};
pub use monomial::{Exponent, MonomialSum};
pub use table::RadialTable;
