//! Exact q-series and numerical modular completions for the identity between
//! the sieved two-color partition generating function `(q^4;q^4)_inf S(q) | S_{2,0}`
//! and a Hecke-type double sum.
//!
//! The exact layer ([`series`], [`etatheta`], [`genfun`], [`indefinite`]) works
//! with rational coefficients on the `q^(1/24)` grid. The numeric layer
//! ([`completion`]) evaluates the non-holomorphic completions in complex double
//! precision, and [`verify`] ties both into identity reports and the CLI.

pub mod completion;
pub mod error;
pub mod etatheta;
pub mod genfun;
pub mod indefinite;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use series::{q_pow, QSeries, SCALE};
