//! Summable families over bornological index sets: series with bounded
//! support, generalized power series, strongly linear maps and the
//! closure operators they induce.

pub mod bornology;
pub mod closure;
pub mod error;
pub mod hahn;
pub mod lattice;
pub mod mono;
pub mod scalar;
pub mod series;
pub mod slalg;
pub mod strmap;

pub use bornology::{Bornology, DescribedSet, Universe, Verdict};
pub use error::{Error, Result};
pub use hahn::HahnSeries;
pub use mono::Mono;
pub use scalar::{Field, Scalar};
pub use series::{Series, SummableFamily};
pub use strmap::StrongLinearMap;
