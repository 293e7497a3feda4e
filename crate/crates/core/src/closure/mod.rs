//! Σ-closure on `k^ℕ`: dual bases for countable families of functionals,
//! windowed Σ-span decisions, and finite shadows of dense subspaces.

pub mod basis;
pub mod linalg;
pub mod shadow;
pub mod span;

pub use basis::{dual_basis_construction, ConstructedBasis, FunctionalFamily, Recovery, Step};
pub use shadow::{dense_sigma_closed_example, ShadowRecord};
pub use span::{idempotence_check, sigma_span_window, Generator, SpanVerdict, SpanWitness};
