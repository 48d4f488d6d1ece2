//! Exact formal-calculus toolkit over the rationals.
//!
//! The crate provides, in roughly bottom-up order:
//!
//! - [`series`]: truncated or exact formal Laurent series with rational
//!   coefficients, with derivative, formal integral, composition, the
//!   logarithmic derivative and its preimage trichotomy.
//! - [`weyl`]: canonical forms `Σ fᵢ∂ⁱ` and products in operator algebras
//!   with Laurent-polynomial coefficients.
//! - [`witt`]: the Lie algebra of first-order operators `f∂`, its bracket,
//!   centralizers, eigenvector construction and spectrum classification.
//! - [`pseudomonoid`]: subsets of ℚ closed under sums of distinct elements,
//!   with windowed ideal enumeration, simplicity, self-containment and
//!   equivalence tests.
//! - [`graded`]: strongly graded Lie algebras `⊕ E_g` with structure
//!   constants `[e_a,e_b] = (b−a)e_{a+b}`, exact windowed spectral analysis
//!   and verified endomorphisms.
//! - [`parse`]: the shared expression grammar for series, operator and
//!   graded-element literals.
//! - [`verify`]: seeded, deterministic invariant suites used by the CLI.
//!
//! All values are immutable and every operation is a pure function of its
//! inputs, so everything here is safe for unrestricted concurrent use.

pub mod graded;
pub mod linalg;
pub mod parse;
pub mod pseudomonoid;
pub mod scalar;
pub mod series;
pub mod verify;
pub mod weyl;
pub mod witt;

pub use scalar::Scalar;
pub use series::{DegreeVerdict, LaurentSeries, LdPreimageResult, Precision, SeriesError};
pub use weyl::{OrderValue, WeylElement};
pub use witt::{MembershipVerdict, SpectrumClassification, StableAlgebraId, WittElement};
