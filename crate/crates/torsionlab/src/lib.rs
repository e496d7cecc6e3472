//! Torsional rigidity, Dirichlet spectra, and heat content for rectangles,
//! right isosceles triangles, and disjoint unions of them.
//!
//! The crate computes the torsional rigidity T of a region through three
//! mutually independent routes and cross-checks them:
//!
//! * closed-form series expressions built from parity-restricted hyperbolic
//!   k-sums ([`torsion`], [`series`]),
//! * the spectral double sum over Dirichlet eigenvalues and eigenfunction
//!   integrals ([`spectrum`], [`torsion::torsion_spectral`]),
//! * a finite-difference Poisson oracle with Richardson extrapolation
//!   ([`oracle`]).
//!
//! On top of these sit the exact isospectrality check for the Chapman pair
//! ([`geometry::chapman_pair`], [`spectrum::isospectral_check`]), spectral
//! heat content with its first-moment identity ([`heat`]), and the end-to-end
//! verification report ([`chapman`]).

pub mod chapman;
pub mod error;
pub mod fmt;
pub mod geometry;
pub mod heat;
pub mod oracle;
pub mod parallel;
pub mod quad;
pub mod rational;
pub mod series;
pub mod spectrum;
pub mod torsion;

pub use error::Error;
pub use geometry::{chapman_pair, Length, Region, Shape};
pub use rational::Rational;
pub use spectrum::{CoeffSource, ModeIndex, RationalEigenvalue, SpectrumSlice};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
