//! Compactly supported cone-adapted shearlet frames on bounded domains.
//!
//! The crate builds the full experimental pipeline around truncated (orthogonally
//! projected) shearlet systems:
//!
//! - [`geometry`]: bounded domains with piecewise-C² boundaries (star-shaped radius
//!   functions or graph-parameterized pieces), corner detection, tangent slopes,
//!   certified curvature bounds.
//! - [`cartoon`]: certified cartoon-like test functions `f = f0 + f1·χ_B` with
//!   closed-form C² bounds, and deterministic supersampled rasterization.
//! - [`generators`]: separable compactly supported generators from maximally flat
//!   half-band lowpass pairs (cascade construction) plus empirical Fourier-decay
//!   validation.
//! - [`system`]: the cone-adapted system on a grid — index enumeration, atom
//!   sampling, forward analysis and adjoint synthesis.
//! - [`frames`]: frame operator, frame-bound estimation, domain projection and
//!   conjugate-gradient dual reconstruction.
//! - [`approx`]: N-term thresholding, tail energies and decay-rate fits.
//! - [`theorycheck`]: dyadic-cube bookkeeping, coefficient-decay envelopes and
//!   intersection-count ratios.

pub mod geometry;
pub mod grid;
pub mod jsonio;

pub use geometry::{BoundaryPiece, DomainSpec, RadiusCurve};
pub use grid::ImageGrid;
