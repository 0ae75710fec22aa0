//! Numerical machinery for three-point configuration problems in the plane.
//!
//! The crate is organised around the objects that appear when one studies
//! how often a fixed triangle is realised (approximately) by points drawn
//! from a fractal measure:
//!
//! * [`measure`]: discrete measures (Cantor sets, products, thickenings of
//!   finite point sets), energy integrals and Riesz potentials.
//! * [`circle`]: arc-length measures on circles, their mollifications, the
//!   Fourier transform of the circle measure and the two-circle kernel.
//! * [`bilinear`]: the bilinear averaging operator over triangles with one
//!   unit side, negative-order Sobolev norms and the boundedness experiment.
//! * [`trilinear`]: triple-annulus masses, the mollified trilinear form and
//!   the configuration histogram.
//! * [`discrete`]: exact counting of approximately congruent triangles in
//!   finite point sets.
//! * [`sharpness`]: the shifted product-Cantor construction and its scaling
//!   laws.
//!
//! Heavy loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise. All
//! reductions are performed in a fixed order so that results do not depend
//! on the number of worker threads.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bilinear;
pub mod circle;
pub mod discrete;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod measure;
pub mod par;
mod quad;
pub mod sharpness;
pub mod spatial;
pub mod tolerances;
pub mod trilinear;

pub use error::{Error, Result};
pub use fit::ExponentFit;
pub use geometry::{Point2, TriangleSpec};
pub use grid::GridFunction;
pub use measure::{CantorSpec, DiscreteMeasure, Limits};
