//! Extremal chords of convex bodies through a fixed pivot point.
//!
//! Modules, bottom up:
//!
//! - [`geometry`]: points, lines, hyperplanes and the tolerance policy.
//! - [`body`]: convex bodies, chords, supporting hyperplanes, face dimension.
//! - [`chord_scan`]: planar chord-length functions, sweeps and extremum refinement.
//! - [`cpp`]: residuals of the concurrent-perpendiculars property.
//! - [`philo`]: the hyperbola–circle construction of the shortest chord in an angle.
//! - [`nd_search`]: multistart direction search in any dimension.
//! - [`polytope`]: far-field constants, facet angles and audits for polytopes.
//!
//! Loops over sweep samples, multistart branches and audit pivots run through
//! [`exec::map_indexed`], which is data-parallel with the `parallel` feature
//! (on by default) and sequential otherwise. Both give identical results.

pub mod body;
pub mod chord_scan;
pub mod cpp;
pub mod error;
pub mod exec;
pub mod nd_search;
pub mod geometry;
pub mod philo;
pub mod poly;
pub mod polytope;
pub mod text;

pub use body::{Body, BoundaryFeature, Chord, ChordResult, Classification, PivotClass, Support};
pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{point, Hyperplane, Line, Point, Tolerance, Vector};
