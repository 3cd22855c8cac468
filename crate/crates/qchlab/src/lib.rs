//! qchlab: a coframe-based computational differential-geometry engine.
//!
//! The crate constructs three explicit families of 4-dimensional Kahler
//! geometries from a planar profile pair (h, H), solves the Liouville-type
//! profile equations that close each family, and numerically certifies the
//! geometric identities the construction is designed to satisfy: closedness
//! of the opposite Kahler form, integrability of both structures, Ricci
//! J-invariance, the two-term structure of nabla Omega and the Lee form,
//! the quartic holomorphic-curvature law, semi-symmetry (or its controlled
//! failure), conformality of the nullity foliation, and non-l.c.K.
//! certificates.

pub mod error;
pub mod families;
pub mod field;
pub mod forms;
pub mod frame;
pub mod harness;
pub mod hermitian;
pub mod jet;
pub mod parse;
pub mod point;
pub mod solver;
pub mod spline;

pub use error::{Error, Result};
pub use field::Field;
pub use point::{Axis, Box4, Point4};
