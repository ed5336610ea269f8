//! Exact finite-dimensional variational analysis on polyhedral data.
//!
//! Clarke tangent and normal cones of locally conical unions of polyhedral
//! cones, uniform tangent sets, (strong) tangential transversality, polar
//! calculus of polytopes and cones, and the Clarke subdifferential sum rule
//! for piecewise-affine functions. All certification paths use exact
//! rational arithmetic.

pub mod calculus;
pub mod cells;
pub mod clarke;
pub mod cone;
mod dd;
pub mod error;
pub mod gallery;
pub mod halfspace;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod par;
pub mod polyhedron;
pub mod pwa;
pub mod rational;
pub mod subdiff;
pub mod transversality;
pub mod union;
pub mod vector;
pub mod zoo;

pub use cone::PolyhedralCone;
pub use error::{Error, Result, MAX_DIM};
pub use halfspace::{Halfspace, Hyperplane};
pub use lp::{lp_solve, LinearProgram, LpOutcome, Sense};
pub use par::ExecMode;
pub use polyhedron::{convex_hull, Polyhedron};
pub use pwa::{Affine, PWAFunction};
pub use rational::Rational;
pub use union::UnionSet;
pub use vector::Vector;
