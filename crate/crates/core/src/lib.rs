//! Nonautonomous dynamics of finitely generated Möbius self-maps of the
//! unit disc.
//!
//! A finite set of Möbius maps, each sending the unit disc strictly inside
//! itself, generates composition sequences `F_n = f_1 ∘ ⋯ ∘ f_n`. The images
//! `F_n(𝔻)` are nested discs whose intersection is either a point
//! (limit-point type) or a disc (limit-disc type). This crate
//!
//! * computes the tangency data `(α_f, β_f, γ_f)` of each generator and the
//!   tangency graph of the set ([`tangency`]),
//! * decides limit-point versus limit-disc type for eventually periodic
//!   words and computes the limit disc in closed form ([`classify`]),
//! * evaluates the Hausdorff dimension of the set of limit-disc words
//!   ([`dimension`]),
//! * simulates orbits, escape sums and pointwise convergence ([`dynamics`]),
//! * and exposes all of it through JSON/CSV reports ([`cli`]) used by the
//!   `discdyn` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod dimension;
pub mod dynamics;
pub mod error;
pub mod mobius;
pub mod tangency;
pub mod tol;

pub use classify::{AffineMap, Classification, Verdict, WordSpec};
pub use dimension::{DimensionMethod, DimensionReport};
pub use dynamics::OrbitTrace;
pub use error::{Error, Result};
pub use mobius::{chordal_metric, Complex, Disc, ExtComplex, H3Point, MobiusMap};
pub use tangency::{GeneratorSet, TangencyData, TangencyGraph};
