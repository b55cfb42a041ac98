//! # revpinsker
//!
//! Optimal upper bounds on f-divergences between discrete distributions in
//! terms of total variation `δ` and the extremes `(m, M)` of the density
//! ratio `dP/dQ`, together with the ternary pairs that attain them.
//!
//! ## Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`extended`] | [`ExtendedReal`], values in `[-∞, +∞]` |
//! | [`distribution`] | validated probability vectors |
//! | [`generator`] | convex generators `f` with their limits at `0` and `∞` |
//! | [`divergence`] | `D_f`, total variation, ratio extremes, chord bound |
//! | [`bounds`] | closed-form optimal bounds and prior comparators |
//! | [`extremal`] | attaining pairs and class membership checks |
//! | [`oracle`] | randomized soundness / tightness / feasibility search |
//! | [`grid`] | the default `(m, M, δ)` parameter grid |
//!
//! ## Quick Start
//!
//! ```rust
//! use revpinsker::{bounds, extremal, generator, divergence, ClassParams, ExtendedReal};
//!
//! let params = ClassParams::new(0.25, 0.5, ExtendedReal::Finite(2.0)).unwrap();
//! let kl = generator::kl_generator();
//!
//! let bound = bounds::theorem1_bound(&kl, &params).unwrap();
//! let pair = extremal::ternary_extremal(&params).unwrap();
//! let attained = divergence::f_divergence(&kl, &pair.p, &pair.q).unwrap();
//!
//! assert!((bound.to_f64() - 0.25 * 2f64.ln()).abs() < 1e-12);
//! assert!((bound.to_f64() - attained.to_f64()).abs() < 1e-12);
//! ```
//!
//! All logarithms are natural (nats).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod distribution;
pub mod divergence;
mod error;
pub mod extended;
pub mod extremal;
pub mod generator;
pub mod grid;
pub mod oracle;

pub use bounds::{BoundReport, ClassParams, Formula};
pub use distribution::Distribution;
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use extremal::{ExtremalPair, PairReport};
pub use generator::Generator;
