//! Relative probability: classical probability conditioned on observability.
//!
//! * [`prob`] — finite classical joints, events, and the Wigner–d'Espagnat
//!   inequality in probabilistic and set form.
//! * [`tfu`] — joints over `{T, F, U}^n`, relative probability `[p]`,
//!   relative conditionals `[q]_p` and their non-commutativity.
//! * [`geometry`] — square-root state vectors, diagonal projectors and the
//!   Born rule over `ℝ^{2^n}` and `ℝ^{3^n}`.
//! * [`qubit`] — the polar form of a single proposition, the rotation onto the
//!   `TF` plane, and the complexification onto `ℂ²`.
//! * [`sim`] — a Monte Carlo world behind an observability shield.
//! * [`repro`] — one report row per quantitative claim.

pub mod error;
pub mod geometry;
pub mod grid;
pub mod prob;
pub mod qubit;
pub mod repro;
pub mod sim;
pub mod tfu;

pub use error::{Error, Result};
