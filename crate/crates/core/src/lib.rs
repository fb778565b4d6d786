//! Generalized Cesàro-like operators on truncated power series.
//!
//! The operator maps f(z) = Σ a_n z^n to
//! Σ (μ_n Σ_{k≤n} Γ(n−k+α)/(Γ(α)(n−k)!) a_k) z^n, where μ_n are the power
//! moments of a finite positive measure on [0, 1). Around it the crate
//! provides moment sequences, analytic function-space norms on the disk,
//! and the series criteria that decide when the operator maps Bloch-type
//! spaces boundedly into analytic Besov spaces.

pub mod config;
pub mod criteria;
pub mod error;
pub mod measures;
pub mod norms;
pub mod operator;
pub mod quad;
pub mod series;
pub mod specfun;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
pub use measures::{moments, Atom, Measure, MomentSequence};
pub use num_complex::Complex64;
pub use series::PowerSeries;
pub use text::parse_measure;
