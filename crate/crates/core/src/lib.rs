//! Exact computation of meromorphic b-functions and related invariants.

pub mod ann;
pub mod bfunction;
pub mod config;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod mero;
pub mod multiplier;
pub mod nc;
pub mod par;
pub mod poly;
pub mod rational;
pub mod weyl;

pub use bfunction::BFunction;
pub use config::EngineConfig;
pub use error::{Error, Result};
pub use poly::MultiPoly;
pub use rational::Rational;
