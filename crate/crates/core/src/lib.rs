//! Exact computations in doubles `L = G *_H G` of free groups: normal forms,
//! the identification map onto `G`, the projection onto `L/N`, explicit
//! `F2 x F2` subgroups, and the fiber-product membership reduction.

pub mod amalgam;
pub mod embedding;
pub mod error;
pub mod freegroup;
pub mod mihailova;
pub mod sample;

pub use error::{Error, Result};
