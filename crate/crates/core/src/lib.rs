//! Exact symbolic computation with derivations over finitely presented
//! commutative algebras.

pub mod algebra;
pub mod derivations;
pub mod document;
pub mod error;
pub mod groebner;
pub mod kahler;
pub mod module;
pub mod polyring;
pub mod report;
pub mod sample;
pub mod symmetric;
pub mod wext;

pub use error::{Error, Result};
