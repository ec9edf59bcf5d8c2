//! Exact verification of double Poisson brackets and pre-Calabi-Yau
//! A∞-structures on finite-dimensional graded algebras.

pub mod ainfty;
pub mod cli;
pub mod corpus;
pub mod correspondence;
pub mod dpa;
pub mod error;
pub mod functoriality;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod pinfty;
pub mod report;

pub use error::{Error, Result};
