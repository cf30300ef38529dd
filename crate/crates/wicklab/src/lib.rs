//! Anti-Wick (Toeplitz) operator calculus on truncated Bargmann-Fock spaces
//! over C^n, plus the `wicklab` experiment CLI that measures how operator
//! norms, Hilbert-Schmidt norms and Garding-type lower bounds behave as the
//! dimension n grows.

pub mod cli;
pub mod config;
pub mod error;
pub mod fock;
pub mod heisenberg;
pub mod lab;
pub mod linalg;
pub mod quantize;
pub mod quad;
pub mod symbols;

pub use error::{Result, WickError};
