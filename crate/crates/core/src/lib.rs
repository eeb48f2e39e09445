//! Mellin transforms with singular expansions, homogeneous distributions
//! and their Fourier transforms, and Paley-Wiener growth checks.

pub mod error;
pub mod fourier;
pub mod funcmodel;
pub mod homdist;
pub mod io;
pub mod mellin;
pub mod singexp;
pub mod pwcheck;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
