//! Guide chapters. Each module holds one chapter of `book/`, so that its
//! code samples run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/function_models.md")]
pub mod function_models {}

#[doc = include_str!("../../../book/src/mellin.md")]
pub mod mellin {}

#[doc = include_str!("../../../book/src/singular_expansions.md")]
pub mod singular_expansions {}

#[doc = include_str!("../../../book/src/distributions.md")]
pub mod distributions {}

#[doc = include_str!("../../../book/src/fourier.md")]
pub mod fourier {}

#[doc = include_str!("../../../book/src/growth.md")]
pub mod growth {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
