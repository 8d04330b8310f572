#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assets;
pub mod cli;
pub mod corpus;
pub mod czt;
pub mod error;
pub mod frft;
pub mod io;
pub mod means;
pub mod multiplier;
pub mod signal;
pub mod special;
pub mod validation;

pub use error::{FrftError, Result};
