#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod oracle;
pub mod quad1d;
pub mod singquad;
pub mod tetgeom;
pub mod volquad;

pub use error::{Error, Result};
