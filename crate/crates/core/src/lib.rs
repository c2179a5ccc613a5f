// `!(x > 0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numerics;
pub mod theta;
pub mod lfunction;
pub mod asymptotics;
pub mod interval;
pub mod jensen;
pub mod cache;
pub mod reference;

pub use error::{Error, Result};
