pub mod arith;
pub mod crosscheck;
pub mod error;
pub mod gf;
pub mod labels;
pub mod matgroups;
pub mod matrix;
pub mod par;
pub mod partitions;
pub mod radical;
pub mod roots;
pub mod symplectic;

pub use error::{Error, Result};
