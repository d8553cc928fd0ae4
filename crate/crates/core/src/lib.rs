//! Exact verification engine for class-count identities of finite spin groups
//! over `F_q`, `q` odd.

pub mod error;
pub mod report;
pub mod fqpoly;
pub mod series;
pub mod orbits;
pub mod delta;
pub mod classcount;
pub mod dualcount;
pub mod oracle;

pub use error::{Error, Result};
pub use report::{CheckReport, Status};
