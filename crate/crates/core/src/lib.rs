//! Non-crossing partitions, the large deviations of their block sizes, and the support edge of
//! measures with non-negative free cumulants.

pub mod catalan;
pub mod edge;
pub mod error;
pub mod freeprob;
pub mod ldp;
pub mod lln;
pub mod precision;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
