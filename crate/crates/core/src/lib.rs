pub mod algebra;
pub mod constants;
pub mod continuation;
pub mod error;
pub mod exact;
pub mod expr;
mod numeric;
pub mod polylog;
pub mod sums;

pub use error::{Error, Result};
