pub mod arith;
pub mod cli;
pub mod combi;
pub mod cyclotomic;
pub mod decide;
pub mod error;
pub mod hilbert;
pub mod invariants;
pub mod oracle;

pub use error::{Error, Result};
