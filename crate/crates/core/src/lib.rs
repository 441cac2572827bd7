pub mod census;
pub mod error;
pub mod exactfield;
pub mod linalg;
mod modp;
mod sqrtq;
pub mod oracle;
pub mod plane;
pub mod poly;
pub mod reflgroup;
pub mod search;
pub mod tangency;
pub mod zerodim;

pub mod catalog;
pub mod io;

pub use error::{Error, Result};
