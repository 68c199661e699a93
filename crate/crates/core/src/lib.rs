pub mod audit;
pub mod error;
pub mod groups;
pub mod interval;
pub mod limits;
pub mod moebius;
pub mod numfield;
mod par;
pub mod plot;
pub mod poly;

pub use error::{Error, Result};
