pub mod cli;
mod error;
pub mod finspace;
pub mod guards;
pub mod io;
pub mod mapcalc;
pub mod miner;
pub mod treespace;

pub use error::Error;

#[cfg(test)]
pub(crate) mod testutil;
