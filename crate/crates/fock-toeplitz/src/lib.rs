pub mod asymptotics;
pub mod bigarith;
pub mod cli;
pub mod error;
pub mod landau;
pub mod moments;
pub mod orthopoly;
pub mod pencil;
pub mod symbols;
pub mod toeplitz;

pub use error::{Error, Result};
