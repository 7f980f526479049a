pub mod adjoint;
pub mod bar;
pub mod cli;
pub mod cospan;
pub mod envbm;
pub mod error;
pub mod finset;
pub mod frobenius;
pub mod json;
pub mod rng;
pub mod selftest;

pub use cospan::{CoherenceIso, Cospan, TwoCell};
pub use error::{Error, Result, Side};
pub use finset::{FinFn, FinSet};
