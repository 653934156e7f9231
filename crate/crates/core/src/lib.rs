pub mod characterize;
pub mod error;
pub mod flat_model;
pub mod io;
pub mod killing;
pub mod kostant;
pub mod lie;
pub mod suite;
pub mod tensor;
pub mod tractor;

pub use error::CoreError;
