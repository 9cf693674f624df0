//! Implicit and semi-implicit well-balanced finite-volume solvers for 1D
//! balance laws `u_t + f(u)_x = S(u) H_x + S2(u)`.

pub mod error;
pub mod grid;
pub mod harness;
pub mod models;
pub mod numflux;
pub mod par;
pub mod reconstruction;
pub mod state;
pub mod stationary;
pub mod steppers;

pub use error::{Error, Result};
pub use grid::{BoundaryKind, BoundaryPolicy, CellField, Grid};
pub use state::State;
