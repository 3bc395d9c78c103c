//! Computable entanglement measures (concurrence, negativity, realignment) for
//! multi-qubit states, and numerical checks of the monogamy inequalities that
//! constrain how entanglement is shared among subsystems.

pub mod blochlab;
pub mod cli;
pub mod error;
pub mod measures;
pub mod monogamy;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
