//! Order types of context-free languages under the lexicographic order.

pub mod automata;
pub mod error;
pub mod grammar;
pub mod omega_word;
pub mod pumping;
pub mod scatteredness;
pub mod omega_decision;
pub mod ordertype;
pub mod oracle;
pub mod cli;

pub use error::{Error, Result};
