//! Hamburger-cheeseburger words, the planar maps they encode, and the
//! sandpile, Tutte and random-walk machinery used to study them.

pub mod cli;
pub mod enumeration;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod map;
pub mod quadrant;
pub mod sampler;
pub mod sandpile;
pub mod stats;
pub mod table;
pub mod tutte;
pub mod word;

pub use error::{Error, Result};
pub use graph::MultiGraph;
pub use word::{Letter, Word};
