pub mod arcs;
pub mod blocks;
pub mod corpus;
pub mod error;
pub mod grammar;
pub mod machine;
pub mod pda;
pub mod product;
pub mod pumping;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
