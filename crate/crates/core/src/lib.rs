//! Spinor genus criteria for integral lattices and trace forms of number
//! fields, binary form class groups with their 4-ranks, and density scans
//! over quadratic fields.

pub mod arith;
pub mod binaryforms;
pub mod density;
pub mod error;
pub mod lattice;
pub mod padic;
pub mod poly;
pub mod serial;
pub mod spinor;
pub mod tracefields;

pub use error::{Error, Result};
