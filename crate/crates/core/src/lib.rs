//! Exact partition calculus for symplectic nilpotent orbits: orders,
//! collapses and duality, formal global parameters, type C root
//! bookkeeping with exact matrices, and exponent tables for residual
//! towers.

pub mod arthur;
pub mod collapse;
pub mod descent;
pub mod error;
pub mod exchange;
pub mod matrix;
pub mod partition;
pub mod residual;
pub mod roots;

pub use error::{Error, Result};
pub use partition::Partition;
