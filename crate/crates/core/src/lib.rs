//! Exact comparison of polynomial de Rham forms on the Stanley–Reisner
//! scheme of a finite simplicial complex with Sullivan's polynomial forms.
//!
//! Start with [`Engine`], which caches presentations and truncations for one
//! complex, and [`driver`] for complete verification runs.

pub mod cech;
pub mod cohomology;
pub mod corpus;
pub mod driver;
pub mod engine;
pub mod error;
pub mod exactla;
pub mod kaehler;
pub mod polyalg;
pub mod simplicial;
pub mod sullivan;

pub use engine::Engine;
pub use error::{Error, Result};
