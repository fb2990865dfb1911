//! Two-dimensional incompressible flow past bladeless wind turbine mast
//! sections: geometry, a projection solver, force analysis and design sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod campaign;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod reference;
pub mod solver;
pub mod verification;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/campaign.md")]
    mod campaign {}
}
