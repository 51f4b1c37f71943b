//! Biharmonic curves in warped products `I ×_f Mⁿ(c)`.
//!
//! Expressions are evaluated on 4-jets, so every derivative along a curve is
//! exact up to floating point. The pipeline is: parse the warping function
//! and curve components, build the Frenet apparatus on a grid, form the
//! bitension field two ways, and check the biharmonicity conditions.

pub mod biharmonic;
pub mod curvekit;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod gallery;
pub mod geometry;
pub mod jet;
pub mod solver;

pub use error::{Error, Result};
pub use jet::Jet4;

/// Rank threshold used when no explicit value is supplied.
pub const DEFAULT_EPS_RANK: f64 = 1e-9;

/// Knobs shared by the analysis entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub grid_points: usize,
    pub tol: f64,
    pub eps_rank: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            grid_points: 257,
            tol: 1e-7,
            eps_rank: DEFAULT_EPS_RANK,
        }
    }
}
