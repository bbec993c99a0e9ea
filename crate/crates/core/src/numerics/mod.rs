//! Numerical kernels used by the solver.

mod finite_diff;
mod simplex;
mod spectral;
mod sylvester;

pub use finite_diff::finite_difference_gradient;
pub use simplex::{project_columns_to_simplex, project_to_simplex, SimplexVector};
pub use spectral::spectral_norm_upper_bound;
pub use sylvester::{solve_sylvester, sylvester_residual, SYMMETRY_TOLERANCE};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty input to {0}")]
    Empty(&'static str),

    #[error("column {index}: {source}")]
    Column {
        index: usize,
        #[source]
        source: Box<NumericsError>,
    },

    #[error("{which} is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { which: &'static str, asymmetry: f64 },

    #[error("Sylvester equation is singular: eigenvalue sum {sum:.3e}")]
    Singular { sum: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
