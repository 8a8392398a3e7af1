//! Exact arithmetic kernel: rationals, truncated power series in `t`, sparse
//! multivariate polynomials, polynomial matrices, resultants and rational
//! nullspaces.

pub mod echelon;
pub mod linalg;
pub mod matrix;
pub mod mpoly;
pub mod parse;
mod rat;
pub mod resultant;
pub mod series;

pub use echelon::{echelon_pivot_orders, SeriesEchelon, ShiftModule};
pub use linalg::{q_nullspace, rank, row_echelon, IncrementalSpan, RowEchelon};
pub use matrix::PolyMatrix;
pub use mpoly::{vars, MPoly, Mono};
pub use parse::{ParseError, ParseErrorKind};
pub use rat::{ParseRatError, Rat};
pub use resultant::sylvester_resultant;
pub use series::TSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("expected a unit with constant term 1, found constant term {0}")]
    NonUnitInput(Rat),
    #[error("series order must be {expected}, found {found:?}")]
    BadOrder {
        expected: &'static str,
        found: Option<usize>,
    },
    #[error("polynomial has degree zero in `{var}`")]
    ZeroDegree { var: String },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
}
