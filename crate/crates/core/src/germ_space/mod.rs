//! Finite-order diagnostics on spaces of germs: jet ranks and linear
//! freedom, Schäfke's covering sets, and a least-squares Runge demo.

mod duval;
mod jets;
mod schafke;

pub use duval::{
    duval_stage, duval_sweep, sample_k_minus, sample_k_plus, DuvalConfig, DuvalStage, DuvalTarget,
    CONDITION_LIMIT,
};
pub use jets::{freedom_certificate, jet_rank, Freedom, JetMatrix, Jettable};
pub use schafke::{in_m_n, schafke_min_n, SchafkeCertificate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GermError {
    #[error("empty family")]
    EmptyFamily,
    #[error("jet order {p} exceeds the smallest order {min_order} in the family")]
    JetAboveOrder { p: usize, min_order: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("least squares failed: {0}")]
    LeastSquares(String),
}
