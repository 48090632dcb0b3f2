//! Dense kernels: matrices, unique thin QR, the PSD problem matrix, subspace
//! distance and a Jacobi eigen-solver used as an independent reference.

mod jacobi;
mod matrix;
mod psd;
mod qr;
pub mod random;
mod stiefel_point;

pub use jacobi::{eigen_oracle, symmetric_eigen, SymmetricEigen};
pub use matrix::DenseMatrix;
pub use psd::{symmetrize_psd, ProblemMatrix};
pub use qr::thin_qr_unique;
pub use stiefel_point::{subspace_distance, StiefelPoint};
