//! Dense complex linear algebra over small composite Hilbert spaces.

mod bipartition;
mod eigen;
mod ket;
mod operator;
mod shape;
mod span;

pub use bipartition::{partial_trace, Bipartition, CutMap};
pub use eigen::{hermitian_eigenvalues, EIGEN_SIZE_LIMIT};
pub use ket::{inner, Ket};
pub use operator::{apply_local, density, Kron, Operator};
pub use shape::SystemShape;
pub use span::{
    gram_matrix, numerical_rank, orthonormal_complement, orthonormal_complement_with,
    ORTHOGONALITY_TOL, RANK_TOL,
};
