//! Dense complex linear algebra for small quantum systems.
//!
//! Everything here is generic over [`Real`](crate::Real). Tensor products use
//! the row-major block convention: the left factor is the slow index.

mod eigh;
mod matrix;
mod ops;
mod state;

pub use eigh::{eigh, Eigh, MAX_EIGH_DIM};
pub use matrix::CMatrix;
pub use ops::{
    partial_trace, reduce_pure, relative_entropy_quantum, tensor, tensor_with_cap, von_neumann_entropy,
    DEFAULT_TENSOR_CAP, EIGEN_FLOOR,
};
pub use state::{Density, StateVector};
