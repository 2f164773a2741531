//! Quaternion linear algebra on the 2x2 complex block representation.
//!
//! A quaternion x = alpha + beta j multiplies as
//! (a1 + b1 j)(a2 + b2 j) = (a1 a2 - b1 conj(b2)) + (b1 conj(a2) + a1 b2) j
//! and is represented by the block [[alpha, -beta], [conj(beta), conj(alpha)]],
//! which turns that product into matrix multiplication.

mod decomp;
mod matrix;
mod quaternion;

pub use decomp::{
    pair_conjugates, quat_eigenvalues, quat_generalized_schur, quat_qr, quat_schur, GeneralizedSchur,
};
pub use matrix::QuaternionMatrix;
pub use quaternion::{quat_multiply, Quaternion};
