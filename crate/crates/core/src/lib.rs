//! Exact arithmetic and verification machinery for hermitian lattices over CM fields,
//! their anti-unitary involutions, orthogonal hyperplane arrangements, and the gluing
//! of real hyperbolic ball quotients.
#![allow(clippy::needless_range_loop)]

pub mod arrangement;
pub mod cyclotomic;
pub mod f5;
pub mod gluing;
pub mod golden;
pub mod hermitian;
pub mod hyperbolic;
pub mod involutions;
pub mod linalg;
pub mod matrix;
pub mod quintic_moduli;

pub use cyclotomic::{CycElt, CyclotomicError, FieldDescriptor, FieldKind, RealElt};
pub use hermitian::HermitianLattice;
pub use matrix::CycMatrix;
