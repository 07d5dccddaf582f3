//! Exact arithmetic over GF(2): packed vectors and matrices, the extension
//! fields GF(2^m), binary polynomials and cyclotomic cosets.

mod basis;
mod bitvec;
mod field;
mod matrix;
mod poly;

pub use basis::XorBasis;
pub use bitvec::BitVec;
pub use field::{coset_of, cyclotomic_cosets, is_primitive, minimal_polynomial, Gf2mField, MAX_DEGREE};
pub(crate) use field::{binary_poly, product_of_linear_factors};
pub use matrix::{BitMatrix, Rref};
pub use poly::Gf2Poly;
