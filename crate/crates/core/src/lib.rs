//! Exact computation of depth-related invariants of simplicial affine
//! semigroup rings: Apéry sets, graded Betti numbers, Koszul homology and
//! depth certificates, all over arbitrary-precision integers.

pub mod apery;
pub mod depth;
pub mod grobner;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod order;
pub mod poly;
pub mod scan;
pub mod semigroup;

pub use order::MonomialOrder;
pub use semigroup::{Factorization, SElement, SemigroupDescriptor, SemigroupError};
