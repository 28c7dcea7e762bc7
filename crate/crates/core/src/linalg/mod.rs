//! Exact rational linear algebra: dense and sparse matrices, row reduction,
//! kernels, ranks and rational spectra.

mod mat;
mod sparse;
mod spectrum;

pub use mat::{kernel_basis, rref, solve, Mat};
pub use sparse::{axpy, Echelon, SparseMat, SparseVec};
pub use spectrum::{charpoly, charpoly_integer, eval_poly, rational_spectrum, SpectrumResult};
