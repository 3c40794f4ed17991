//! Finite-dimensional dg algebras.

mod algebra;
mod path;
mod product;

pub use algebra::{check_dg_algebra, DgAlgebra};
pub use path::{path_algebra, path_label, path_through, Arrow, Path, PathAlgebraOptions, PathCombination, Quiver};
pub use product::{central_idempotents, product_algebra, tensor_algebra};
