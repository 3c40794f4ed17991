//! Finite-dimensional dg bimodules and their Hom complexes.

mod bimodule;
mod hom;
mod ops;
mod tensor;

pub use bimodule::{check_dg_bimodule, tensor_over_k, DgBimodule};
pub(crate) use bimodule::same_algebra;
pub use hom::{hom_complex, BimoduleMap, HomComplex, HomSpace};
pub use hom::{degree_range, hom_differential, is_bimodule_map};
pub use ops::{cokernel, split_idempotent};
pub use tensor::{multi_tensor, tensor_over_algebra, Realized};
