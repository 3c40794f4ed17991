//! One-sided twisted complexes over a concrete dg 2-category.

mod ambient;
mod complex;

pub use ambient::{Ambient, Generator, Object};
pub use complex::{
    compose, cone, direct_sum, hcomp_morphisms, mc_check, shift_twisted, twisted_hom_complex, ConeData, Summand,
    Tot, TwistedComplex, TwistedMorphism,
};
