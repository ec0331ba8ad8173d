//! n-fold factorizations, their morphisms, sums and exact structure.

pub mod exact;
pub mod fact;
pub mod generate;
pub mod hom;
pub mod morphism;
pub mod sum;

pub use exact::{
    cokernel, is_conflation, is_deflation, is_inflation, kernel, pullback_deflation, pushout_inflation, Cokernel,
    Conflation, Kernel, Pullback, Pushout,
};
pub use fact::{validate_factorization, NFactorization};
pub use generate::{random_chain, random_factorization, random_morphism, random_morphism_pair};
pub use hom::{hom_space, morphism_template, solve_morphism};
pub use morphism::{is_isomorphism, validate_morphism, FactMorphism};
pub use sum::{column_morphism, direct_sum, direct_sum_all, row_morphism, sum_morphism, Biproduct};
