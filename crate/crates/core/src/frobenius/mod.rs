//! Exact general solution of the associated Lamé equation for integer
//! `(m, ℓ)` and arbitrary real energy.
//!
//! The product `Ψ = ψ⁺ψ⁻` is a rational function of `℘`. Writing
//! `y = (e₁ - ℘)/ē₂` and `Φ = (℘ - e₁)^ℓ Ψ` turns the third-order equation
//! for `Ψ` into one with polynomial coefficients whose `ρ = 0` Frobenius
//! series terminates after `m + ℓ + 1` terms. Its zeros give `℘(b_r)`, and
//! the `b_r` then fix `ψ^±` in closed `σ`/`ζ` form.

mod ansatz;
mod bloch;
mod coefficients;
mod params;
mod product;
mod quadrature;

pub use ansatz::ansatz_product;
pub use bloch::{solve, BlochSolution, GeneralSolution, SolutionRecord};
pub use coefficients::{
    coefficient_functions, coefficients, determinant_f, minor_d, CoefficientFunctions,
    CoefficientTable, EXCEPTIONAL_THRESHOLD,
};
pub(crate) use coefficients::{dense_det, determinant_f_with_scale, f_matrix, minor_d_with_scale};
pub use params::{potential, EnergySpec, LameParams};
pub use product::{
    characteristic_roots, product_equation_residual_from, select_branches, CharacteristicRoot,
    ProductSolution,
};
pub use quadrature::general_solution_from_product;
