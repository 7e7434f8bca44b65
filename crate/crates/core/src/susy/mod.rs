//! First- and second-order supersymmetric partners of the associated Lamé
//! potential, built from the exact Bloch solutions as seeds.
//!
//! Every partner is `Ṽ = V − 2[ln W(u₁, …, u_n)]''`. Pure Bloch seeds give
//! periodic partners; mixing `ψ⁺` and `ψ⁻` gives partners that differ from a
//! periodic one only near the origin and carry bound states there.

mod intertwine;
mod nodes;
mod partner;
mod seed;

pub use intertwine::{intertwine, IntertwineMode, Intertwined, SolutionFn};
pub use nodes::{nodeless_check, real_part, NodeReport, REALITY_TOLERANCE};
pub use partner::{
    first_order_partner_nonperiodic, first_order_partner_periodic,
    second_order_partner_nonperiodic, second_order_partner_periodic, PartnerMetadata,
    PartnerPotential, Periodicity, DEFECT_RADIUS_K, DEFECT_THRESHOLD,
};
pub use seed::{SeedKind, SeedSolution};
