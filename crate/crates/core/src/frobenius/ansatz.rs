use num_complex::Complex64;

use super::{EnergySpec, LameParams};
use crate::error::{Error, Result};

/// Closed-form product `Ψ` for the four low-order pairs
/// `(1,1), (1,0), (2,1), (2,0)`:
///
/// ```text
/// m = 1:  Ψ = (℘ - e₁) + A₁ + A₂/(℘ - e₁)
/// m = 2:  Ψ = (℘ - e₁)² + B₁(℘ - e₁) + B₂ + B₃/(℘ - e₁)
/// ```
pub fn ansatz_product(z: Complex64, params: &LameParams, energy: &EnergySpec) -> Result<Complex64> {
    let f = params.frame();
    let et = energy.etilde();
    let b23 = f.ebar2 * f.ebar3;
    let s = f.wp(z)? - f.e1;
    match (params.m(), params.ell()) {
        (1, l @ (0 | 1)) => {
            let a1 = et + f.e1;
            let a2 = if l == 1 { b23 } else { 0.0 };
            Ok(s + a1 + a2 / s)
        }
        (2, l @ (0 | 1)) => {
            let b1 = 2.0 * f.e1 + et / 3.0;
            let (b2, b3) = if l == 1 {
                ((et / 3.0 - f.e1) * b1, b23 * b1 / 3.0)
            } else {
                ((et / 3.0 - f.e1) * b1 + b23, 0.0)
            };
            Ok(s * s + s * b1 + b2 + b3 / s)
        }
        (m, l) => Err(Error::domain(format!(
            "no closed-form ansatz for (m, ell) = ({m}, {l})"
        ))),
    }
}
