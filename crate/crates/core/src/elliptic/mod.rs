//! Elliptic function kernel: complete integrals, Jacobi `sn/cn/dn` for complex
//! argument, and the Weierstrass `℘, ℘', ζ, σ` family on the lattice fixed by a
//! modulus `k`.
//!
//! The Weierstrass scale is normalized so that `e₁ - e₃ = 1`. Then the
//! half-periods are `ω = K` and `ω' = iK'`, and `℘(z) = e₃ + 1/sn²(z, k)`.

mod integrals;
mod jacobi;
mod weierstrass;

use serde::{Deserialize, Serialize};

pub use integrals::complete_elliptic_k;
pub use jacobi::{jacobi_real, jacobi_sn_cn_dn, POLE_TOLERANCE};
pub use weierstrass::{WeierstrassFrame, WpValues};


/// Complex point in the `z`-plane.
pub type ComplexPoint = num_complex::Complex64;

/// Elliptic modulus together with its quarter-periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticModulus {
    k: f64,
    ksq: f64,
    kc: f64,
    big_k: f64,
    big_k_prime: f64,
}

impl EllipticModulus {
    /// Build from the parameter `k²`, which is what the potential is written in.
    pub fn from_ksq(ksq: f64) -> crate::Result<Self> {
        if !(ksq > 0.0 && ksq < 1.0) {
            return Err(crate::Error::domain(format!(
                "k^2 = {ksq} must lie in (0, 1)"
            )));
        }
        let k = ksq.sqrt();
        let kc = (1.0 - ksq).sqrt();
        Ok(Self {
            k,
            ksq,
            kc,
            big_k: integrals::k_from_complement(kc),
            big_k_prime: integrals::k_from_complement(k),
        })
    }

    pub fn from_k(k: f64) -> crate::Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(crate::Error::domain(format!("k = {k} must lie in (0, 1)")));
        }
        Self::from_ksq(k * k)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn ksq(&self) -> f64 {
        self.ksq
    }

    /// Complementary modulus `k' = √(1 - k²)`.
    pub fn kc(&self) -> f64 {
        self.kc
    }

    pub fn kc_sq(&self) -> f64 {
        1.0 - self.ksq
    }

    /// Real quarter-period `K(k)`.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// Imaginary quarter-period `K'(k) = K(k')`.
    pub fn big_k_prime(&self) -> f64 {
        self.big_k_prime
    }
}
