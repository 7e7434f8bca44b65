use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi_real, EllipticModulus, WeierstrassFrame};
use crate::error::{Error, Result};

/// Integer pair `(m, ℓ)` and modulus defining
/// `V(x) = m(m+1)k² sn²x + ℓ(ℓ+1)k² cn²x/dn²x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LameParams {
    m: u32,
    ell: u32,
    modulus: EllipticModulus,
    frame: WeierstrassFrame,
}

impl LameParams {
    pub fn new(m: u32, ell: u32, ksq: f64) -> Result<Self> {
        if ell > m {
            return Err(Error::domain(format!("need m >= ell, got m = {m}, ell = {ell}")));
        }
        if m + ell == 0 {
            return Err(Error::domain("need m + ell >= 1"));
        }
        if m + ell > 24 {
            return Err(Error::domain(format!(
                "m + ell = {} is beyond the supported range (24)",
                m + ell
            )));
        }
        let modulus = EllipticModulus::from_ksq(ksq)?;
        Ok(Self {
            m,
            ell,
            modulus,
            frame: WeierstrassFrame::new(modulus),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `N = m + ℓ`, the degree of the terminating series.
    pub fn degree(&self) -> usize {
        (self.m + self.ell) as usize
    }

    /// `ν = m - ℓ`.
    pub fn nu(&self) -> u32 {
        self.m - self.ell
    }

    pub fn modulus(&self) -> &EllipticModulus {
        &self.modulus
    }

    pub fn frame(&self) -> &WeierstrassFrame {
        &self.frame
    }

    pub fn ksq(&self) -> f64 {
        self.modulus.ksq()
    }

    /// Period of `V`, `2K`.
    pub fn period(&self) -> f64 {
        2.0 * self.modulus.big_k()
    }

    /// The shifted argument `z = x - iK'` for real `x`.
    pub fn z_of_x(&self, x: f64) -> Complex64 {
        Complex64::new(x, -self.modulus.big_k_prime())
    }

    pub(crate) fn mm1(&self) -> f64 {
        let m = self.m as f64;
        m * (m + 1.0)
    }

    pub(crate) fn ll1(&self) -> f64 {
        let l = self.ell as f64;
        l * (l + 1.0)
    }
}

/// Energy in both frames. `Ẽ = e₃ m(m+1) + [E - ℓ(ℓ+1)] ē₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySpec {
    e: f64,
    etilde: f64,
}

impl EnergySpec {
    pub fn new(e: f64, params: &LameParams) -> Result<Self> {
        if !e.is_finite() {
            return Err(Error::domain("energy must be finite"));
        }
        let f = params.frame();
        Ok(Self {
            e,
            etilde: f.e3 * params.mm1() + (e - params.ll1()) * f.ebar3,
        })
    }

    /// `E` in the x-space equation.
    pub fn value(&self) -> f64 {
        self.e
    }

    /// `Ẽ` in the Weierstrass-form equation.
    pub fn etilde(&self) -> f64 {
        self.etilde
    }
}

/// The associated Lamé potential at real `x`.
pub fn potential(x: f64, params: &LameParams) -> f64 {
    let (sn, cn, dn) = jacobi_real(x, params.modulus());
    let ksq = params.ksq();
    params.mm1() * ksq * sn * sn + params.ll1() * ksq * cn * cn / (dn * dn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LameParams::new(1, 2, 0.5).is_err());
        assert!(LameParams::new(0, 0, 0.5).is_err());
        assert!(LameParams::new(2, 1, 1.2).is_err());
        assert!(LameParams::new(2, 0, 0.5).is_ok());
    }

    #[test]
    fn potential_at_origin_and_quarter_period() {
        for &(m, l, ksq) in &[(3, 2, 0.9), (1, 1, 0.3), (2, 0, 0.5)] {
            let p = LameParams::new(m, l, ksq).unwrap();
            let v0 = potential(0.0, &p);
            assert!((v0 - (l * (l + 1)) as f64 * ksq).abs() < 1e-14);
        }
        let p = LameParams::new(3, 2, 0.9).unwrap();
        let vk = potential(p.modulus().big_k(), &p);
        assert!((vk - 10.8).abs() < 1e-12, "{vk}");
    }

    #[test]
    fn potential_is_periodic() {
        let p = LameParams::new(3, 2, 0.9).unwrap();
        for i in 0..50 {
            let x = -7.0 + 0.3 * i as f64;
            assert!((potential(x, &p) - potential(x + p.period(), &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn etilde_for_32() {
        // Ẽ = ē₃(E - 6) + 12 e₃
        let p = LameParams::new(3, 2, 0.9).unwrap();
        let en = EnergySpec::new(8.0, &p).unwrap();
        assert!((en.etilde() - (2.0 + 12.0 * (-19.0 / 30.0))).abs() < 1e-14);
    }
}
