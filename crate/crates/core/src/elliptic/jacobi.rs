use num_complex::Complex64;

use super::EllipticModulus;
use crate::error::{Error, Result};

/// Lattice distance below which an argument counts as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Real-argument `(sn, cn, dn)` for parameter `m = k²` and complementary
/// parameter `mc = 1 - m`, by descending Landen transformation.
pub(crate) fn sncndn_real(u: f64, mc: f64) -> (f64, f64, f64) {
    const CA: f64 = 1e-10;
    let mut em = [0.0f64; 16];
    let mut en = [0.0f64; 16];
    let mut emc = mc;
    let mut a = 1.0;
    let mut dn = 1.0;
    let mut c = 1.0;
    let mut l = 0;
    for i in 0..16 {
        l = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let u = u * c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    if sn != 0.0 {
        let mut a = cn / sn;
        c *= a;
        for ii in (0..=l).rev() {
            let b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        let a = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { a } else { -a };
        cn = c * sn;
    }
    (sn, cn, dn)
}

/// Reduce `u` into `[-2P, 2P)` where `4P` is the real period.
fn reduce(u: f64, quarter: f64) -> f64 {
    let period = 4.0 * quarter;
    u - period * (u / period).round()
}

/// Real `(sn, cn, dn)` with argument reduction modulo `4K`.
pub fn jacobi_real(u: f64, modulus: &EllipticModulus) -> (f64, f64, f64) {
    sncndn_real(reduce(u, modulus.big_k()), modulus.kc_sq())
}

/// Numerators and common denominator of `(sn, cn, dn)` at complex `u`:
/// `sn = s / den`, `cn = c / den`, `dn = d / den`. Never divides, so it is
/// safe to call on or near poles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct JacobiParts {
    pub s: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub den: f64,
}

pub(crate) fn jacobi_parts(u: Complex64, modulus: &EllipticModulus) -> JacobiParts {
    let (s, c, d) = sncndn_real(reduce(u.re, modulus.big_k()), modulus.kc_sq());
    let (s1, c1, d1) = sncndn_real(reduce(u.im, modulus.big_k_prime()), modulus.ksq());
    let ksq = modulus.ksq();
    JacobiParts {
        s: Complex64::new(s * d1, c * d * s1 * c1),
        c: Complex64::new(c * c1, -s * d * s1 * d1),
        d: Complex64::new(d * c1 * d1, -ksq * s * c * s1),
        den: c1 * c1 + ksq * s * s * s1 * s1,
    }
}

/// Distance from `u` to the nearest point of `offset + 2K·ℤ + 2iK'·ℤ`.
pub(crate) fn lattice_distance(u: Complex64, offset: Complex64, modulus: &EllipticModulus) -> f64 {
    let w = u - offset;
    let pr = 2.0 * modulus.big_k();
    let pi = 2.0 * modulus.big_k_prime();
    let dr = w.re - pr * (w.re / pr).round();
    let di = w.im - pi * (w.im / pi).round();
    dr.hypot(di)
}

/// Jacobi `(sn u, cn u, dn u)` for complex `u`, via the addition theorem on
/// `u = x + iy` with real-modulus and complementary-modulus evaluations.
pub fn jacobi_sn_cn_dn(
    u: Complex64,
    modulus: &EllipticModulus,
) -> Result<(Complex64, Complex64, Complex64)> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::domain("non-finite argument to sn/cn/dn"));
    }
    let pole = Complex64::new(0.0, modulus.big_k_prime());
    if lattice_distance(u, pole, modulus) < POLE_TOLERANCE {
        return Err(Error::Pole {
            what: "sn",
            re: u.re,
            im: u.im,
        });
    }
    let p = jacobi_parts(u, modulus);
    Ok((p.s / p.den, p.c / p.den, p.d / p.den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(ksq: f64) -> EllipticModulus {
        EllipticModulus::from_ksq(ksq).unwrap()
    }

    #[test]
    fn quarter_period_values() {
        let md = m(0.9);
        let (s, c, d) = jacobi_sn_cn_dn(Complex64::new(md.big_k(), 0.0), &md).unwrap();
        assert!((s.re - 1.0).abs() < 1e-13 && s.im.abs() < 1e-13);
        assert!(c.norm() < 1e-7);
        assert!((d.re - md.kc()).abs() < 1e-12);
    }

    #[test]
    fn origin_values() {
        let md = m(0.3);
        let (s, c, d) = jacobi_sn_cn_dn(Complex64::new(0.0, 0.0), &md).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        assert_eq!(c, Complex64::new(1.0, 0.0));
        assert_eq!(d, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn pole_is_reported() {
        let md = m(0.5);
        let u = Complex64::new(2.0 * md.big_k(), md.big_k_prime());
        assert!(matches!(jacobi_sn_cn_dn(u, &md), Err(Error::Pole { .. })));
        let near = Complex64::new(2.0 * md.big_k(), 3.0 * md.big_k_prime() + 1e-6);
        assert!(jacobi_sn_cn_dn(near, &md).is_ok());
    }

    #[test]
    fn imaginary_shift_identity() {
        // sn(x + iK') = 1 / (k sn x)
        let md = m(0.9);
        for &x in &[0.3, 1.1, -2.2, 4.0] {
            let (s, _, _) = jacobi_sn_cn_dn(Complex64::new(x, md.big_k_prime()), &md).unwrap();
            let (sr, _, _) = jacobi_real(x, &md);
            let expect = 1.0 / (md.k() * sr);
            assert!((s - expect).norm() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn small_argument_taylor() {
        // sn u ≈ u - (1 + k²) u³ / 6
        let md = m(0.4);
        let u = Complex64::new(1e-3, 2e-3);
        let (s, _, _) = jacobi_sn_cn_dn(u, &md).unwrap();
        let approx = u - u * u * u * (1.4 / 6.0);
        assert!((s - approx).norm() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn pythagorean_identities(re in -12.0f64..12.0, im in -6.0f64..6.0) {
            let md = m(0.09);
            let u = Complex64::new(re, im);
            if let Ok((s, c, d)) = jacobi_sn_cn_dn(u, &md) {
                let scale = 1.0 + s.norm_sqr();
                prop_assert!((s * s + c * c - 1.0).norm() < 1e-11 * scale);
                prop_assert!((d * d + md.ksq() * s * s - 1.0).norm() < 1e-11 * scale);
            }
        }

        #[test]
        fn real_period(x in -10.0f64..10.0, ksq in 0.05f64..0.95) {
            let md = m(ksq);
            let (s0, c0, d0) = jacobi_real(x, &md);
            let (s1, c1, d1) = jacobi_real(x + 4.0 * md.big_k(), &md);
            prop_assert!((s0 - s1).abs() < 1e-12);
            prop_assert!((c0 - c1).abs() < 1e-12);
            prop_assert!((d0 - d1).abs() < 1e-12);
        }
    }
}
