use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrals::carlson_rf;
use super::jacobi::{jacobi_parts, lattice_distance, POLE_TOLERANCE};
use super::EllipticModulus;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative size at which the theta series is truncated.
const THETA_TRUNCATION: f64 = 1e-17;

/// Lattice data for the Weierstrass functions attached to a modulus, in the
/// frame `e₁ - e₃ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassFrame {
    modulus: EllipticModulus,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// `e₁ - e₂`
    pub ebar2: f64,
    /// `e₁ - e₃`
    pub ebar3: f64,
    /// Real half-period.
    pub omega: f64,
    /// Imaginary half-period (purely imaginary).
    pub omega_prime: Complex64,
    /// `η = ζ(ω)`
    pub eta: Complex64,
    /// `η' = ζ(ω')`
    pub eta_prime: Complex64,
    /// Nome `q = exp(-πK'/K)`.
    pub nome: f64,
    pub g2: f64,
    pub g3: f64,
    theta1_prime_zero: f64,
}

/// `℘`, `℘'` and `℘''` at one point.
#[derive(Debug, Clone, Copy)]
pub struct WpValues {
    pub wp: Complex64,
    pub dwp: Complex64,
    pub ddwp: Complex64,
}

struct ThetaSums {
    t: Complex64,
    dt: Complex64,
    ddt: Complex64,
}

impl WeierstrassFrame {
    pub fn new(modulus: EllipticModulus) -> Self {
        let ksq = modulus.ksq();
        let e1 = (2.0 - ksq) / 3.0;
        let e2 = (2.0 * ksq - 1.0) / 3.0;
        let e3 = -(1.0 + ksq) / 3.0;
        let omega = modulus.big_k();
        let nome = (-PI * modulus.big_k_prime() / modulus.big_k()).exp();

        // θ₁'(0) and θ₁'''(0)
        let mut d1 = 0.0;
        let mut d3 = 0.0;
        for n in 0..200 {
            let nh = n as f64 + 0.5;
            let w = nome.powf(nh * nh);
            let odd = 2.0 * n as f64 + 1.0;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            d1 += sgn * w * odd;
            d3 -= sgn * w * odd * odd * odd;
            if w * odd * odd * odd < THETA_TRUNCATION * d1.abs() {
                break;
            }
        }
        let theta1_prime_zero = 2.0 * d1;
        let theta1_third_zero = 2.0 * d3;
        let eta = -PI * PI * theta1_third_zero / (12.0 * omega * theta1_prime_zero);

        let mut frame = Self {
            modulus,
            e1,
            e2,
            e3,
            ebar2: e1 - e2,
            ebar3: e1 - e3,
            omega,
            omega_prime: Complex64::new(0.0, modulus.big_k_prime()),
            eta: Complex64::new(eta, 0.0),
            eta_prime: Complex64::new(0.0, 0.0),
            nome,
            g2: 2.0 * (e1 * e1 + e2 * e2 + e3 * e3),
            g3: 4.0 * e1 * e2 * e3,
            theta1_prime_zero,
        };
        // ζ(ω') straight from the theta series at the cell boundary; the
        // Legendre relation is left as an independent check.
        let v = frame.theta_arg(frame.omega_prime);
        let th = frame.theta_sums(v);
        frame.eta_prime =
            frame.eta * frame.omega_prime / omega + (PI / (2.0 * omega)) * th.dt / th.t;
        frame
    }

    pub fn modulus(&self) -> &EllipticModulus {
        &self.modulus
    }

    /// Real period `2ω` and imaginary period `2ω'` as complex numbers.
    pub fn periods(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(2.0 * self.omega, 0.0),
            2.0 * self.omega_prime,
        )
    }

    fn theta_arg(&self, z: Complex64) -> Complex64 {
        z * (PI / (2.0 * self.omega))
    }

    /// `θ₁, θ₁', θ₁''` at `v`. Intended for `v` reduced to the centered cell.
    fn theta_sums(&self, v: Complex64) -> ThetaSums {
        let mut t = Complex64::new(0.0, 0.0);
        let mut dt = Complex64::new(0.0, 0.0);
        let mut ddt = Complex64::new(0.0, 0.0);
        for n in 0..200 {
            let nh = n as f64 + 0.5;
            let w = self.nome.powf(nh * nh);
            let odd = 2.0 * n as f64 + 1.0;
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            let arg = v * odd;
            let (s, c) = (arg.sin(), arg.cos());
            let term = s * (sgn * w);
            t += term;
            dt += c * (sgn * w * odd);
            ddt -= term * (odd * odd);
            let mag = w * (odd * v.im.abs()).exp() * odd * odd;
            if n > 0 && mag < THETA_TRUNCATION * (t.norm() + dt.norm()) {
                break;
            }
        }
        ThetaSums {
            t: t * 2.0,
            dt: dt * 2.0,
            ddt: ddt * 2.0,
        }
    }

    /// Split `z = z₀ + 2mω + 2nω'` with `z₀` in the centered period cell.
    fn reduce(&self, z: Complex64) -> (Complex64, f64, f64) {
        let kp = self.omega_prime.im;
        let m = (z.re / (2.0 * self.omega)).round();
        let n = (z.im / (2.0 * kp)).round();
        let z0 = Complex64::new(z.re - 2.0 * m * self.omega, z.im - 2.0 * n * kp);
        (z0, m, n)
    }

    fn check_lattice(&self, z: Complex64, what: &'static str) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain(format!("non-finite argument to {what}")));
        }
        if lattice_distance(z, Complex64::new(0.0, 0.0), &self.modulus) < POLE_TOLERANCE {
            return Err(Error::Pole {
                what,
                re: z.re,
                im: z.im,
            });
        }
        Ok(())
    }

    /// `℘(z)` through `℘(z) = e₃ + 1/sn²(z, k)`.
    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        self.check_lattice(z, "wp")?;
        let p = jacobi_parts(z, &self.modulus);
        let r = p.den / p.s;
        Ok(r * r + self.e3)
    }

    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        self.check_lattice(z, "wp'")?;
        let p = jacobi_parts(z, &self.modulus);
        let r = p.den / p.s;
        Ok(p.c * p.d * r * r * r * (-2.0 / (p.den * p.den)))
    }

    /// `℘`, `℘'`, `℘''` together (one Jacobi evaluation).
    pub fn wp_all(&self, z: Complex64) -> Result<WpValues> {
        self.check_lattice(z, "wp")?;
        let p = jacobi_parts(z, &self.modulus);
        let r = p.den / p.s;
        let wp = r * r + self.e3;
        let dwp = p.c * p.d * r * r * r * (-2.0 / (p.den * p.den));
        let ddwp = wp * wp * 6.0 - self.g2 / 2.0;
        Ok(WpValues { wp, dwp, ddwp })
    }

    /// `℘(z)` from theta quotients. Independent of the Jacobi path; used for
    /// cross-checks.
    pub fn wp_theta(&self, z: Complex64) -> Result<Complex64> {
        self.check_lattice(z, "wp")?;
        let (z0, _, _) = self.reduce(z);
        let th = self.theta_sums(self.theta_arg(z0));
        let l = th.dt / th.t;
        let c = PI / (2.0 * self.omega);
        Ok(-self.eta / self.omega + (l * l - th.ddt / th.t) * (c * c))
    }

    /// Weierstrass `ζ(z)`, with `ζ' = -℘`.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        self.check_lattice(z, "zeta")?;
        let (z0, m, n) = self.reduce(z);
        let th = self.theta_sums(self.theta_arg(z0));
        let base = self.eta * z0 / self.omega + (PI / (2.0 * self.omega)) * th.dt / th.t;
        Ok(base + (self.eta * m + self.eta_prime * n) * 2.0)
    }

    /// `ln σ(z)` on an unspecified branch (only `exp` of it is meaningful).
    pub fn ln_sigma(&self, z: Complex64) -> Result<Complex64> {
        self.check_lattice(z, "sigma")?;
        let (z0, m, n) = self.reduce(z);
        let th = self.theta_sums(self.theta_arg(z0));
        let base = (2.0 * self.omega / PI).ln() + self.eta * z0 * z0 / (2.0 * self.omega)
            + th.t.ln()
            - self.theta1_prime_zero.ln();
        let h = self.eta * m + self.eta_prime * n;
        let big_omega = self.omega_prime * n + m * self.omega;
        let sign_phase = I * PI * (m + n + m * n);
        Ok(base + sign_phase + h * (z0 + big_omega) * 2.0)
    }

    /// Weierstrass `σ(z)`; vanishes on the lattice.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        match self.ln_sigma(z) {
            Ok(l) => l.exp(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Reduce into the fundamental cell `[0, 2ω) × [0, 2|ω'|)`.
    pub fn to_fundamental_cell(&self, z: Complex64) -> Complex64 {
        let pr = 2.0 * self.omega;
        let pi = 2.0 * self.omega_prime.im;
        let mut re = z.re - pr * (z.re / pr).floor();
        let mut im = z.im - pi * (z.im / pi).floor();
        // snap values that wrapped to the far edge by rounding
        if pr - re < 1e-12 * pr {
            re = 0.0;
        }
        if pi - im < 1e-12 * pi {
            im = 0.0;
        }
        Complex64::new(re, im)
    }

    /// All preimages `b` of `c` under `℘` in the fundamental cell. Two
    /// generically; one (double) at `c ∈ {e₁, e₂, e₃}`.
    pub fn wp_inverse(&self, c: Complex64) -> Result<Vec<Complex64>> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::domain("non-finite value passed to wp_inverse"));
        }
        let half_periods = [
            (self.e1, Complex64::new(self.omega, 0.0)),
            (self.e2, Complex64::new(self.omega, 0.0) + self.omega_prime),
            (self.e3, self.omega_prime),
        ];
        for (e, hp) in half_periods {
            if (c - e).norm() < 1e-14 * (1.0 + e.abs()) {
                return Ok(vec![hp]);
            }
        }
        let scale = 1.0 + c.norm();
        let guess = carlson_rf(c - self.e1, c - self.e2, c - self.e3);
        let mut candidates = vec![guess];
        // Fallback starting points spread across the cell.
        for i in 0..4 {
            for j in 0..4 {
                candidates.push(Complex64::new(
                    (0.25 + 0.5 * i as f64) * self.omega,
                    (0.25 + 0.5 * j as f64) * self.omega_prime.im,
                ));
            }
        }
        let mut last_residual = f64::INFINITY;
        for start in candidates {
            if let Some((b, res)) = self.polish_preimage(start, c) {
                if res < 1e-12 * scale {
                    let b1 = self.to_fundamental_cell(b);
                    let (p1, p2) = self.periods();
                    let b2 = self.to_fundamental_cell(p1 + p2 - b1);
                    if lattice_distance(b1, b2, &self.modulus) < 1e-7 {
                        return Ok(vec![b1]);
                    }
                    return Ok(vec![b1, b2]);
                }
                last_residual = last_residual.min(res);
            }
        }
        Err(Error::numeric(
            "wp_inverse",
            format!("no preimage of c = {c} converged; best |wp(b) - c| = {last_residual:e}"),
        ))
    }

    /// Second-order Newton iteration on `℘(b) - c`; returns `(b, |℘(b) - c|)`.
    fn polish_preimage(&self, start: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
        let mut b = start;
        let mut best: Option<(Complex64, f64)> = None;
        for _ in 0..80 {
            let w = self.wp_all(b).ok()?;
            let f = w.wp - c;
            let res = f.norm();
            if best.is_none_or(|(_, r)| res < r) {
                best = Some((b, res));
            }
            if res < 1e-15 * (1.0 + c.norm()) {
                break;
            }
            // smallest root of ½℘''δ² + ℘'δ + f = 0
            let disc = (w.dwp * w.dwp - w.ddwp * f * 2.0).sqrt();
            let d1 = w.dwp + disc;
            let d2 = w.dwp - disc;
            let den = if d1.norm() >= d2.norm() { d1 } else { d2 };
            if den.norm() == 0.0 {
                return best;
            }
            let mut step = -f * 2.0 / den;
            let lim = 0.5 * self.omega;
            if step.norm() > lim {
                step *= lim / step.norm();
            }
            b += step;
            if !(b.re.is_finite() && b.im.is_finite()) {
                return best;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame(ksq: f64) -> WeierstrassFrame {
        WeierstrassFrame::new(EllipticModulus::from_ksq(ksq).unwrap())
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn roots_for_ksq_09() {
        let f = frame(0.9);
        assert!((f.e1 - 11.0 / 30.0).abs() < 1e-15);
        assert!((f.e2 - 4.0 / 15.0).abs() < 1e-15);
        assert!((f.e3 + 19.0 / 30.0).abs() < 1e-15);
        assert!((f.e1 + f.e2 + f.e3).abs() < 1e-15);
        assert!((f.ebar2 - 0.1).abs() < 1e-15);
        assert!((f.ebar3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_period_values() {
        let f = frame(0.9);
        let w = f.wp_all(Complex64::new(f.omega, 0.0)).unwrap();
        assert!(close(w.wp, Complex64::new(f.e1, 0.0), 1e-13));
        assert!(w.dwp.norm() < 1e-7);
        let w3 = f.wp(f.omega_prime).unwrap();
        assert!(close(w3, Complex64::new(f.e3, 0.0), 1e-13));
        let w2 = f.wp(f.omega_prime + f.omega).unwrap();
        assert!(close(w2, Complex64::new(f.e2, 0.0), 1e-13));
    }

    #[test]
    fn legendre_relation() {
        for &ksq in &[0.1, 0.5, 0.9, 0.99] {
            let f = frame(ksq);
            let lhs = f.eta * f.omega_prime - f.eta_prime * f.omega;
            assert!(close(lhs, Complex64::new(0.0, PI / 2.0), 1e-10), "{ksq}: {lhs}");
        }
    }

    #[test]
    fn sigma_parity_and_zero() {
        let f = frame(0.7);
        assert_eq!(f.sigma(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let z = Complex64::new(0.37, -0.81);
        assert!(close(f.sigma(-z), -f.sigma(z), 1e-12));
        // σ(z) ≈ z near the origin
        let small = Complex64::new(1e-4, 2e-4);
        assert!(close(f.sigma(small), small, 1e-8));
    }

    #[test]
    fn zeta_half_period_is_eta() {
        let f = frame(0.6);
        let z = f.zeta(Complex64::new(f.omega, 0.0)).unwrap();
        assert!(close(z, f.eta, 1e-12));
    }

    #[test]
    fn pole_errors() {
        let f = frame(0.5);
        let (p1, p2) = f.periods();
        assert!(matches!(f.wp(p1 + p2), Err(Error::Pole { .. })));
        assert!(matches!(f.zeta(p1), Err(Error::Pole { .. })));
    }

    #[test]
    fn inverse_at_branch_points() {
        let f = frame(0.9);
        let b = f.wp_inverse(Complex64::new(f.e1, 0.0)).unwrap();
        assert_eq!(b.len(), 1);
        assert!(close(b[0], Complex64::new(f.omega, 0.0), 1e-12));
        let b = f.wp_inverse(Complex64::new(f.e3, 0.0)).unwrap();
        assert_eq!(b.len(), 1);
        assert!(close(b[0], f.omega_prime, 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn differential_equation(re in -6.0f64..6.0, im in -4.0f64..4.0, ksq in 0.05f64..0.95) {
            let f = frame(ksq);
            let z = Complex64::new(re, im);
            if let Ok(w) = f.wp_all(z) {
                let rhs = (w.wp - f.e1) * (w.wp - f.e2) * (w.wp - f.e3) * 4.0;
                let scale = w.dwp.norm_sqr() + rhs.norm() + 1.0;
                prop_assert!((w.dwp * w.dwp - rhs).norm() < 1e-10 * scale);
            }
        }

        #[test]
        fn jacobi_and_theta_paths_agree(re in -6.0f64..6.0, im in -4.0f64..4.0, ksq in 0.05f64..0.95) {
            let f = frame(ksq);
            let z = Complex64::new(re, im);
            if lattice_distance(z, Complex64::new(0.0, 0.0), f.modulus()) > 1e-2 {
                let a = f.wp(z).unwrap();
                let b = f.wp_theta(z).unwrap();
                prop_assert!(close(a, b, 1e-10), "{} vs {}", a, b);
            }
        }

        #[test]
        fn sigma_derivative_is_zeta(re in -5.0f64..5.0, im in -3.0f64..3.0) {
            let f = frame(0.9);
            let z = Complex64::new(re, im);
            if lattice_distance(z, Complex64::new(0.0, 0.0), f.modulus()) > 0.5 {
                let h = 1e-4;
                let hp = Complex64::new(h, 0.0);
                // five-point derivative of ln σ; branch jumps cancel since we
                // difference σ ratios
                let r = |d: Complex64| (f.ln_sigma(z + d).unwrap() - f.ln_sigma(z).unwrap()).exp().ln();
                let num = (-r(hp * 2.0) + r(hp) * 8.0 - r(-hp) * 8.0 + r(-hp * 2.0)) / (12.0 * h);
                let zeta = f.zeta(z).unwrap();
                prop_assert!(close(num, zeta, 1e-8), "{} vs {}", num, zeta);
            }
        }

        #[test]
        fn zeta_derivative_is_minus_wp(re in -5.0f64..5.0, im in -3.0f64..3.0) {
            let f = frame(0.4);
            let z = Complex64::new(re, im);
            if lattice_distance(z, Complex64::new(0.0, 0.0), f.modulus()) > 0.5 {
                let h = Complex64::new(1e-3, 0.0);
                let zz = |d: Complex64| f.zeta(z + d).unwrap();
                let num = (-zz(h * 2.0) + zz(h) * 8.0 - zz(-h) * 8.0 + zz(-h * 2.0)) / (12.0 * h.re);
                let wp = f.wp(z).unwrap();
                prop_assert!(close(num, -wp, 1e-8), "{} vs {}", num, -wp);
            }
        }

        #[test]
        fn sigma_quasi_periodicity(re in -3.0f64..3.0, im in -2.0f64..2.0) {
            let f = frame(0.8);
            let z = Complex64::new(re, im);
            let om = Complex64::new(f.omega, 0.0);
            let lhs = f.sigma(z + om * 2.0);
            let rhs = -f.sigma(z) * (f.eta * (z + om) * 2.0).exp();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-300));
            let op = f.omega_prime;
            let lhs = f.sigma(z + op * 2.0);
            let rhs = -f.sigma(z) * (f.eta_prime * (z + op) * 2.0).exp();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-300));
        }

        #[test]
        fn inverse_round_trip(re in -3.0f64..3.0, im in -3.0f64..3.0, ksq in 0.1f64..0.95) {
            let f = frame(ksq);
            let c = Complex64::new(re, im);
            let bs = f.wp_inverse(c).unwrap();
            prop_assert!(!bs.is_empty() && bs.len() <= 2);
            for b in bs {
                prop_assert!(b.re >= 0.0 && b.re < 2.0 * f.omega);
                prop_assert!(b.im >= 0.0 && b.im < 2.0 * f.omega_prime.im);
                let w = f.wp(b).unwrap();
                prop_assert!((w - c).norm() < 1e-10 * (1.0 + c.norm()));
            }
        }
    }
}
