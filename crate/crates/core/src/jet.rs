//! Third-order Taylor jets of complex functions of a real variable, used to
//! carry exact derivatives through products, quotients and logarithms.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// `f, f', f'', f'''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

/// `ln f` and the derivatives `(ln f)', (ln f)'', (ln f)'''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJet {
    pub ln: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

impl Jet {
    pub fn constant(v: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            v,
            d1: zero,
            d2: zero,
            d3: zero,
        }
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self {
            v: self.v * s,
            d1: self.d1 * s,
            d2: self.d2 * s,
            d3: self.d3 * s,
        }
    }

    pub fn recip(self) -> Self {
        // f = 1/g: f' = -g'/g², f'' = (2g'² - g g'')/g³,
        // f''' = (-6g'³ + 6g g'g'' - g²g''')/g⁴
        let g = self.v;
        let (g1, g2, g3) = (self.d1, self.d2, self.d3);
        let inv = 1.0 / g;
        let inv2 = inv * inv;
        Self {
            v: inv,
            d1: -g1 * inv2,
            d2: (g1 * g1 * 2.0 - g * g2) * inv2 * inv,
            d3: (-g1 * g1 * g1 * 6.0 + g * g1 * g2 * 6.0 - g * g * g3) * inv2 * inv2,
        }
    }

    /// `(ln f)', (ln f)'', (ln f)'''`.
    pub fn log_derivatives(self) -> (Complex64, Complex64, Complex64) {
        let r1 = self.d1 / self.v;
        let r2 = self.d2 / self.v;
        let r3 = self.d3 / self.v;
        (
            r1,
            r2 - r1 * r1,
            r3 - r1 * r2 * 3.0 + r1 * r1 * r1 * 2.0,
        )
    }

    /// First three entries of the jet of `f'`. The third derivative of `f'`
    /// is not available and is set to zero.
    pub fn derivative(self) -> Self {
        Self {
            v: self.d1,
            d1: self.d2,
            d2: self.d3,
            d3: Complex64::new(0.0, 0.0),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            d3: self.d3 - o.d3,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + self.d1 * o.d1 * 2.0 + self.v * o.d2,
            d3: self.d3 * o.v + (self.d2 * o.d1 + self.d1 * o.d2) * 3.0 + self.v * o.d3,
        }
    }
}

impl LogJet {
    /// `ln 1`.
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            ln: z,
            d1: z,
            d2: z,
            d3: z,
        }
    }

    /// Logarithm of a jet; the branch of `ln f` is the principal one.
    pub fn of(j: Jet) -> Self {
        let (d1, d2, d3) = j.log_derivatives();
        Self {
            ln: j.v.ln(),
            d1,
            d2,
            d3,
        }
    }

    /// `ln(e^a + c·e^b)`, factored about the larger term so neither
    /// exponential is formed at full size.
    pub fn ln_sum(a: LogJet, b: LogJet, c: Complex64) -> Self {
        let b = LogJet { ln: b.ln + c.ln(), ..b };
        let (big, small) = if b.ln.re > a.ln.re { (b, a) } else { (a, b) };
        let one = Jet::constant(Complex64::new(1.0, 0.0));
        big + LogJet::of(one + (small - big).exp())
    }

    /// Jet of `exp(ln f)`.
    pub fn exp(self) -> Jet {
        let v = self.ln.exp();
        let (l1, l2, l3) = (self.d1, self.d2, self.d3);
        Jet {
            v,
            d1: l1 * v,
            d2: (l2 + l1 * l1) * v,
            d3: (l3 + l1 * l2 * 3.0 + l1 * l1 * l1) * v,
        }
    }
}

impl Sub for LogJet {
    type Output = LogJet;
    fn sub(self, o: LogJet) -> LogJet {
        LogJet {
            ln: self.ln - o.ln,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            d3: self.d3 - o.d3,
        }
    }
}

impl Add for LogJet {
    type Output = LogJet;
    fn add(self, o: LogJet) -> LogJet {
        LogJet {
            ln: self.ln + o.ln,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sin_jet(x: f64) -> Jet {
        Jet {
            v: c(x.sin()),
            d1: c(x.cos()),
            d2: c(-x.sin()),
            d3: c(-x.cos()),
        }
    }

    #[test]
    fn product_and_recip_match_closed_forms() {
        let x = 0.7;
        let s = sin_jet(x);
        // sin² = (1 - cos 2x)/2
        let sq = s * s;
        assert!((sq.d1.re - (2.0 * x).sin()).abs() < 1e-15);
        assert!((sq.d2.re - 2.0 * (2.0 * x).cos()).abs() < 1e-15);
        assert!((sq.d3.re + 4.0 * (2.0 * x).sin()).abs() < 1e-14);
        // 1/sin = csc: (csc)' = -csc cot
        let r = s.recip();
        let csc = 1.0 / x.sin();
        let cot = x.cos() / x.sin();
        assert!((r.d1.re + csc * cot).abs() < 1e-14);
        assert!((r.d2.re - csc * (cot * cot + csc * csc)).abs() < 1e-13);
        let d3 = -csc * cot * (cot * cot + csc * csc) - csc * (2.0 * cot * csc * csc + 2.0 * csc * csc * cot);
        assert!((r.d3.re - d3).abs() < 1e-12);
    }

    #[test]
    fn log_round_trip() {
        let x = 0.4;
        let s = sin_jet(x);
        let (l1, l2, l3) = s.log_derivatives();
        let back = LogJet {
            ln: s.v.ln(),
            d1: l1,
            d2: l2,
            d3: l3,
        }
        .exp();
        for (a, b) in [(back.v, s.v), (back.d1, s.d1), (back.d2, s.d2), (back.d3, s.d3)] {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn log_sum_matches_direct_sum() {
        let a = LogJet::of(sin_jet(0.9));
        let b = LogJet::of(sin_jet(0.3).scale(c(40.0)));
        for w in [c(2.5), c(-0.7), c(1e-3)] {
            let direct = LogJet::of(sin_jet(0.9) + sin_jet(0.3).scale(c(40.0) * w));
            let s = LogJet::ln_sum(a, b, w);
            for (x, y) in [(s.d1, direct.d1), (s.d2, direct.d2), (s.d3, direct.d3)] {
                assert!((x - y).norm() < 1e-12 * (1.0 + y.norm()));
            }
            assert!((s.ln.exp() - direct.ln.exp()).norm() < 1e-12 * direct.ln.exp().norm());
        }
    }
}
