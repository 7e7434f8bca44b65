use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative imaginary-part tolerance for quantities that must be real.
pub const REALITY_TOLERANCE: f64 = 1e-8;

/// Real part of `z` after checking `|Im z| ≤ 1e−8·max(1, |z|)`.
pub fn real_part(z: Complex64, x: f64) -> Result<f64> {
    if z.im.abs() > REALITY_TOLERANCE * z.norm().max(1.0) {
        Err(Error::Reality {
            x,
            real: z.re,
            imag: z.im,
        })
    } else {
        Ok(z.re)
    }
}

/// Outcome of [`nodeless_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeReport {
    pub nodeless: bool,
    /// First sign change found, refined by bisection.
    pub location: Option<f64>,
}

const REFINE_WIDTH: f64 = 1e-10;

/// Sample a real-valued `f` at `samples` points of `interval` and look for a
/// sign change. Cells where `|f|` has a sharp local minimum without a sign
/// change are refined, since a close pair of zeros can hide there. Values are
/// checked for reality relative to the magnitude of neighbouring samples.
pub fn nodeless_check(
    f: &dyn Fn(f64) -> Result<Complex64>,
    interval: (f64, f64),
    samples: usize,
) -> Result<NodeReport> {
    let (a, b) = interval;
    if !(b > a) || samples < 2 {
        return Err(Error::domain("node check needs a < b and at least 2 samples"));
    }
    let xs: Vec<f64> = (0..samples)
        .map(|i| a + (b - a) * i as f64 / (samples - 1) as f64)
        .collect();
    let zs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    for i in 0..samples {
        let lo = i.saturating_sub(2);
        let hi = (i + 3).min(samples);
        let scale = zs[lo..hi].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if zs[i].im.abs() > REALITY_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Reality {
                x: xs[i],
                real: zs[i].re,
                imag: zs[i].im,
            });
        }
    }
    let g = |x: f64| -> Result<f64> { Ok(f(x)?.re) };
    let ys: Vec<f64> = zs.iter().map(|z| z.re).collect();

    for i in 0..samples - 1 {
        if ys[i] == 0.0 {
            return Ok(NodeReport {
                nodeless: false,
                location: Some(xs[i]),
            });
        }
        if (ys[i] > 0.0) != (ys[i + 1] > 0.0) {
            return Ok(NodeReport {
                nodeless: false,
                location: Some(bisect(&g, xs[i], xs[i + 1], ys[i])?),
            });
        }
        if i >= 1 {
            let (l, c, r) = (ys[i - 1].abs(), ys[i].abs(), ys[i + 1].abs());
            if c <= l && c <= r && c < 0.25 * l.max(r) {
                let (xm, ym) = golden_min(&g, xs[i - 1], xs[i + 1], ys[i] > 0.0)?;
                if ym == 0.0 || (ym > 0.0) != (ys[i] > 0.0) {
                    return Ok(NodeReport {
                        nodeless: false,
                        location: Some(bisect(&g, xs[i - 1], xm, ys[i - 1])?),
                    });
                }
            }
        }
    }
    if ys[samples - 1] == 0.0 {
        return Ok(NodeReport {
            nodeless: false,
            location: Some(xs[samples - 1]),
        });
    }
    Ok(NodeReport {
        nodeless: true,
        location: None,
    })
}

fn bisect(g: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, ya: f64) -> Result<f64> {
    let positive = ya > 0.0;
    while b - a > REFINE_WIDTH {
        let m = 0.5 * (a + b);
        if (g(m)? > 0.0) == positive {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Minimum of `±g` (sign chosen so the bracket values are positive).
fn golden_min(g: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, positive: bool) -> Result<(f64, f64)> {
    let s = if positive { 1.0 } else { -1.0 };
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (s * g(c)?, s * g(d)?);
    for _ in 0..200 {
        if b - a < REFINE_WIDTH || fc <= 0.0 || fd <= 0.0 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = s * g(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = s * g(d)?;
        }
    }
    let (x, v) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok((x, s * v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{jacobi_real, EllipticModulus};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn dn_cubed_and_constant_are_nodeless() {
        let m = EllipticModulus::from_ksq(0.9).unwrap();
        let k = m.big_k();
        let f = move |x: f64| Ok(c(jacobi_real(x, &m).2.powi(3)));
        assert!(nodeless_check(&f, (-4.0 * k, 4.0 * k), 400).unwrap().nodeless);
        assert!(nodeless_check(&|_| Ok(c(1.0)), (0.0, 1.0), 10).unwrap().nodeless);
    }

    #[test]
    fn sign_change_is_located() {
        let r = nodeless_check(&|x| Ok(c(x - 0.3)), (0.0, 1.0), 7).unwrap();
        assert!(!r.nodeless);
        assert!((r.location.unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn hidden_pair_of_zeros_is_found() {
        // zeros at 0.5 ± 1e-3 fall between samples
        let r = nodeless_check(&|x| Ok(c((x - 0.5).powi(2) - 1e-6)), (0.0, 1.0), 10).unwrap();
        assert!(!r.nodeless);
        assert!((r.location.unwrap() - 0.499).abs() < 1e-8);
    }

    #[test]
    fn complex_values_are_rejected() {
        let e = nodeless_check(&|x| Ok(Complex64::new(1.0, 0.1 * x)), (0.0, 1.0), 5);
        assert!(matches!(e, Err(Error::Reality { .. })));
    }
}
