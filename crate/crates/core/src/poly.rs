//! Roots of polynomials with real coefficients: simultaneous Aberth–Ehrlich
//! iteration followed by Newton polishing on the original polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots closer than this (relative) are reported as one multiple root.
pub const CLUSTER_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    /// Number of computed roots in this root's cluster (1 for simple roots).
    pub multiplicity: usize,
    /// `|p(r)| / Σ|a_i||r|^i` after polishing.
    pub residual: f64,
}

/// Horner evaluation of `p` and `p'`; `coeffs[i]` multiplies `y^i`.
pub fn eval_with_derivative(coeffs: &[f64], y: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let ay = y.norm();
    for &a in coeffs.iter().rev() {
        dp = dp * y + p;
        p = p * y + a;
        mag = mag * ay + a.abs();
    }
    (p, dp, mag)
}

/// All `deg` roots of `Σ coeffs[i] yⁱ`, with multiplicities flagged.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Root>> {
    let deg = coeffs
        .iter()
        .rposition(|a| *a != 0.0)
        .ok_or_else(|| Error::domain("zero polynomial has no well-defined roots"))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let coeffs = &coeffs[..=deg];
    if coeffs.iter().any(|a| !a.is_finite()) {
        return Err(Error::numeric("polynomial_roots", "non-finite coefficient"));
    }
    let lead = coeffs[deg];
    let cauchy = 1.0
        + coeffs[..deg]
            .iter()
            .map(|a| (a / lead).abs())
            .fold(0.0, f64::max);
    // start inside the Cauchy disc on a slightly rotated circle
    let radius = 0.5 * cauchy;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / deg as f64 + 0.4;
            Complex64::from_polar(radius, th)
        })
        .collect();

    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let (p, dp, mag) = eval_with_derivative(coeffs, z[k]);
            if p.norm() <= 1e-16 * mag {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    let mut roots = Vec::with_capacity(deg);
    for &z0 in &z {
        let mut r = z0;
        for _ in 0..4 {
            let (p, dp, _) = eval_with_derivative(coeffs, r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = r - step;
            let (pn, _, magn) = eval_with_derivative(coeffs, next);
            let (pc, _, magc) = eval_with_derivative(coeffs, r);
            if pn.norm() / magn <= pc.norm() / magc {
                r = next;
            } else {
                break;
            }
        }
        let (p, _, mag) = eval_with_derivative(coeffs, r);
        roots.push(Root {
            value: r,
            multiplicity: 1,
            residual: p.norm() / mag.max(f64::MIN_POSITIVE),
        });
    }

    for i in 0..deg {
        let count = (0..deg)
            .filter(|&j| {
                (roots[i].value - roots[j].value).norm()
                    < CLUSTER_TOLERANCE * (1.0 + roots[i].value.norm())
            })
            .count();
        roots[i].multiplicity = count;
    }

    let worst = roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    if !converged && worst > 1e-10 {
        return Err(Error::numeric(
            "polynomial_roots",
            format!("Aberth iteration did not converge (worst scaled residual {worst:e})"),
        ));
    }
    Ok(roots)
}
