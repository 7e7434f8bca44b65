use num_complex::Complex64;

use super::ProductSolution;
use crate::error::{Error, Result};

// 5-point Gauss–Legendre on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

/// `(ψ⁺(x), ψ⁻(x))` from `ψ^± = √Ψ · exp(∓½ ∫_{x₀}^{x} dτ/Ψ)` with
/// `Ψ` scaled to unit Wronskian, by composite Gauss–Legendre quadrature
/// along the real axis. The square-root branch follows `Ψ` continuously.
pub fn general_solution_from_product(
    product: &ProductSolution,
    x0: f64,
    x: f64,
) -> Result<(Complex64, Complex64)> {
    let w = product.w;
    let psi = |t: f64| -> Result<Complex64> { Ok(product.eval_x(t)? / w) };

    let start = psi(x0)?;
    let floor = 1e-12 * start.norm().max(1e-300);
    let panel = 0.02 * product.params.modulus().big_k();
    let n = ((x - x0).abs() / panel).ceil().max(1.0) as usize;
    let h = (x - x0) / n as f64;

    let mut integral = Complex64::new(0.0, 0.0);
    let mut root = start.sqrt();
    let mut prev = start;
    for i in 0..n {
        let a = x0 + h * i as f64;
        let mid = a + 0.5 * h;
        for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let t = mid + 0.5 * h * node;
            let v = psi(t)?;
            if v.norm() < floor {
                return Err(Error::Path { location: t });
            }
            integral += weight * 0.5 * h / v;
        }
        let end = psi(a + h)?;
        if end.norm() < floor {
            return Err(Error::Path { location: a + h });
        }
        // continue the square root: pick the branch nearest root·√(end/prev)
        let candidate = end.sqrt();
        let guess = root * (end / prev).sqrt();
        root = if (candidate - guess).norm() <= (candidate + guess).norm() {
            candidate
        } else {
            -candidate
        };
        prev = end;
    }
    let e = (integral * 0.5).exp();
    Ok((root / e, root * e))
}
