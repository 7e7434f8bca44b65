use num_complex::Complex64;

use super::Grid;
use crate::error::Result;

/// Outcome of [`ode_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `max |−ψ'' + Vψ − Eψ| / max |Eψ|` over the grid.
    pub max_relative: f64,
    /// Grid point where the numerator peaks.
    pub location: f64,
    /// Set when the residual is dominated by stencil truncation.
    pub warning: Option<String>,
}

/// Stencil step balancing rounding (`~5ε/h²`) against truncation
/// (`~h⁴ q³/90`) for `|V − E| ≤ q`.
fn stencil_step(q: f64) -> f64 {
    7e-3 / q.max(1.0).sqrt()
}

/// Relative residual of `−ψ'' + Vψ = Eψ` using a 5-point second-derivative
/// stencil. The denominator is floored at `1e−12·max|ψ|` for `E = 0`.
pub fn ode_residual(
    psi: &dyn Fn(f64) -> Result<Complex64>,
    v: &dyn Fn(f64) -> f64,
    energy: f64,
    grid: &Grid,
) -> Result<ResidualReport> {
    let q = grid.iter().map(|x| (v(x) - energy).abs()).fold(0.0, f64::max);
    let h = stencil_step(q);
    let point = |x: f64, h: f64| -> Result<(f64, Complex64)> {
        let p = [psi(x - 2.0 * h)?, psi(x - h)?, psi(x)?, psi(x + h)?, psi(x + 2.0 * h)?];
        let d2 = (-p[0] + p[1] * 16.0 - p[2] * 30.0 + p[3] * 16.0 - p[4]) / (12.0 * h * h);
        Ok(((-d2 + p[2] * (v(x) - energy)).norm(), p[2]))
    };
    let mut worst = 0.0f64;
    let mut location = grid.x0();
    let mut scale = 0.0f64;
    let mut amplitude = 0.0f64;
    for x in grid.iter() {
        let (r, p) = point(x, h)?;
        if r > worst {
            worst = r;
            location = x;
        }
        scale = scale.max((p * energy).norm());
        amplitude = amplitude.max(p.norm());
    }
    let denom = scale.max(1e-12 * amplitude).max(f64::MIN_POSITIVE);
    let max_relative = worst / denom;
    // truncation dominates when doubling the step scales the residual like h⁴
    let coarse = point(location, 2.0 * h)?.0 / denom;
    let warning = (max_relative > 1e-9 && coarse > 8.0 * max_relative).then(|| {
        format!(
            "stencil truncation dominates at x = {location} \
             ({max_relative:.1e} at h = {h:.1e}, {coarse:.1e} at 2h); refine the grid"
        )
    });
    Ok(ResidualReport {
        max_relative,
        location,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_is_exact() {
        let g = Grid::new(0.0, 6.0, 301).unwrap();
        let r = ode_residual(&|x| Ok(Complex64::new(x.sin(), 0.0)), &|_| 0.0, 1.0, &g).unwrap();
        assert!(r.max_relative < 1e-10, "{}", r.max_relative);
    }

    #[test]
    fn non_solution_is_flagged() {
        let g = Grid::new(0.0, 6.0, 301).unwrap();
        let r = ode_residual(
            &|x| Ok(Complex64::new((1.3 * x).sin() + 0.2 * x, 0.0)),
            &|_| 0.0,
            1.0,
            &g,
        )
        .unwrap();
        assert!(r.max_relative > 1e-3);
    }
}
