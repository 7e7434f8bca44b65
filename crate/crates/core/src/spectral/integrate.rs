use std::ops::{Add, Mul, Sub};

use super::Grid;
use crate::error::{Error, Result};

/// Field over which `ψ'' = (V − E)ψ` is integrated: `f64` or `Complex64`.
pub trait Amplitude:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + std::fmt::Debug
{
    fn magnitude(self) -> f64;
}

impl Amplitude for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Amplitude for num_complex::Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Magnitude at which the state is rescaled to avoid overflow.
const RESCALE_AT: f64 = 1e150;

/// Sampled `(ψ, ψ')` on a grid. The true values are `psi[i]·exp(log_scale[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub x: Vec<f64>,
    pub psi: Vec<T>,
    pub dpsi: Vec<T>,
    pub log_scale: Vec<f64>,
    /// `(grid index, ln factor)` of every rescaling applied.
    pub rescalings: Vec<(usize, f64)>,
}

impl<T: Amplitude> Trajectory<T> {
    /// `ψ` at sample `i` with the accumulated scale restored.
    pub fn value(&self, i: usize) -> T {
        self.psi[i] * self.log_scale[i].exp()
    }

    pub fn derivative(&self, i: usize) -> T {
        self.dpsi[i] * self.log_scale[i].exp()
    }
}

#[inline]
fn rk4_step<T: Amplitude>(y: T, dy: T, q0: f64, qh: f64, q1: f64, h: f64) -> (T, T) {
    let k1y = dy;
    let k1d = y * q0;
    let y2 = y + k1y * (0.5 * h);
    let d2 = dy + k1d * (0.5 * h);
    let k2y = d2;
    let k2d = y2 * qh;
    let y3 = y + k2y * (0.5 * h);
    let d3 = dy + k2d * (0.5 * h);
    let k3y = d3;
    let k3d = y3 * qh;
    let y4 = y + k3y * h;
    let d4 = dy + k3d * h;
    let k4y = d4;
    let k4d = y4 * q1;
    (
        y + (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0),
        dy + (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6.0),
    )
}

/// Fixed-step RK4 for `-ψ'' + Vψ = Eψ` from `grid.x0` with `(ψ, ψ') = (psi0, dpsi0)`.
/// Each grid cell is split into `ceil(h_grid / max_step)` equal steps.
pub fn integrate_schrodinger<T: Amplitude>(
    v: &dyn Fn(f64) -> f64,
    energy: f64,
    psi0: T,
    dpsi0: T,
    grid: &Grid,
    max_step: f64,
) -> Result<Trajectory<T>> {
    if !(max_step > 0.0) {
        return Err(Error::domain("integration step must be positive"));
    }
    let hg = grid.spacing();
    let sub = (hg / max_step).ceil().max(1.0) as usize;
    let h = hg / sub as f64;
    let n = grid.len();
    let mut out = Trajectory {
        x: Vec::with_capacity(n),
        psi: Vec::with_capacity(n),
        dpsi: Vec::with_capacity(n),
        log_scale: Vec::with_capacity(n),
        rescalings: Vec::new(),
    };
    let (mut y, mut dy, mut ls) = (psi0, dpsi0, 0.0);
    let mut q_prev = v(grid.x0()) - energy;
    for i in 0..n {
        let xi = grid.point(i);
        out.x.push(xi);
        out.psi.push(y);
        out.dpsi.push(dy);
        out.log_scale.push(ls);
        if i + 1 == n {
            break;
        }
        for s in 0..sub {
            let x = xi + h * s as f64;
            let qh = v(x + 0.5 * h) - energy;
            let q1 = v(x + h) - energy;
            (y, dy) = rk4_step(y, dy, q_prev, qh, q1, h);
            q_prev = q1;
        }
        let mag = y.magnitude().max(dy.magnitude());
        if !mag.is_finite() {
            return Err(Error::numeric("integrate_schrodinger", format!("non-finite state at x = {xi}")));
        }
        if mag > RESCALE_AT {
            let l = mag.ln();
            y = y * (1.0 / mag);
            dy = dy * (1.0 / mag);
            ls += l;
            out.rescalings.push((i + 1, l));
        }
    }
    Ok(out)
}

/// `V` sampled at the nodes and midpoints of `steps` equal steps over one
/// period, so repeated integrations at different energies reuse it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    period: f64,
    values: Vec<f64>,
}

impl SampledPotential {
    pub fn new(v: &dyn Fn(f64) -> f64, period: f64, steps: usize) -> Result<Self> {
        if !(period > 0.0) || steps == 0 {
            return Err(Error::domain("period and step count must be positive"));
        }
        let h = period / (2 * steps) as f64;
        let values: Vec<f64> = (0..=2 * steps).map(|i| v(h * i as f64)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::numeric(
                "sampled_potential",
                format!("potential is not finite at x = {}", h * i as f64),
            ));
        }
        Ok(Self { period, values })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn steps(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    /// `(ψ, ψ')` at `x = period` from the given data at `x = 0`.
    pub fn propagate<T: Amplitude>(&self, energy: f64, psi0: T, dpsi0: T) -> (T, T) {
        let n = self.steps();
        let h = self.period / n as f64;
        let (mut y, mut dy) = (psi0, dpsi0);
        for s in 0..n {
            let v = &self.values[2 * s..2 * s + 3];
            (y, dy) = rk4_step(y, dy, v[0] - energy, v[1] - energy, v[2] - energy, h);
        }
        (y, dy)
    }
}

/// Numerov integration of `ψ'' = (V − E)ψ` on the grid, started from
/// `ψ(x₀)` and `ψ(x₀ + h)`. Returns `ψ` at each grid point.
pub fn integrate_numerov<T: Amplitude>(
    v: &dyn Fn(f64) -> f64,
    energy: f64,
    psi0: T,
    psi1: T,
    grid: &Grid,
) -> Vec<T> {
    let h = grid.spacing();
    let c = h * h / 12.0;
    let q: Vec<f64> = (0..grid.len()).map(|i| v(grid.point(i)) - energy).collect();
    let mut out = Vec::with_capacity(grid.len());
    out.push(psi0);
    if grid.len() > 1 {
        out.push(psi1);
    }
    for i in 2..grid.len() {
        let a = out[i - 1] * (2.0 + 10.0 * c * q[i - 1]);
        let b = out[i - 2] * (1.0 - c * q[i - 2]);
        out.push((a - b) * (1.0 / (1.0 - c * q[i])));
    }
    out
}
