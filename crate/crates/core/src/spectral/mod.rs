//! Independent numerical checks: direct integration of the Schrödinger
//! equation, finite-difference residuals, and band structure from the Hill
//! discriminant. Nothing here uses the closed-form solutions.

mod bands;
mod integrate;
mod residual;

pub use bands::{
    band_edges, classify_energy, hill_discriminant, BandStructure, DiscriminantScan, EnergyClass,
    Monodromy, STEPS_PER_PERIOD,
};
pub use integrate::{
    integrate_numerov, integrate_schrodinger, Amplitude, SampledPotential, Trajectory,
};
pub use residual::{ode_residual, ResidualReport};

use crate::error::{Error, Result};

/// `n` equally spaced points from `x0` to `x1` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x0: f64,
    x1: f64,
    n: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("grid needs at least 2 points, got {n}")));
        }
        if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
            return Err(Error::domain(format!("grid needs x0 < x1, got [{x0}, {x1}]")));
        }
        Ok(Self { x0, x1, n })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x1 - self.x0) / (self.n - 1) as f64
    }

    /// Point `i`; the last one is exactly `x1`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x1
        } else {
            self.x0 + self.spacing() * i as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }
}

#[cfg(test)]
mod tests;
