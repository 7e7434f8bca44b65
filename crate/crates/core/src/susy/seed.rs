use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nodes::real_part;
use crate::error::{Error, Result};
use crate::frobenius::{solve, BlochSolution, GeneralSolution, LameParams};
use crate::jet::LogJet;

/// How a seed is assembled from the Bloch pair at its energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeedKind {
    /// `u = ψ^sign`.
    Bloch { sign: i8 },
    /// `u = ψ^base + λ ψ^(−base)`.
    Combination { base: i8, lambda: f64 },
}

/// A real solution `u` of `−u'' + Vu = εu` used as a transformation seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedSolution {
    kind: SeedKind,
    solution: GeneralSolution,
}

fn check_sign(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::domain(format!("Bloch sign must be +1 or -1, got {sign}")))
    }
}

impl SeedSolution {
    pub fn bloch(params: &LameParams, energy: f64, sign: i8) -> Result<Self> {
        check_sign(sign)?;
        Ok(Self {
            kind: SeedKind::Bloch { sign },
            solution: solve(params, energy)?,
        })
    }

    /// `ψ^base + λψ^(−base)`; `λ = 0` gives the pure Bloch seed.
    pub fn combination(params: &LameParams, energy: f64, base: i8, lambda: f64) -> Result<Self> {
        check_sign(base)?;
        if !lambda.is_finite() {
            return Err(Error::domain("mixing ratio must be finite"));
        }
        let kind = if lambda == 0.0 {
            SeedKind::Bloch { sign: base }
        } else {
            SeedKind::Combination { base, lambda }
        };
        Ok(Self {
            kind,
            solution: solve(params, energy)?,
        })
    }

    /// Reuse an already solved Bloch pair.
    pub fn from_solution(solution: GeneralSolution, kind: SeedKind) -> Result<Self> {
        match kind {
            SeedKind::Bloch { sign } => check_sign(sign)?,
            SeedKind::Combination { base, .. } => check_sign(base)?,
        }
        Ok(Self { kind, solution })
    }

    pub fn energy(&self) -> f64 {
        self.solution.energy.value()
    }

    pub fn kind(&self) -> SeedKind {
        self.kind
    }

    pub fn params(&self) -> &LameParams {
        &self.solution.params
    }

    pub fn solution(&self) -> &GeneralSolution {
        &self.solution
    }

    pub fn is_bloch(&self) -> bool {
        matches!(self.kind, SeedKind::Bloch { .. })
    }

    /// Sign of the Bloch term carrying unit weight.
    pub fn base_sign(&self) -> i8 {
        match self.kind {
            SeedKind::Bloch { sign } => sign,
            SeedKind::Combination { base, .. } => base,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self.kind {
            SeedKind::Bloch { .. } => 0.0,
            SeedKind::Combination { lambda, .. } => lambda,
        }
    }

    /// The Bloch solution `ψ^base`.
    pub fn base(&self) -> &BlochSolution {
        self.solution.get(self.base_sign())
    }

    /// The other member of the pair, `ψ^(−base)`.
    pub fn partner(&self) -> &BlochSolution {
        self.solution.get(-self.base_sign())
    }

    /// `ln u` and three derivatives.
    pub fn log_jet(&self, x: f64) -> Result<LogJet> {
        let a = self.base().log_jet(x)?;
        match self.kind {
            SeedKind::Bloch { .. } => Ok(a),
            SeedKind::Combination { lambda, .. } => {
                let b = self.partner().log_jet(x)?;
                Ok(LogJet::ln_sum(a, b, Complex64::new(lambda, 0.0)))
            }
        }
    }

    /// `ln φ` with `φ = u/ψ^base = 1 + λψ^(−base)/ψ^base`.
    pub fn phi_log_jet(&self, x: f64) -> Result<LogJet> {
        Ok(self.log_jet(x)? - self.base().log_jet(x)?)
    }

    /// `u(x)`, real.
    pub fn value(&self, x: f64) -> Result<f64> {
        let v = match self.log_jet(x) {
            Ok(l) => l.ln.exp(),
            Err(Error::Pole { .. }) => {
                let a = self.base().evaluate(x)?;
                a + self.partner().evaluate(x)? * self.lambda()
            }
            Err(e) => return Err(e),
        };
        real_part(v, x)
    }

    /// `u'/u`, real.
    pub fn log_derivative(&self, x: f64) -> Result<f64> {
        real_part(self.log_jet(x)?.d1, x)
    }
}
