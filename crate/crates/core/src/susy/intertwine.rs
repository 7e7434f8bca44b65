use num_complex::Complex64;

use super::seed::SeedSolution;
use crate::error::{Error, Result};
use crate::frobenius::potential;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntertwineMode {
    /// `ψ̃ = ψ' − (ln u)'ψ`.
    Order1,
    /// `ψ̃ = W(u₁, u₂, ψ)/W(u₁, u₂)`.
    Order2,
}

/// Input solution `x ↦ (ψ(x), ψ'(x))`.
pub type SolutionFn<'a> = Box<dyn Fn(f64) -> Result<(Complex64, Complex64)> + 'a>;

/// Image of a solution of `Hψ = Eψ` under the intertwining operator.
pub struct Intertwined<'a> {
    seeds: &'a [SeedSolution],
    psi: SolutionFn<'a>,
    energy: f64,
    notice: Option<Error>,
}

/// Map `ψ` at energy `E` to a solution of the partner equation at the same
/// energy. When `E` coincides with a factorization energy the map may
/// annihilate `ψ`; this is reported through [`Intertwined::notice`].
pub fn intertwine<'a>(
    seeds: &'a [SeedSolution],
    psi: SolutionFn<'a>,
    energy: f64,
    mode: IntertwineMode,
) -> Result<Intertwined<'a>> {
    let want = match mode {
        IntertwineMode::Order1 => 1,
        IntertwineMode::Order2 => 2,
    };
    if seeds.len() != want {
        return Err(Error::domain(format!(
            "{mode:?} needs {want} seed(s), got {}",
            seeds.len()
        )));
    }
    let notice = seeds
        .iter()
        .any(|s| (s.energy() - energy).abs() <= 1e-12 * energy.abs().max(1.0))
        .then_some(Error::NullAction { energy });
    Ok(Intertwined {
        seeds,
        psi,
        energy,
        notice,
    })
}

impl Intertwined<'_> {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `Some(NullAction)` when `E` equals a factorization energy.
    pub fn notice(&self) -> Option<&Error> {
        self.notice.as_ref()
    }

    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        let (p, dp) = (self.psi)(x)?;
        let l1 = self.seeds[0].log_jet(x)?.d1;
        match self.seeds.get(1) {
            None => Ok(dp - l1 * p),
            Some(s2) => {
                let l2 = s2.log_jet(x)?.d1;
                let v = potential(x, self.seeds[0].params());
                let (e1, e2) = (self.seeds[0].energy(), s2.energy());
                let g = l2 - l1;
                let ddp = p * (v - self.energy);
                Ok(ddp + (dp * (e2 - e1) + p * (l1 * (v - e2) - l2 * (v - e1))) / g)
            }
        }
    }
}
