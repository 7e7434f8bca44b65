use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nodes::{nodeless_check, real_part};
use super::seed::{SeedKind, SeedSolution};
use crate::elliptic::{jacobi_real, jacobi_sn_cn_dn};
use crate::error::{Error, Result};
use crate::frobenius::{potential, LameParams};
use crate::jet::LogJet;
use crate::spectral::{classify_energy, BandStructure, EnergyClass};

/// Asymptotically periodic partners must be within this of their periodic
/// counterpart beyond the defect radius.
pub const DEFECT_THRESHOLD: f64 = 1e-3;
/// Defect radius in units of `K`.
pub const DEFECT_RADIUS_K: f64 = 10.0;

/// Closed-form terms larger than this multiple of the result trigger the
/// cancellation-free Wronskian evaluation.
const CANCELLATION_LIMIT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Periodicity {
    Periodic,
    AsymptoticallyPeriodic,
}

/// `Ṽ = V − 2[ln W(u₁, …, u_n)]''` for one or two seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPotential {
    periodicity: Periodicity,
    seeds: Vec<SeedSolution>,
    params: LameParams,
}

/// Echo of how a partner was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartnerMetadata {
    pub order: usize,
    pub periodicity: Periodicity,
    pub m: u32,
    pub ell: u32,
    pub ksq: f64,
    pub epsilons: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub signs: Vec<i8>,
    /// Energies of the states created at the defect (empty when periodic).
    pub bound_states: Vec<f64>,
    pub defect_threshold: f64,
    pub defect_radius_k: f64,
}

fn below_spectrum(bands: &BandStructure, eps: f64) -> Result<()> {
    match classify_energy(bands, eps)? {
        EnergyClass::BelowSpectrum => Ok(()),
        other => Err(Error::domain(format!(
            "factorization energy {eps} must lie below the lowest band edge {:?} (found {other:?})",
            bands.ground_energy()
        ))),
    }
}

fn same_gap(bands: &BandStructure, e1: f64, e2: f64) -> Result<()> {
    if e1 == e2 {
        return Err(Error::domain("second-order seeds need distinct energies"));
    }
    match (classify_energy(bands, e1)?, classify_energy(bands, e2)?) {
        (EnergyClass::Gap(i), EnergyClass::Gap(j)) if i == j => Ok(()),
        (a, b) => Err(Error::domain(format!(
            "factorization energies {e1} ({a:?}) and {e2} ({b:?}) are not inside the same gap"
        ))),
    }
}

fn same_params(a: &SeedSolution, b: &SeedSolution) -> Result<()> {
    if a.params() != b.params() {
        return Err(Error::domain("seeds belong to different potentials"));
    }
    Ok(())
}

/// `Ṽ^± = m(m−1)k²sn²x + ℓ(ℓ−1)k²cd²x + 2k²Σ sn²(x ± b_r)` from the pure
/// Bloch seed `u = ψ^±`, for `ε` below the spectrum.
pub fn first_order_partner_periodic(seed: SeedSolution, bands: &BandStructure) -> Result<PartnerPotential> {
    if !seed.is_bloch() {
        return Err(Error::domain("periodic first-order partner needs a pure Bloch seed"));
    }
    below_spectrum(bands, seed.energy())?;
    let p = PartnerPotential::assemble(Periodicity::Periodic, vec![seed]);
    p.require_nodeless()?;
    Ok(p)
}

/// `Ṽ^np = Ṽ^± − 2(ln φ)''` with `φ = 1 + λψ^∓/ψ^±`, for `ε` below the spectrum.
pub fn first_order_partner_nonperiodic(seed: SeedSolution, bands: &BandStructure) -> Result<PartnerPotential> {
    if seed.is_bloch() {
        return Err(Error::domain("asymptotically periodic partner needs a combination seed (λ ≠ 0)"));
    }
    below_spectrum(bands, seed.energy())?;
    let p = PartnerPotential::assemble(Periodicity::AsymptoticallyPeriodic, vec![seed]);
    p.require_nodeless()?;
    Ok(p)
}

/// `Ṽ = m(m−3)k²sn²x + ℓ(ℓ−3)k²cd²x + 2k²Σ[sn²(x + b_r) + sn²(x + b'_r)] − 2(ln g)''`
/// with `g = [ln(ψ₂/ψ₁)]'`, for two pure Bloch seeds in one gap.
pub fn second_order_partner_periodic(
    seed1: SeedSolution,
    seed2: SeedSolution,
    bands: &BandStructure,
) -> Result<PartnerPotential> {
    if !(seed1.is_bloch() && seed2.is_bloch()) {
        return Err(Error::domain("periodic second-order partner needs pure Bloch seeds"));
    }
    same_params(&seed1, &seed2)?;
    same_gap(bands, seed1.energy(), seed2.energy())?;
    let p = PartnerPotential::assemble(Periodicity::Periodic, vec![seed1, seed2]);
    p.require_nodeless()?;
    Ok(p)
}

/// `Ṽ^np = Ṽ − 2[ln(φ₁φ₂ g^np/g)]''` with `g^np = g + [ln(φ₂/φ₁)]'`.
pub fn second_order_partner_nonperiodic(
    seed1: SeedSolution,
    seed2: SeedSolution,
    bands: &BandStructure,
) -> Result<PartnerPotential> {
    if seed1.is_bloch() && seed2.is_bloch() {
        return Err(Error::domain("asymptotically periodic partner needs at least one combination seed"));
    }
    same_params(&seed1, &seed2)?;
    same_gap(bands, seed1.energy(), seed2.energy())?;
    let p = PartnerPotential::assemble(Periodicity::AsymptoticallyPeriodic, vec![seed1, seed2]);
    p.require_nodeless()?;
    Ok(p)
}

impl PartnerPotential {
    fn assemble(periodicity: Periodicity, seeds: Vec<SeedSolution>) -> Self {
        let params = *seeds[0].params();
        Self {
            periodicity,
            seeds,
            params,
        }
    }

    pub fn order(&self) -> usize {
        self.seeds.len()
    }

    pub fn periodicity(&self) -> Periodicity {
        self.periodicity
    }

    pub fn seeds(&self) -> &[SeedSolution] {
        &self.seeds
    }

    pub fn params(&self) -> &LameParams {
        &self.params
    }

    /// Window over which nodelessness is verified: `[−2K, 2K]` for periodic
    /// partners, `[−20K, 20K]` otherwise.
    pub fn check_window(&self) -> (f64, f64) {
        let k = self.params.modulus().big_k();
        match self.periodicity {
            Periodicity::Periodic => (-2.0 * k, 2.0 * k),
            Periodicity::AsymptoticallyPeriodic => (-20.0 * k, 20.0 * k),
        }
    }

    fn require_nodeless(&self) -> Result<()> {
        let window = self.check_window();
        let samples = match self.periodicity {
            Periodicity::Periodic => 801,
            Periodicity::AsymptoticallyPeriodic => 4001,
        };
        let r = nodeless_check(&|x| Ok(self.log_wronskian(x)?.exp()), window, samples)?;
        match (r.nodeless, r.location, self.order()) {
            (true, _, _) => Ok(()),
            (false, loc, 1) => Err(Error::NodalSeed {
                location: loc.unwrap_or(f64::NAN),
            }),
            (false, loc, _) => Err(Error::NodalWronskian {
                location: loc.unwrap_or(f64::NAN),
            }),
        }
    }

    pub fn metadata(&self) -> PartnerMetadata {
        PartnerMetadata {
            order: self.order(),
            periodicity: self.periodicity,
            m: self.params.m(),
            ell: self.params.ell(),
            ksq: self.params.ksq(),
            epsilons: self.seeds.iter().map(|s| s.energy()).collect(),
            lambdas: self.seeds.iter().map(|s| s.lambda()).collect(),
            signs: self.seeds.iter().map(|s| s.base_sign()).collect(),
            bound_states: self.bound_state_energies(),
            defect_threshold: DEFECT_THRESHOLD,
            defect_radius_k: DEFECT_RADIUS_K,
        }
    }

    /// `ln W(u₁, …)`: `ln u` at first order, `ln u₁ + ln u₂ + ln(l₂ − l₁)` at second.
    pub fn log_wronskian(&self, x: f64) -> Result<Complex64> {
        let j1 = self.seeds[0].log_jet(x)?;
        match self.seeds.get(1) {
            None => Ok(j1.ln),
            Some(s2) => {
                let j2 = s2.log_jet(x)?;
                Ok(j1.ln + j2.ln + (j2.d1 - j1.d1).ln())
            }
        }
    }

    /// `W(u₁, …)` at `x`, real.
    pub fn wronskian(&self, x: f64) -> Result<f64> {
        real_part(self.log_wronskian(x)?.exp(), x)
    }

    fn k2sn2(&self, w: Complex64) -> Result<Complex64> {
        let (s, _, _) = jacobi_sn_cn_dn(w, self.params.modulus())?;
        Ok(s * s * self.params.ksq())
    }

    /// Closed form and the largest magnitude among its terms.
    fn closed_form(&self, x: f64) -> Result<(Complex64, f64)> {
        let n = self.order() as f64;
        let (m, l) = (self.params.m() as f64, self.params.ell() as f64);
        let (sn, cn, dn) = jacobi_real(x, self.params.modulus());
        let ksq = self.params.ksq();
        let t_sn = m * (m + 1.0 - 2.0 * n) * ksq * sn * sn;
        let t_cd = l * (l + 1.0 - 2.0 * n) * ksq * cn * cn / (dn * dn);
        let mut total = Complex64::new(t_sn + t_cd, 0.0);
        let mut mag = t_sn.abs().max(t_cd.abs());
        let mut add = |t: Complex64| {
            mag = mag.max(t.norm());
            total += t;
        };
        for seed in &self.seeds {
            let s = seed.base_sign() as f64;
            for &b in seed.base().broots() {
                add(self.k2sn2(Complex64::new(x, 0.0) + b * s)? * 2.0);
            }
        }
        let phis: Vec<LogJet> = self
            .seeds
            .iter()
            .map(|s| if s.is_bloch() { Ok(None) } else { s.phi_log_jet(x).map(Some) })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|p| p.unwrap_or(LogJet::zero()))
            .collect();
        match self.order() {
            1 => add(phis[0].d2 * -2.0),
            _ => {
                let l1 = self.seeds[0].base().log_jet(x)?;
                let l2 = self.seeds[1].base().log_jet(x)?;
                let g = [l2.d1 - l1.d1, l2.d2 - l1.d2, l2.d3 - l1.d3];
                let lng2 = |g: [Complex64; 3]| g[2] / g[0] - (g[1] / g[0]) * (g[1] / g[0]);
                let periodic = lng2(g);
                add(periodic * -2.0);
                if self.periodicity == Periodicity::AsymptoticallyPeriodic {
                    let gnp = [
                        g[0] + phis[1].d1 - phis[0].d1,
                        g[1] + phis[1].d2 - phis[0].d2,
                        g[2] + phis[1].d3 - phis[0].d3,
                    ];
                    add((phis[0].d2 + phis[1].d2 + lng2(gnp) - periodic) * -2.0);
                }
            }
        }
        Ok((total, mag))
    }

    /// `V − 2(ln W)''` using `u'' = (V − ε)u`, free of cancelling poles:
    /// first order `2ε − V + 2l²`; second order
    /// `V + 2Δ²/G² − 2Δ(l₁ + l₂)/G`, `Δ = ε₁ − ε₂`, `G = l₂ − l₁`.
    fn wronskian_route(&self, x: f64) -> Result<Complex64> {
        let v = potential(x, &self.params);
        let l1 = self.seeds[0].log_jet(x)?.d1;
        match self.seeds.get(1) {
            None => Ok(l1 * l1 * 2.0 + 2.0 * self.seeds[0].energy() - v),
            Some(s2) => {
                let l2 = s2.log_jet(x)?.d1;
                let d = self.seeds[0].energy() - s2.energy();
                let g = l2 - l1;
                Ok(Complex64::new(v, 0.0) + (d * d * 2.0) / (g * g) - (l1 + l2) * (2.0 * d) / g)
            }
        }
    }

    /// `Ṽ(x)`, from the closed form unless its terms cancel badly.
    pub fn value(&self, x: f64) -> Result<f64> {
        match self.closed_form(x) {
            Ok((v, mag)) if mag <= CANCELLATION_LIMIT * (1.0 + v.norm()) => real_part(v, x),
            Ok(_) | Err(Error::Pole { .. }) => real_part(self.wronskian_route(x)?, x),
            Err(e) => Err(e),
        }
    }

    /// `Ṽ(x)` through the Wronskian identity only.
    pub fn value_via_wronskian(&self, x: f64) -> Result<f64> {
        real_part(self.wronskian_route(x)?, x)
    }

    /// Energies of the states bound by the defect.
    pub fn bound_state_energies(&self) -> Vec<f64> {
        match self.periodicity {
            Periodicity::Periodic => Vec::new(),
            Periodicity::AsymptoticallyPeriodic => self.seeds.iter().map(|s| s.energy()).collect(),
        }
    }

    /// `ln` of the state at `ε_i` that the transformation adds:
    /// `1/u` at first order, `u₂/W` at `ε₁` and `u₁/W` at `ε₂`.
    pub fn missing_state_log(&self, index: usize, x: f64) -> Result<Complex64> {
        let j1 = self.seeds[0].log_jet(x)?;
        match (self.seeds.get(1), index) {
            (None, 0) => Ok(-j1.ln),
            (Some(s2), 0 | 1) => {
                let j2 = s2.log_jet(x)?;
                let lg = (j2.d1 - j1.d1).ln();
                Ok(if index == 0 { -j1.ln - lg } else { -j2.ln - lg })
            }
            _ => Err(Error::domain(format!("no missing state with index {index}"))),
        }
    }

    /// Value of [`Self::missing_state_log`], real.
    pub fn missing_state(&self, index: usize, x: f64) -> Result<f64> {
        real_part(self.missing_state_log(index, x)?.exp(), x)
    }

    /// The periodic partner this one approaches on the side `side > 0`
    /// (right) or `side < 0` (left): each seed replaced by the Bloch
    /// solution that dominates it there.
    pub fn asymptotic_counterpart(&self, side: f64) -> Result<PartnerPotential> {
        if self.periodicity == Periodicity::Periodic {
            return Ok(self.clone());
        }
        let mut seeds = Vec::with_capacity(self.seeds.len());
        for s in &self.seeds {
            let sign = if s.is_bloch() {
                s.base_sign()
            } else {
                let grows_right = s.solution().plus.bloch_factor()?.norm() > 1.0;
                let right = if grows_right { 1 } else { -1 };
                if side > 0.0 {
                    right
                } else {
                    -right
                }
            };
            seeds.push(SeedSolution::from_solution(s.solution().clone(), SeedKind::Bloch { sign })?);
        }
        Ok(Self::assemble(Periodicity::Periodic, seeds))
    }

    /// `V − 2(ln |W|)''` with a 5-point stencil of step `10⁻³K`.
    pub fn darboux_value(&self, x: f64) -> Result<f64> {
        let h = 1e-3 * self.params.modulus().big_k();
        let f = |t: f64| -> Result<f64> { Ok(self.log_wronskian(t)?.re) };
        let d2 = (-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)?
            - f(x - 2.0 * h)?)
            / (12.0 * h * h);
        Ok(potential(x, &self.params) - 2.0 * d2)
    }
}
