use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::product::{characteristic_roots, CharacteristicRoot, ProductSolution};
use super::{coefficients, potential, CoefficientTable, EnergySpec, LameParams};
use crate::elliptic::ComplexPoint;
use crate::error::{Error, Result};
use crate::jet::{Jet, LogJet};

/// One of the two Bloch solutions
/// `ψ^±(x) = Π σ(z ± b_r) / [σ^ℓ(z + ω) σ^m(z)] · exp{x[ℓζ(ω) ∓ Σζ(b_r)]}`,
/// `z = x - iK'`, normalized to `ψ(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSolution {
    sign: i8,
    broots: Vec<ComplexPoint>,
    exponent: ComplexPoint,
    log_norm: ComplexPoint,
    params: LameParams,
    energy: EnergySpec,
}

impl BlochSolution {
    /// `sign` is `+1` for `ψ⁺` and `-1` for `ψ⁻`.
    pub fn new(
        sign: i8,
        broots: Vec<ComplexPoint>,
        params: &LameParams,
        energy: &EnergySpec,
    ) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::domain(format!("Bloch sign must be +1 or -1, got {sign}")));
        }
        if broots.len() != params.degree() {
            return Err(Error::domain(format!(
                "expected {} roots b_r, got {}",
                params.degree(),
                broots.len()
            )));
        }
        let f = params.frame();
        let mut zeta_sum = Complex64::new(0.0, 0.0);
        for &b in &broots {
            zeta_sum += f.zeta(b)?;
        }
        let s = sign as f64;
        let exponent = f.eta * params.ell() as f64 - zeta_sum * s;
        let mut sol = Self {
            sign,
            broots,
            exponent,
            log_norm: Complex64::new(0.0, 0.0),
            params: *params,
            energy: *energy,
        };
        sol.log_norm = sol.raw_ln(0.0).map_err(|_| {
            Error::numeric("bloch_solution", "solution vanishes at the normalization point x = 0")
        })?;
        Ok(sol)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn broots(&self) -> &[ComplexPoint] {
        &self.broots
    }

    /// `ℓζ(ω) ∓ Σζ(b_r)`.
    pub fn exponent_constant(&self) -> ComplexPoint {
        self.exponent
    }

    pub fn params(&self) -> &LameParams {
        &self.params
    }

    pub fn energy(&self) -> f64 {
        self.energy.value()
    }

    fn shifts(&self) -> impl Iterator<Item = Complex64> + '_ {
        let s = self.sign as f64;
        self.broots.iter().map(move |&b| b * s)
    }

    fn raw_ln(&self, x: f64) -> Result<Complex64> {
        let f = self.params.frame();
        let z = self.params.z_of_x(x);
        let mut acc = self.exponent * x;
        for b in self.shifts() {
            acc += f.ln_sigma(z + b)?;
        }
        let om = Complex64::new(f.omega, 0.0);
        acc -= f.ln_sigma(z + om)? * self.params.ell() as f64;
        acc -= f.ln_sigma(z)? * self.params.m() as f64;
        Ok(acc)
    }

    /// `ln ψ(x)` (normalized, any branch).
    pub fn ln_value(&self, x: f64) -> Result<Complex64> {
        Ok(self.raw_ln(x)? - self.log_norm)
    }

    /// `ψ(x)`; exactly zero at a zero of the numerator.
    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        match self.ln_value(x) {
            Ok(l) => Ok(l.exp()),
            Err(Error::Pole { .. }) => {
                let f = self.params.frame();
                let z = self.params.z_of_x(x);
                if self.shifts().any(|b| f.ln_sigma(z + b).is_err()) {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    Err(Error::numeric(
                        "evaluate_bloch",
                        format!("denominator vanishes at x = {x}"),
                    ))
                }
            }
            Err(e) => Err(e),
        }
    }

    /// `ln ψ` and its first three derivatives, from `ζ`, `℘` and `℘'`.
    pub fn log_jet(&self, x: f64) -> Result<LogJet> {
        let f = self.params.frame();
        let z = self.params.z_of_x(x);
        let mut l1 = self.exponent;
        let mut l2 = Complex64::new(0.0, 0.0);
        let mut l3 = Complex64::new(0.0, 0.0);
        let mut add = |w: Complex64, weight: f64| -> Result<()> {
            let p = f.wp_all(w)?;
            l1 += f.zeta(w)? * weight;
            l2 -= p.wp * weight;
            l3 -= p.dwp * weight;
            Ok(())
        };
        for b in self.shifts() {
            add(z + b, 1.0)?;
        }
        add(z + Complex64::new(f.omega, 0.0), -(self.params.ell() as f64))?;
        add(z, -(self.params.m() as f64))?;
        Ok(LogJet {
            ln: self.ln_value(x)?,
            d1: l1,
            d2: l2,
            d3: l3,
        })
    }

    /// Jet of `ψ` itself.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        Ok(self.log_jet(x)?.exp())
    }

    /// `ψ'(x)/ψ(x)`.
    pub fn log_derivative(&self, x: f64) -> Result<Complex64> {
        Ok(self.log_jet(x)?.d1)
    }

    /// `ψ(x + 2K) / ψ(x)`.
    pub fn bloch_factor(&self) -> Result<Complex64> {
        Ok((self.ln_value(self.params.period())? - self.ln_value(0.0)?).exp())
    }

    /// Largest scaled value of `|(ln ψ)'' + (ln ψ)'² - (V - E)|` over `n`
    /// points of one period.
    pub fn analytic_residual(&self, n: usize) -> Result<f64> {
        let period = self.params.period();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let x = period * (i as f64 + 0.37) / n as f64;
            let j = self.log_jet(x)?;
            let target = potential(x, &self.params) - self.energy.value();
            let lhs = j.d2 + j.d1 * j.d1;
            let scale = 1.0 + target.abs() + j.d1.norm_sqr() + j.d2.norm();
            worst = worst.max((lhs - target).norm() / scale);
        }
        Ok(worst)
    }
}

/// Both Bloch solutions at one energy, with the objects they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSolution {
    pub params: LameParams,
    pub energy: EnergySpec,
    pub table: CoefficientTable,
    pub roots: Vec<CharacteristicRoot>,
    pub product: ProductSolution,
    pub plus: BlochSolution,
    pub minus: BlochSolution,
}

impl GeneralSolution {
    pub fn get(&self, sign: i8) -> &BlochSolution {
        if sign >= 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// `W(ψ⁺, ψ⁻) = ψ⁺ψ⁻' - ψ⁺'ψ⁻` at `x`.
    pub fn wronskian(&self, x: f64) -> Result<Complex64> {
        let p = self.plus.log_jet(x)?;
        let m = self.minus.log_jet(x)?;
        Ok((p.ln + m.ln).exp() * (m.d1 - p.d1))
    }

    pub fn record(&self) -> SolutionRecord {
        SolutionRecord {
            m: self.params.m(),
            ell: self.params.ell(),
            ksq: self.params.ksq(),
            energy: self.energy.value(),
            a: self.table.a.clone(),
            c_re: self.product.croots.iter().map(|c| c.re).collect(),
            c_im: self.product.croots.iter().map(|c| c.im).collect(),
            b_re: self.product.broots.iter().map(|c| c.re).collect(),
            b_im: self.product.broots.iter().map(|c| c.im).collect(),
        }
    }
}

/// JSON form of a solved instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub m: u32,
    pub ell: u32,
    pub ksq: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub a: Vec<f64>,
    pub c_re: Vec<f64>,
    pub c_im: Vec<f64>,
    pub b_re: Vec<f64>,
    pub b_im: Vec<f64>,
}

/// Run the whole construction: coefficients, characteristic roots, branch
/// selection, and the two Bloch solutions.
pub fn solve(params: &LameParams, energy: f64) -> Result<GeneralSolution> {
    let energy = EnergySpec::new(energy, params)?;
    let table = coefficients(params, &energy)?;
    let roots = characteristic_roots(&table, params)?;
    if roots.iter().any(|r| r.multiplicity > 1) {
        return Err(Error::ExceptionalEnergy {
            energy: energy.value(),
            reason: "repeated characteristic root".into(),
        });
    }
    let worst = roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::numeric(
            "characteristic_roots",
            format!("polished roots leave residual {worst:e}"),
        ));
    }
    let croots = roots.iter().map(|r| r.value).collect();
    let product = ProductSolution::new(params, &energy, croots)?;
    let plus = BlochSolution::new(1, product.broots.clone(), params, &energy)?;
    let minus = BlochSolution::new(-1, product.broots.clone(), params, &energy)?;
    Ok(GeneralSolution {
        params: *params,
        energy,
        table,
        roots,
        product,
        plus,
        minus,
    })
}
