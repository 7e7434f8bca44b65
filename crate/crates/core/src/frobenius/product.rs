use num_complex::Complex64;

use super::bloch::BlochSolution;
use super::{CoefficientTable, EnergySpec, LameParams};
use crate::elliptic::ComplexPoint;
use crate::error::{Error, Result};
use crate::poly::{polynomial_roots, Root};

/// A zero `c_r` of `Σ a_r [(e₁ - t)/ē₂]ʳ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoot {
    pub value: ComplexPoint,
    pub multiplicity: usize,
    /// Scaled residual `|p| / Σ|a_r||y|ʳ` at the polished root.
    pub residual: f64,
}

/// The `m + ℓ` values `c_r = ℘(b_r)`.
pub fn characteristic_roots(
    table: &CoefficientTable,
    params: &LameParams,
) -> Result<Vec<CharacteristicRoot>> {
    let f = params.frame();
    let roots: Vec<Root> = polynomial_roots(table.polynomial())?;
    if roots.len() != table.degree() {
        return Err(Error::ExceptionalEnergy {
            energy: table.energy,
            reason: format!(
                "leading coefficient vanishes: {} roots for degree {}",
                roots.len(),
                table.degree()
            ),
        });
    }
    Ok(roots
        .into_iter()
        .map(|r| CharacteristicRoot {
            value: Complex64::new(f.e1, 0.0) - r.value * f.ebar2,
            multiplicity: r.multiplicity,
            residual: r.residual,
        })
        .collect())
}

/// Value and first three `z`-derivatives of `G(t) = Π(t - c_r)/(t - e₁)^ℓ`.
fn g_log_sums(t: Complex64, croots: &[Complex64], ell: u32, e1: f64) -> [Complex64; 3] {
    let mut s = [Complex64::new(0.0, 0.0); 3];
    for &c in croots {
        let inv = 1.0 / (t - c);
        s[0] += inv;
        s[1] += inv * inv;
        s[2] += inv * inv * inv;
    }
    let inv = 1.0 / (t - e1);
    let l = ell as f64;
    s[0] -= inv * l;
    s[1] -= inv * inv * l;
    s[2] -= inv * inv * inv * l;
    s
}

/// Product solution `Ψ(z) = Π[℘(z) - ℘(b_r)] / [℘(z) - e₁]^ℓ` with the
/// branch-selected `b_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSolution {
    pub params: LameParams,
    pub energy: EnergySpec,
    pub croots: Vec<ComplexPoint>,
    pub broots: Vec<ComplexPoint>,
    /// Common value of `dΨ/dz` at every `b_r`; `Ψ/w` is the product of the
    /// pair with unit Wronskian.
    pub w: ComplexPoint,
}

impl ProductSolution {
    pub fn new(params: &LameParams, energy: &EnergySpec, croots: Vec<ComplexPoint>) -> Result<Self> {
        let (broots, w) = select_branches(&croots, params, energy)?;
        Ok(Self {
            params: *params,
            energy: *energy,
            croots,
            broots,
            w,
        })
    }

    /// `Ψ(z)` in the un-normalized form with unit leading coefficient.
    pub fn eval_z(&self, z: Complex64) -> Result<Complex64> {
        let f = self.params.frame();
        let wp = f.wp(z)?;
        let num: Complex64 = self.croots.iter().map(|&c| wp - c).product();
        let den = (wp - f.e1).powu(self.params.ell());
        Ok(num / den)
    }

    /// `Ψ` along the real line through `z = x - iK'`.
    pub fn eval_x(&self, x: f64) -> Result<Complex64> {
        self.eval_z(self.params.z_of_x(x))
    }

    /// `[Ψ, Ψ', Ψ'', Ψ''']` with respect to `z`.
    pub fn derivatives_z(&self, z: Complex64) -> Result<[Complex64; 4]> {
        let f = self.params.frame();
        let wpv = f.wp_all(z)?;
        let g = self.eval_z(z)?;
        let [s1, s2, s3] = g_log_sums(wpv.wp, &self.croots, self.params.ell(), f.e1);
        let g1 = g * s1;
        let g2 = g * (s1 * s1 - s2);
        let g3 = g * (s1 * s1 * s1 - s1 * s2 * 3.0 + s3 * 2.0);
        let (p1, p2) = (wpv.dwp, wpv.ddwp);
        let p3 = wpv.wp * wpv.dwp * 12.0;
        Ok([
            g,
            g1 * p1,
            g2 * p1 * p1 + g1 * p2,
            g3 * p1 * p1 * p1 + g2 * p1 * p2 * 3.0 + g1 * p3,
        ])
    }

    /// Scaled residual of the third-order equation satisfied by the product
    /// `ψ⁺ψ⁻` of two solutions of the Weierstrass-form equation.
    pub fn product_equation_residual(&self, z: Complex64) -> Result<f64> {
        let d = self.derivatives_z(z)?;
        product_equation_residual_from(&self.params, &self.energy, z, d)
    }
}

/// Residual of
/// `Ψ''' - 4[m(m+1)℘ + ℓ(ℓ+1)ē₂ē₃/(℘-e₁) - Ẽ]Ψ' - 2{m(m+1) - ℓ(ℓ+1)ē₂ē₃/(℘-e₁)²}℘'Ψ`
/// divided by the largest of its three terms.
pub fn product_equation_residual_from(
    params: &LameParams,
    energy: &EnergySpec,
    z: Complex64,
    d: [Complex64; 4],
) -> Result<f64> {
    let f = params.frame();
    let wpv = f.wp_all(z)?;
    let q = f.ebar2 * f.ebar3 * params.ll1();
    let s = wpv.wp - f.e1;
    let u = wpv.wp * params.mm1() + q / s - energy.etilde();
    let du = (Complex64::new(params.mm1(), 0.0) - q / (s * s)) * wpv.dwp;
    let t1 = d[3];
    let t2 = u * d[1] * 4.0;
    let t3 = du * d[0] * 2.0;
    let scale = t1.norm().max(t2.norm()).max(t3.norm());
    Ok(if scale == 0.0 {
        0.0
    } else {
        (t1 - t2 - t3).norm() / scale
    })
}

/// Pick one preimage `b_r` of each `c_r` so that `dΨ/dz(b_r)` takes one common
/// value `w` with `Re w > 0`. Falls back to an exhaustive search over sign
/// patterns scored by the Schrödinger residual of the resulting `ψ⁺`.
pub fn select_branches(
    croots: &[ComplexPoint],
    params: &LameParams,
    energy: &EnergySpec,
) -> Result<(Vec<ComplexPoint>, ComplexPoint)> {
    let f = params.frame();
    let n = croots.len();
    for i in 0..n {
        for j in i + 1..n {
            if (croots[i] - croots[j]).norm() < 1e-7 * (1.0 + croots[i].norm()) {
                return Err(Error::ExceptionalEnergy {
                    energy: energy.value(),
                    reason: "repeated root of the characteristic polynomial (band edge)".into(),
                });
            }
        }
    }

    let mut candidates: Vec<Vec<ComplexPoint>> = Vec::with_capacity(n);
    let mut slopes: Vec<Vec<ComplexPoint>> = Vec::with_capacity(n);
    for (r, &c) in croots.iter().enumerate() {
        let bs = f.wp_inverse(c)?;
        let gprime: Complex64 = croots
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != r)
            .map(|(_, &cs)| c - cs)
            .product::<Complex64>()
            / (c - f.e1).powu(params.ell());
        let mut sl = Vec::with_capacity(bs.len());
        for &b in &bs {
            sl.push(f.wp_prime(b)? * gprime);
        }
        candidates.push(bs);
        slopes.push(sl);
    }

    let reference = slopes
        .iter()
        .zip(&candidates)
        .filter(|(_, c)| c.len() == 2)
        .map(|(s, _)| s[0])
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .ok_or_else(|| Error::ExceptionalEnergy {
            energy: energy.value(),
            reason: "every characteristic root sits at a half-period".into(),
        })?;
    let w = if reference.re > 0.0 || (reference.re == 0.0 && reference.im > 0.0) {
        reference
    } else {
        -reference
    };
    let root_scale: f64 = slopes
        .iter()
        .flat_map(|s| s.iter())
        .map(|s| s.norm())
        .fold(0.0, f64::max);
    if w.norm() <= 1e-12 * root_scale.max(1.0) {
        return Err(Error::ExceptionalEnergy {
            energy: energy.value(),
            reason: "Wronskian of the Bloch pair vanishes (band edge)".into(),
        });
    }

    let mut chosen = Vec::with_capacity(n);
    let mut consistent = true;
    for r in 0..n {
        if candidates[r].len() == 1 {
            chosen.push(candidates[r][0]);
            continue;
        }
        let best = (0..2)
            .min_by(|&i, &j| {
                let di = (slopes[r][i] - w).norm();
                let dj = (slopes[r][j] - w).norm();
                di.partial_cmp(&dj).unwrap()
            })
            .unwrap();
        if (slopes[r][best] - w).norm() > 1e-6 * w.norm() {
            consistent = false;
        }
        chosen.push(candidates[r][best]);
    }
    if consistent {
        return Ok((chosen, w));
    }

    // Fallback: sign pattern with the smallest Schrödinger residual.
    let free: Vec<usize> = (0..n).filter(|&r| candidates[r].len() == 2).collect();
    let mut best: Option<(f64, Vec<ComplexPoint>)> = None;
    for mask in 0u32..(1u32 << free.len()) {
        let mut bs: Vec<ComplexPoint> = candidates.iter().map(|c| c[0]).collect();
        for (bit, &r) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                bs[r] = candidates[r][1];
            }
        }
        let sol = match BlochSolution::new(1, bs.clone(), params, energy) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if let Ok(res) = sol.analytic_residual(7) {
            if best.as_ref().is_none_or(|(r, _)| res < *r) {
                best = Some((res, bs));
            }
        }
    }
    match best {
        Some((res, bs)) if res < 1e-8 => Ok((bs, w)),
        Some((res, _)) => Err(Error::BranchSelection(format!(
            "no consistent choice of b_r: slopes disagree and best residual is {res:e}"
        ))),
        None => Err(Error::BranchSelection("no candidate set could be evaluated".into())),
    }
}
