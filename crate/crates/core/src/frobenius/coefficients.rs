use serde::{Deserialize, Serialize};

use super::{EnergySpec, LameParams};
use crate::error::{Error, Result};

/// Relative magnitude below which a pivot determinant counts as vanishing.
pub const EXCEPTIONAL_THRESHOLD: f64 = 1e-12;

/// The three functions in the recurrence
/// `a_{r+2} f₀(ρ+r+2) + a_{r+1} f₁(ρ+r+1) + a_r f₂(ρ+r) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientFunctions {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
}

pub fn coefficient_functions(
    rho: f64,
    params: &LameParams,
    energy: &EnergySpec,
) -> CoefficientFunctions {
    let fr = params.frame();
    let m = params.m() as f64;
    let l = params.ell() as f64;
    let s = rho - l;
    CoefficientFunctions {
        f0: fr.ebar3 * rho * (rho - 1.0 - 2.0 * l) * (2.0 * rho - 2.0 * l - 1.0),
        f1: 2.0 * s * (fr.e1 * (m * (m + 1.0) - 3.0 * s * s) - energy.etilde()),
        f2: fr.ebar2 * (rho - m - l) * (rho + m - l + 1.0) * (2.0 * rho + 1.0 - 2.0 * l),
    }
}

fn f_at(r: i64, params: &LameParams, energy: &EnergySpec) -> CoefficientFunctions {
    coefficient_functions(r as f64, params, energy)
}

/// `F_r` by `F_r = f₁(r-1) F_{r-1} - f₂(r-2) f₀(r-1) F_{r-2}`, `F₀ = 1`, `F₋₁ = 0`.
pub fn determinant_f(r: i64, params: &LameParams, energy: &EnergySpec) -> f64 {
    determinant_f_with_scale(r, params, energy).0
}

/// `F_r` together with the same recurrence run on absolute values, which
/// bounds the size of the terms that cancel into `F_r`.
pub(crate) fn determinant_f_with_scale(r: i64, params: &LameParams, energy: &EnergySpec) -> (f64, f64) {
    if r < 0 {
        return (0.0, 0.0);
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    let (mut prev_s, mut cur_s) = (0.0, 1.0);
    for j in 1..=r {
        let a = f_at(j - 1, params, energy).f1;
        let b = f_at(j - 2, params, energy).f2 * f_at(j - 1, params, energy).f0;
        let next = a * cur - b * prev;
        let next_s = a.abs() * cur_s + b.abs() * prev_s;
        prev = cur;
        cur = next;
        prev_s = cur_s;
        cur_s = next_s;
    }
    (cur, cur_s)
}

/// Leading principal `r×r` minor of the `n×n` matrix of `F_n`,
/// `n = 2ℓ + ν + 1`, via
/// `D_r = f₁(n-r) D_{r-1} - f₂(n-r) f₀(n-r+1) D_{r-2}`.
pub fn minor_d(r: u32, params: &LameParams, energy: &EnergySpec) -> Result<f64> {
    minor_d_with_scale(r, params, energy).map(|(d, _)| d)
}

pub(crate) fn minor_d_with_scale(r: u32, params: &LameParams, energy: &EnergySpec) -> Result<(f64, f64)> {
    let nu = params.nu();
    if nu == 0 {
        return Err(Error::domain("D_r is only defined for m > ell"));
    }
    if r > nu {
        return Err(Error::domain(format!("D_{r} requested but nu = {nu}")));
    }
    let n = params.degree() as i64 + 1;
    let (mut prev, mut cur) = (0.0, 1.0);
    let (mut prev_s, mut cur_s) = (0.0, 1.0);
    for j in 1..=r as i64 {
        let a = f_at(n - j, params, energy).f1;
        let b = f_at(n - j, params, energy).f2 * f_at(n - j + 1, params, energy).f0;
        let next = a * cur - b * prev;
        let next_s = a.abs() * cur_s + b.abs() * prev_s;
        prev = cur;
        cur = next;
        prev_s = cur_s;
        cur_s = next_s;
    }
    Ok((cur, cur_s))
}

/// Dense determinant by Gaussian elimination with partial pivoting.
pub(crate) fn dense_det(mut mat: Vec<Vec<f64>>) -> f64 {
    let n = mat.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| mat[i][c].abs().partial_cmp(&mat[j][c].abs()).unwrap())
            .unwrap();
        if mat[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            mat.swap(p, c);
            det = -det;
        }
        det *= mat[c][c];
        for r in c + 1..n {
            let f = mat[r][c] / mat[c][c];
            for k in c..n {
                mat[r][k] -= f * mat[c][k];
            }
        }
    }
    det
}

/// The tridiagonal matrix whose determinant is `F_n`; its leading
/// principal minors for `n = 2ℓ + ν + 1` are the `D_r`.
pub(crate) fn f_matrix(n: usize, p: &LameParams, e: &EnergySpec) -> Vec<Vec<f64>> {
    let mut mat = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d = n as i64 - 1 - i as i64;
        mat[i][i] = f_at(d, p, e).f1;
        if i + 1 < n {
            mat[i][i + 1] = f_at(d - 1, p, e).f2;
            mat[i + 1][i] = f_at(d, p, e).f0;
        }
    }
    mat
}

/// Coefficients `a₀ … a_{m+ℓ}` of the terminating `ρ = 0` series, `a₀ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub m: u32,
    pub ell: u32,
    pub energy: f64,
    pub a: Vec<f64>,
    pub nu: u32,
    /// Whether `a_{N+1}`, formally continued from the recurrence, vanishes.
    pub terminates: bool,
}

impl CoefficientTable {
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Scaled residuals of the three-term recurrence for every `r` whose
    /// three terms are in range, followed by the termination residual
    /// `|a_N f₁(N) + a_{N-1} f₂(N-1)|`.
    pub fn recurrence_residuals(&self, params: &LameParams, energy: &EnergySpec) -> Vec<f64> {
        let n = self.degree() as i64;
        let a = |i: i64| -> f64 {
            if i < 0 || i > n {
                0.0
            } else {
                self.a[i as usize]
            }
        };
        // equation j: a_{j+1} f₀(j+1) + a_j f₁(j) + a_{j-1} f₂(j-1) = 0, j = 0..=N
        (0..=n)
            .map(|j| {
                let t0 = a(j + 1) * f_at(j + 1, params, energy).f0;
                let t1 = a(j) * f_at(j, params, energy).f1;
                let t2 = a(j - 1) * f_at(j - 1, params, energy).f2;
                let scale = t0.abs().max(t1.abs()).max(t2.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (t0 + t1 + t2).abs() / scale
                }
            })
            .collect()
    }

    /// `Σ a_r yʳ` coefficients, lowest order first.
    pub fn polynomial(&self) -> &[f64] {
        &self.a
    }
}

/// Build the coefficient table for `(m, ℓ, E)`.
pub fn coefficients(params: &LameParams, energy: &EnergySpec) -> Result<CoefficientTable> {
    let n = params.degree();
    let two_l = 2 * params.ell() as usize;
    let nu = params.nu();
    let mut a = vec![0.0; n + 1];
    a[0] = 1.0;

    let mut f0_product = 1.0;
    for r in 1..=two_l {
        f0_product *= f_at(r as i64, params, energy).f0;
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        a[r] = sign * determinant_f(r as i64, params, energy) / f0_product;
    }

    if nu > 0 {
        let (d_nu, d_scale) = minor_d_with_scale(nu, params, energy)?;
        if d_nu.abs() <= EXCEPTIONAL_THRESHOLD * d_scale {
            return Err(Error::ExceptionalEnergy {
                energy: energy.value(),
                reason: format!("pivot minor D_{nu} vanishes"),
            });
        }
        let mut f2_product = 1.0;
        for r in 1..=nu as usize {
            f2_product *= f_at((two_l + r - 1) as i64, params, energy).f2;
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            let d = minor_d(nu - r as u32, params, energy)?;
            a[two_l + r] = sign * d * f2_product / d_nu * a[two_l];
        }
    }

    // a_{N+1} from the recurrence at j = N must vanish; f₀(N+1) ≠ 0 unless
    // N + 1 = 2ℓ + 1, i.e. m = ℓ, where the condition is F_{2ℓ+1} = 0.
    let fnn = f_at(n as i64, params, energy);
    let fnm = f_at(n as i64 - 1, params, energy);
    let t1 = a[n] * fnn.f1;
    let t2 = a[n - 1] * fnm.f2;
    let scale = t1.abs().max(t2.abs()).max(f64::MIN_POSITIVE);
    let terminates = (t1 + t2).abs() <= 1e-9 * scale;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::ExceptionalEnergy {
            energy: energy.value(),
            reason: "non-finite series coefficient".into(),
        });
    }

    Ok(CoefficientTable {
        m: params.m(),
        ell: params.ell(),
        energy: energy.value(),
        a,
        nu,
        terminates,
    })
}
