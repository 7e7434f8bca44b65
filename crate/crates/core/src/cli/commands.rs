use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::RunConfig;
use super::output::{Document, Table};
use crate::error::{Error, Result};
use crate::frobenius::{ansatz_product, potential, solve, GeneralSolution, LameParams};
use crate::spectral::{
    band_edges, classify_energy, ode_residual, BandStructure, EnergyClass, Grid, ResidualReport,
};
use crate::susy::{
    first_order_partner_nonperiodic, first_order_partner_periodic, second_order_partner_nonperiodic,
    second_order_partner_periodic, PartnerPotential, Periodicity, SeedSolution,
};

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn residual_json(r: &ResidualReport) -> Value {
    json!({ "max_relative": r.max_relative, "location": r.location, "warning": r.warning })
}

/// Largest `|r_i − r₀| / |r₀|` over the ratios `a_i / b_i`.
pub(crate) fn ratio_spread(pairs: impl IntoIterator<Item = (Complex64, Complex64)>) -> f64 {
    let ratios: Vec<Complex64> = pairs.into_iter().map(|(a, b)| a / b).collect();
    let Some(&r0) = ratios.first() else { return 0.0 };
    ratios.iter().map(|r| (r - r0).norm() / r0.norm()).fold(0.0, f64::max)
}

/// Frobenius product against the closed-form ansatz on `n` points of
/// `[a, b]`; `None` when no closed form exists for `(m, ℓ)`.
pub(crate) fn ansatz_spread(s: &GeneralSolution, (a, b): (f64, f64), n: usize) -> Result<Option<f64>> {
    let p = &s.params;
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let x = a + (b - a) * (i as f64 + 0.5) / n as f64;
        let closed = match ansatz_product(p.z_of_x(x), p, &s.energy) {
            Ok(v) => v,
            Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        pairs.push((s.product.eval_x(x)?, closed));
    }
    Ok(Some(ratio_spread(pairs)))
}

pub(crate) fn bloch_residual(s: &GeneralSolution, sign: i8, grid: &Grid) -> Result<ResidualReport> {
    let b = s.get(sign);
    let p = s.params;
    ode_residual(&|x| b.evaluate(x), &|x| potential(x, &p), s.energy.value(), grid)
}

pub fn cmd_solve(c: &RunConfig) -> Result<Document> {
    let p = c.params()?;
    let k = p.modulus().big_k();
    let window = c.window((0.0, 4.0 * k))?;
    let grid = Grid::new(window.0, window.1, c.samples)?;
    let s = solve(&p, c.energy)?;

    let mut t = Table::default();
    t.push("x", grid.iter().collect());
    for (sign, name) in [(1, "psi_plus"), (-1, "psi_minus")] {
        let vals = grid.iter().map(|x| s.get(sign).evaluate(x)).collect::<Result<Vec<_>>>()?;
        t.push(&format!("{name}_re"), vals.iter().map(|z| z.re).collect());
        t.push(&format!("{name}_im"), vals.iter().map(|z| z.im).collect());
    }

    let plus = bloch_residual(&s, 1, &grid)?;
    let minus = bloch_residual(&s, -1, &grid)?;
    let roots: Vec<Value> = s
        .roots
        .iter()
        .zip(&s.product.broots)
        .map(|(r, b)| {
            json!({
                "c": pair(r.value), "b": pair(*b),
                "multiplicity": r.multiplicity, "residual": r.residual,
            })
        })
        .collect();
    let ansatz = ansatz_spread(&s, window, 64)?;
    let report = json!({
        "solution": s.record(),
        "coefficients": s.table,
        "roots": roots,
        "quarter_period_K": k,
        "window": [window.0, window.1],
        "lame_reduction": p.ell() == 0,
        "bloch_factor": { "plus": pair(s.plus.bloch_factor()?), "minus": pair(s.minus.bloch_factor()?) },
        "wronskian": pair(s.wronskian(window.0)?),
        "residual": { "plus": residual_json(&plus), "minus": residual_json(&minus) },
        "ansatz_cross_check": ansatz.map(|spread| json!({
            "max_ratio_spread": spread, "tolerance": 1e-10, "pass": spread < 1e-10,
        })),
    });
    Ok(Document {
        command: "solve",
        report,
        table: Some(t),
    })
}

pub(crate) fn scan_bands(p: &LameParams, range: (f64, f64), tolerance: f64) -> Result<BandStructure> {
    Ok(band_edges(&|x| potential(x, p), range, p.period(), tolerance)?.0)
}

pub fn cmd_bands(c: &RunConfig) -> Result<Document> {
    let p = c.params()?;
    let range = (c.energy_range[0], c.energy_range[1]);
    let free = |_: f64| 0.0;
    let lame = |x: f64| potential(x, &p);
    let v: &dyn Fn(f64) -> f64 = if c.free_particle { &free } else { &lame };
    let (bands, scan) = band_edges(v, range, p.period(), c.edge_tolerance)?;
    let mut t = Table::default();
    t.push("E", scan.energies);
    t.push("D", scan.values);
    Ok(Document {
        command: "bands",
        report: json!({
            "band_structure": bands,
            "period": p.period(),
            "free_particle": c.free_particle,
        }),
        table: Some(t),
    })
}

fn seed(p: &LameParams, eps: f64, sign: i8, lambda: f64) -> Result<SeedSolution> {
    if lambda == 0.0 {
        SeedSolution::bloch(p, eps, sign)
    } else {
        SeedSolution::combination(p, eps, sign, lambda)
    }
}

/// The partner described by `c`, together with the band structure used to
/// check its preconditions.
pub fn build_partner(c: &RunConfig) -> Result<(PartnerPotential, BandStructure)> {
    let p = c.params()?;
    let eps: Vec<f64> = match c.order {
        1 => vec![c.eps],
        2 => vec![c.eps1, c.eps2],
        o => return Err(Error::domain(format!("order must be 1 or 2, got {o}"))),
    };
    if eps.iter().any(|e| !e.is_finite()) {
        return Err(Error::domain("factorization energies must be finite"));
    }
    let lo = eps.iter().fold(c.energy_range[0], |a, &e| a.min(e - 1.0));
    let hi = eps.iter().fold(c.energy_range[1], |a, &e| a.max(e + 2.0));
    let bands = scan_bands(&p, (lo, hi), c.edge_tolerance)?;
    // placement is checked before any seed is built, since a seed exactly
    // at a band edge is itself degenerate
    let classes = eps.iter().map(|&e| classify_energy(&bands, e)).collect::<Result<Vec<_>>>()?;
    let placed = match classes[..] {
        [EnergyClass::BelowSpectrum] => true,
        [EnergyClass::Gap(i), EnergyClass::Gap(j)] => i == j && c.eps1 != c.eps2,
        _ => false,
    };
    if !placed {
        return Err(Error::domain(format!(
            "factorization energies {eps:?} are misplaced ({classes:?}); order 1 needs eps below the \
             lowest edge {}, order 2 needs distinct eps1, eps2 inside one gap",
            bands.ground_energy().map_or("(none)".into(), |g| g.to_string())
        )));
    }
    let partner = if c.order == 1 {
        let s = seed(&p, c.eps, c.sign, c.lambda)?;
        if c.lambda == 0.0 {
            first_order_partner_periodic(s, &bands)?
        } else {
            first_order_partner_nonperiodic(s, &bands)?
        }
    } else {
        let s1 = seed(&p, c.eps1, c.sign1, c.lambda1)?;
        let s2 = seed(&p, c.eps2, c.sign2, c.lambda2)?;
        if c.lambda1 == 0.0 && c.lambda2 == 0.0 {
            second_order_partner_periodic(s1, s2, &bands)?
        } else {
            second_order_partner_nonperiodic(s1, s2, &bands)?
        }
    };
    Ok((partner, bands))
}

pub fn cmd_partner(c: &RunConfig) -> Result<Document> {
    let (q, bands) = build_partner(c)?;
    let p = *q.params();
    let k = p.modulus().big_k();
    let half = match q.periodicity() {
        Periodicity::Periodic => 2.0 * k,
        Periodicity::AsymptoticallyPeriodic => 12.0 * k,
    };
    let window = c.window((-half, half))?;
    let grid = Grid::new(window.0, window.1, c.samples)?;
    let xs: Vec<f64> = grid.iter().collect();
    let vt = xs.iter().map(|&x| q.value(x)).collect::<Result<Vec<_>>>()?;
    let mut darboux = 0.0f64;
    for (&x, &v) in xs.iter().zip(&vt) {
        darboux = darboux.max((q.darboux_value(x)? - v).abs());
    }
    let mut t = Table::default();
    t.push("V", xs.iter().map(|&x| potential(x, &p)).collect());
    t.push("Vtilde", vt);
    t.columns.insert(0, ("x".into(), xs));
    Ok(Document {
        command: "partner",
        report: json!({
            "partner": q.metadata(),
            "quarter_period_K": k,
            "window": [window.0, window.1],
            "ground_energy": bands.ground_energy(),
            "max_darboux_deviation": darboux,
        }),
        table: Some(t),
    })
}
