use serde::{Deserialize, Serialize};

use super::SampledPotential;
use crate::error::{Error, Result};

/// RK4 steps per period for the discriminant (`h = K/2000` when the period is `2K`).
pub const STEPS_PER_PERIOD: usize = 4000;

/// Transfer matrix over one period from the canonical pair
/// `y₁(0) = 1, y₁'(0) = 0` and `y₂(0) = 0, y₂'(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub y1: f64,
    pub dy1: f64,
    pub y2: f64,
    pub dy2: f64,
}

impl Monodromy {
    pub fn at(sampled: &SampledPotential, energy: f64) -> Self {
        let (y1, dy1) = sampled.propagate(energy, 1.0, 0.0);
        let (y2, dy2) = sampled.propagate(energy, 0.0, 1.0);
        Self { y1, dy1, y2, dy2 }
    }

    /// `D(E) = y₁(T) + y₂'(T)`.
    pub fn trace(&self) -> f64 {
        self.y1 + self.dy2
    }

    /// `y₁y₂' − y₁'y₂`, equal to 1 for an exact propagation.
    pub fn determinant(&self) -> f64 {
        self.y1 * self.dy2 - self.dy1 * self.y2
    }
}

/// Hill discriminant of the `period`-periodic potential `v` at `energy`.
pub fn hill_discriminant(v: &dyn Fn(f64) -> f64, energy: f64, period: f64) -> Result<f64> {
    let sp = SampledPotential::new(v, period, STEPS_PER_PERIOD)?;
    let d = Monodromy::at(&sp, energy).trace();
    if !d.is_finite() {
        return Err(Error::numeric("hill_discriminant", format!("non-finite trace at E = {energy}")));
    }
    Ok(d)
}

/// Samples `D(E_i)` on a uniform energy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantScan {
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
}

/// Allowed bands `|D| ≤ 2` and the gaps between them inside the scanned range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub edges: Vec<f64>,
    pub bands: Vec<[f64; 2]>,
    pub gaps: Vec<[f64; 2]>,
    pub range: [f64; 2],
    pub tolerance: f64,
}

/// Where an energy sits relative to a [`BandStructure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyClass {
    BelowSpectrum,
    Band,
    /// Finite gap, numbered from 0 upward.
    Gap(usize),
    Edge,
}

/// Energy resolution of the primary scan.
const SCAN_STEP: f64 = 5e-3;
/// Bisection stops at this width.
const BISECT_WIDTH: f64 = 1e-11;
/// Gaps narrower than this are treated as closed (tangential `|D| = 2`).
const CLOSED_GAP: f64 = 1e-5;

struct Scanner {
    sp: SampledPotential,
}

impl Scanner {
    fn d(&self, e: f64) -> f64 {
        Monodromy::at(&self.sp, e).trace()
    }

    /// Root of `D − target` on `[a, b]` where it changes sign.
    fn bisect(&self, mut a: f64, mut b: f64, target: f64) -> f64 {
        let mut fa = self.d(a) - target;
        while b - a > BISECT_WIDTH {
            let mid = 0.5 * (a + b);
            let fm = self.d(mid) - target;
            if (fm > 0.0) == (fa > 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    /// Golden-section search for the extremum of `s·D` on `[a, b]`.
    fn extremum(&self, mut a: f64, mut b: f64, s: f64) -> (f64, f64) {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (s * self.d(c), s * self.d(d));
        while b - a > 1e-10 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = s * self.d(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = s * self.d(d);
            }
        }
        let x = 0.5 * (a + b);
        (x, s * self.d(x))
    }
}

/// Scan `D(E)` over `range` and bisect every crossing of `D = ±2`. Thin gaps
/// between scan samples are caught by refining local extrema of `|D|` that
/// come close to 2. `tolerance` is the edge tolerance used by
/// [`classify_energy`]; it does not limit the bisection.
pub fn band_edges(
    v: &dyn Fn(f64) -> f64,
    range: (f64, f64),
    period: f64,
    tolerance: f64,
) -> Result<(BandStructure, DiscriminantScan)> {
    let (lo, hi) = range;
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!("invalid energy range [{lo}, {hi}]")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain("edge tolerance must be positive"));
    }
    let scanner = Scanner {
        sp: SampledPotential::new(v, period, STEPS_PER_PERIOD)?,
    };
    let n = ((hi - lo) / SCAN_STEP).ceil().max(2.0) as usize;
    let energies: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let values: Vec<f64> = energies.iter().map(|&e| scanner.d(e)).collect();
    if let Some(i) = values.iter().position(|d| !d.is_finite()) {
        return Err(Error::numeric("band_edges", format!("non-finite discriminant at E = {}", energies[i])));
    }

    let mut edges = Vec::new();
    for i in 0..n {
        let (a, b) = (energies[i], energies[i + 1]);
        let (da, db) = (values[i], values[i + 1]);
        let mut found = Vec::new();
        for target in [2.0, -2.0] {
            if (da > target) != (db > target) {
                found.push(scanner.bisect(a, b, target));
            }
        }
        found.sort_by(|x, y| x.partial_cmp(y).unwrap());
        edges.extend(found);
    }
    // thin gaps hiding between samples: |D| has a local maximum just under 2
    for i in 1..n {
        let d = values[i];
        let (dl, dr) = (values[i - 1], values[i + 1]);
        for s in [1.0, -1.0] {
            let (c, l, r) = (s * d, s * dl, s * dr);
            if c >= l && c >= r && c > 1.5 && c <= 2.0 && l <= 2.0 && r <= 2.0 {
                let (x, peak) = scanner.extremum(energies[i - 1], energies[i + 1], s);
                if peak > 2.0 {
                    let target = 2.0 * s;
                    edges.push(scanner.bisect(energies[i - 1], x, target));
                    edges.push(scanner.bisect(x, energies[i + 1], target));
                }
            }
        }
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 10.0 * BISECT_WIDTH);

    for &e in &edges {
        let d = scanner.d(e);
        if (d.abs() - 2.0).abs() > 1e-6 {
            return Err(Error::numeric(
                "band_edges",
                format!("edge at E = {e} has |D| = {} after refinement", d.abs()),
            ));
        }
    }

    // assemble allowed intervals from the sign of |D| − 2 between edges
    let allowed = |a: f64, b: f64| scanner.d(0.5 * (a + b)).abs() <= 2.0;
    let mut cuts = vec![lo];
    cuts.extend(edges.iter().copied());
    cuts.push(hi);
    let mut bands: Vec<[f64; 2]> = Vec::new();
    for w in cuts.windows(2) {
        if w[1] > w[0] && allowed(w[0], w[1]) {
            match bands.last_mut() {
                Some(last) if w[0] - last[1] < CLOSED_GAP => last[1] = w[1],
                _ => bands.push([w[0], w[1]]),
            }
        }
    }
    let mut kept = Vec::new();
    for b in &bands {
        for e in [b[0], b[1]] {
            if edges.iter().any(|&x| (x - e).abs() < 10.0 * BISECT_WIDTH) {
                kept.push(e);
            }
        }
    }
    let gaps = bands.windows(2).map(|w| [w[0][1], w[1][0]]).collect();
    Ok((
        BandStructure {
            edges: kept,
            bands,
            gaps,
            range: [lo, hi],
            tolerance,
        },
        DiscriminantScan { energies, values },
    ))
}

/// Place `energy` relative to the bands; edges win within the tolerance.
pub fn classify_energy(bands: &BandStructure, energy: f64) -> Result<EnergyClass> {
    let [lo, hi] = bands.range;
    if !(energy >= lo && energy <= hi) {
        return Err(Error::Range { energy, lo, hi });
    }
    if bands.edges.iter().any(|&e| (energy - e).abs() <= bands.tolerance) {
        return Ok(EnergyClass::Edge);
    }
    match bands.bands.first() {
        Some(b) if energy < b[0] => return Ok(EnergyClass::BelowSpectrum),
        None => return Ok(EnergyClass::BelowSpectrum),
        _ => {}
    }
    if bands.bands.iter().any(|b| energy >= b[0] && energy <= b[1]) {
        return Ok(EnergyClass::Band);
    }
    let i = bands
        .gaps
        .iter()
        .position(|g| energy > g[0] && energy < g[1])
        .ok_or_else(|| Error::numeric("classify_energy", format!("E = {energy} not placed")))?;
    Ok(EnergyClass::Gap(i))
}

impl BandStructure {
    /// Lowest edge `E₀`.
    pub fn ground_energy(&self) -> Option<f64> {
        self.bands.first().map(|b| b[0]).filter(|&e| e > self.range[0])
    }
}
