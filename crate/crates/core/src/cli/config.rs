use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::LameParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every knob of a run. Missing keys in a config file take the defaults;
/// command-line flags override both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub m: u32,
    pub ell: u32,
    pub ksq: f64,
    /// Energy for `solve`.
    #[serde(rename = "E")]
    pub energy: f64,
    /// First-order factorization energy.
    pub eps: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// Weight of `ψ^∓` in the seed; 0 means the pure Bloch seed `ψ^±`.
    pub lambda: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Sign of the base Bloch solution of each seed.
    pub sign: i8,
    pub sign1: i8,
    pub sign2: i8,
    pub order: u8,
    /// Sampling window; `null` picks the command default
    /// (`[0, 4K]` for solve, `[−2K, 2K]` periodic and `[−12K, 12K]`
    /// asymptotically periodic partners).
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub samples: usize,
    pub format: Format,
    /// Output directory; stdout when absent. Not echoed into outputs.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Energy interval scanned for band edges.
    #[serde(rename = "E_range")]
    pub energy_range: [f64; 2],
    pub edge_tolerance: f64,
    /// Replace the potential by `V = 0` in `bands`.
    pub free_particle: bool,
    /// Test hook for `verify`: perturb `a_i` before the recurrence check.
    pub corrupt_coefficient: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 3,
            ell: 2,
            ksq: 0.9,
            energy: 8.0,
            eps: 8.0,
            eps1: 10.0,
            eps2: 10.1,
            lambda: 0.0,
            lambda1: 0.0,
            lambda2: 0.0,
            sign: 1,
            sign1: 1,
            sign2: 1,
            order: 1,
            xmin: None,
            xmax: None,
            samples: 801,
            format: Format::Csv,
            out: None,
            energy_range: [0.0, 30.0],
            edge_tolerance: 5e-4,
            free_particle: false,
            corrupt_coefficient: None,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub ell: Option<u32>,
    #[arg(long, global = true)]
    pub ksq: Option<f64>,
    #[arg(long = "E", global = true, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign: Option<i8>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign1: Option<i8>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign2: Option<i8>,
    #[arg(long, global = true)]
    pub order: Option<u8>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory receiving `<command>.json` and, for csv, `<command>.csv`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with any subset of the configuration keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub show_config: bool,
    /// Energy interval for the band scan, as `LO,HI`.
    #[arg(long = "E-range", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub energy_range: Option<Vec<f64>>,
    /// Scan bands of `V = 0` instead of the configured potential.
    #[arg(long, global = true)]
    pub free_particle: bool,
    /// Test hook: perturb coefficient `a_i` before the recurrence check.
    #[arg(long, global = true)]
    pub corrupt_coefficient: Option<usize>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::domain(format!("invalid config {}: {e}", path.display())))
    }

    /// Defaults, then the config file named in `flags`, then the flags.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let mut c = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = flags.$field.clone() { c.$field = v; })*
            };
        }
        take!(m, ell, ksq, energy, eps, eps1, eps2, lambda, lambda1, lambda2, sign, sign1, sign2, order, samples, format);
        if flags.xmin.is_some() {
            c.xmin = flags.xmin;
        }
        if flags.xmax.is_some() {
            c.xmax = flags.xmax;
        }
        if flags.out.is_some() {
            c.out = flags.out.clone();
        }
        if let Some(r) = &flags.energy_range {
            let [lo, hi] = r[..] else {
                return Err(Error::domain(format!("--E-range takes LO,HI, got {r:?}")));
            };
            c.energy_range = [lo, hi];
        }
        if flags.free_particle {
            c.free_particle = true;
        }
        if flags.corrupt_coefficient.is_some() {
            c.corrupt_coefficient = flags.corrupt_coefficient;
        }
        Ok(c)
    }

    /// Checks that hold for every command.
    pub fn params(&self) -> Result<LameParams> {
        if self.samples < 2 {
            return Err(Error::domain("samples must be at least 2"));
        }
        for (name, s) in [("sign", self.sign), ("sign1", self.sign1), ("sign2", self.sign2)] {
            if s != 1 && s != -1 {
                return Err(Error::domain(format!("{name} must be +1 or -1, got {s}")));
            }
        }
        let [lo, hi] = self.energy_range;
        if !(lo < hi) {
            return Err(Error::domain(format!("E_range must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        if !(self.edge_tolerance > 0.0) {
            return Err(Error::domain("edge_tolerance must be positive"));
        }
        LameParams::new(self.m, self.ell, self.ksq)
    }

    /// Explicit window or `default`, checked for `xmin < xmax`.
    pub fn window(&self, default: (f64, f64)) -> Result<(f64, f64)> {
        let w = (self.xmin.unwrap_or(default.0), self.xmax.unwrap_or(default.1));
        if !(w.0 < w.1) || !w.0.is_finite() || !w.1.is_finite() {
            return Err(Error::domain(format!("need xmin < xmax, got [{}, {}]", w.0, w.1)));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_file_overrides_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"m": 2, "ell": 1, "E": 4.5}"#).unwrap();
        let flags = Flags {
            config: Some(path),
            energy: Some(5.0),
            ..Flags::default()
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!((c.m, c.ell, c.energy, c.ksq), (2, 1, 5.0, 0.9));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"mm": 2}"#).unwrap();
        assert!(matches!(RunConfig::from_file(&path), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_values_are_validation_errors() {
        let c = RunConfig {
            sign: 0,
            ..RunConfig::default()
        };
        assert!(c.params().unwrap_err().is_validation());
        let c = RunConfig {
            ell: 4,
            ..RunConfig::default()
        };
        assert!(c.params().unwrap_err().is_validation());
        assert!(RunConfig::default().window((1.0, 0.0)).is_err());
    }
}
