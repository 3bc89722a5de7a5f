//! `key = value` analysis configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; unknown
//! keys are rejected.

use serde::{Deserialize, Serialize};

use crate::court::CourtModel;
use crate::error::{Error, Result};
use crate::fractal::FitOptions;
use crate::ingest::DEFAULT_UNIT_SCALE;
use crate::stats::{ScanOptions, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub court: CourtModel,
    pub unit_scale: f64,
    /// Significance level for the bias and FGP tests.
    pub alpha: f64,
    pub scan: ScanOptions,
    pub density_bin_width_ft: f64,
    pub fit: FitOptions,
    pub trials: usize,
    pub seed: u64,
    /// Zone shots kept in the plotting sample.
    pub sample_points: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            court: CourtModel::default(),
            unit_scale: DEFAULT_UNIT_SCALE,
            alpha: DEFAULT_ALPHA,
            scan: ScanOptions::default(),
            density_bin_width_ft: 1.0,
            fit: FitOptions::default(),
            trials: 100,
            seed: 0,
            sample_points: 5_000,
        }
    }
}

fn parse_num<T: std::str::FromStr>(v: &str, line: usize, key: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config {
        line,
        msg: format!("bad value {v:?} for {key}"),
    })
}

impl AnalysisConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = AnalysisConfig::default();
        let mut corner = cfg.court.corner_dist_ft;
        let mut crest = cfg.court.crest_dist_ft;
        let mut half_width = cfg.court.court_half_width_ft;
        let mut baseline = cfg.court.baseline_y_ft;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected key=value, got {body:?}"),
            })?;
            let (key, v) = (key.trim(), value.trim());
            match key {
                "corner_dist_ft" => corner = parse_num(v, line, key)?,
                "crest_dist_ft" => crest = parse_num(v, line, key)?,
                "court_half_width_ft" => half_width = parse_num(v, line, key)?,
                "baseline_y_ft" => baseline = parse_num(v, line, key)?,
                "unit_scale" => cfg.unit_scale = parse_num(v, line, key)?,
                "alpha" => cfg.alpha = parse_num(v, line, key)?,
                "scan_alpha" => cfg.scan.alpha = parse_num(v, line, key)?,
                "bin_width_ft" => cfg.scan.bin_width_ft = parse_num(v, line, key)?,
                "scan_d_min_ft" => cfg.scan.d_min = parse_num(v, line, key)?,
                "scan_d_max_ft" => cfg.scan.d_max = parse_num(v, line, key)?,
                "min_bin_count" => cfg.scan.min_bin_count = parse_num(v, line, key)?,
                "bonferroni" => cfg.scan.bonferroni = parse_num(v, line, key)?,
                "density_bin_width_ft" => cfg.density_bin_width_ft = parse_num(v, line, key)?,
                "n_radii" => cfg.fit.n_radii = parse_num(v, line, key)?,
                "p_lo" => cfg.fit.p_lo = parse_num(v, line, key)?,
                "p_hi" => cfg.fit.p_hi = parse_num(v, line, key)?,
                "exact_cap" => cfg.fit.pairs.exact_cap = parse_num(v, line, key)?,
                "sample_pairs" => cfg.fit.pairs.sample_pairs = parse_num(v, line, key)?,
                "trials" => cfg.trials = parse_num(v, line, key)?,
                "seed" => cfg.seed = parse_num(v, line, key)?,
                "sample_points" => cfg.sample_points = parse_num(v, line, key)?,
                _ => {
                    return Err(Error::Config {
                        line,
                        msg: format!("unknown key {key:?}"),
                    })
                }
            }
        }
        cfg.court = CourtModel::new(corner, crest, half_width, baseline)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.unit_scale > 0.0 && self.unit_scale.is_finite()) {
            return bad(format!(
                "unit_scale must be positive, got {}",
                self.unit_scale
            ));
        }
        for (name, a) in [("alpha", self.alpha), ("scan_alpha", self.scan.alpha)] {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {a}"));
            }
        }
        if !(self.scan.bin_width_ft > 0.0 && self.density_bin_width_ft > 0.0) {
            return bad("bin widths must be positive".into());
        }
        if !(self.scan.d_min < self.scan.d_max) {
            return bad("scan_d_min_ft must be below scan_d_max_ft".into());
        }
        if self.fit.n_radii < 5 {
            return bad(format!(
                "n_radii must be at least 5, got {}",
                self.fit.n_radii
            ));
        }
        if !(0.0 <= self.fit.p_lo && self.fit.p_lo < self.fit.p_hi && self.fit.p_hi <= 100.0) {
            return bad(format!(
                "need 0 <= p_lo < p_hi <= 100, got {} and {}",
                self.fit.p_lo, self.fit.p_hi
            ));
        }
        if self.trials < 20 {
            return bad(format!("trials must be at least 20, got {}", self.trials));
        }
        Ok(())
    }
}
