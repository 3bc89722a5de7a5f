//! Proportion tests, the FGP discontinuity scan and distance histograms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::court::{classify_shot, ZoneLabel, ZoneSpec};
use crate::error::{Error, Result};
use crate::ingest::ShotRecord;

/// Two-sided 97.5% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_SCAN_ALPHA: f64 = 0.1;
pub const DEFAULT_MIN_BIN_COUNT: u64 = 50;
pub const MIN_BIAS_ATTEMPTS: u64 = 30;

// relative slack when comparing point probabilities in the exact test
const PMF_REL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneCounts {
    pub label: ZoneLabel,
    pub attempts: u64,
    pub made: u64,
}

impl ZoneCounts {
    pub fn new(label: ZoneLabel, attempts: u64, made: u64) -> Result<Self> {
        if made > attempts {
            return Err(Error::InvalidParameter(format!(
                "made ({made}) exceeds attempts ({attempts})"
            )));
        }
        Ok(ZoneCounts {
            label,
            attempts,
            made,
        })
    }

    pub fn empty(label: ZoneLabel) -> Self {
        ZoneCounts {
            label,
            attempts: 0,
            made: 0,
        }
    }

    pub fn fgp(&self) -> Option<f64> {
        (self.attempts > 0).then(|| self.made as f64 / self.attempts as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionTestResult {
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub baseline: f64,
    pub p_value: f64,
    pub n: u64,
    pub alpha: f64,
    pub significant: bool,
}

impl ProportionTestResult {
    pub fn gap(&self) -> f64 {
        self.p_hat - self.baseline
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoProportionResult {
    pub p1: f64,
    pub p2: f64,
    pub diff: f64,
    pub z: f64,
    pub p_value: f64,
    pub significant_at: f64,
    pub significant: bool,
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn ln_binom_pmf(k: u64, n: u64, ln_p: f64, ln_q: f64, ln_choose_base: f64) -> f64 {
    let (kf, nf) = (k as f64, n as f64);
    let ln_choose = ln_choose_base - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0);
    // 0 * ln(0) is 0 here
    let a = if k == 0 { 0.0 } else { kf * ln_p };
    let b = if k == n { 0.0 } else { (nf - kf) * ln_q };
    ln_choose + a + b
}

/// Two-sided exact binomial p-value: total probability of outcomes no more
/// likely than the observed one.
pub fn binomial_two_sided_p(k: u64, n: u64, p: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    let base = ln_gamma(n as f64 + 1.0);
    let lpmf = |i| ln_binom_pmf(i, n, ln_p, ln_q, base);
    let threshold = lpmf(k) + PMF_REL_TOL.ln_1p();

    let included: Vec<f64> = (0..=n).map(lpmf).filter(|&l| l <= threshold).collect();
    let max = included.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = included.iter().map(|l| (l - max).exp()).sum();
    (max + sum.ln()).exp().min(1.0)
}

/// Tests whether the share of attempts in the outer zone departs from the
/// area baseline.
pub fn outer_fraction_test(
    counts_in: &ZoneCounts,
    counts_out: &ZoneCounts,
    baseline: f64,
    alpha: f64,
) -> Result<ProportionTestResult> {
    if !(baseline > 0.0 && baseline < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "baseline must lie in (0, 1), got {baseline}"
        )));
    }
    let n = counts_in.attempts + counts_out.attempts;
    if n == 0 {
        return Err(Error::ZeroAttempts);
    }
    if n < MIN_BIAS_ATTEMPTS {
        return Err(Error::TooFewAttempts {
            need: MIN_BIAS_ATTEMPTS,
            got: n,
        });
    }
    let k = counts_out.attempts;
    let p_hat = k as f64 / n as f64;
    let (ci_lo, ci_hi) = wilson_interval(k, n, Z_95);
    let p_value = binomial_two_sided_p(k, n, baseline);
    Ok(ProportionTestResult {
        p_hat,
        ci_lo: ci_lo.min(p_hat),
        ci_hi: ci_hi.max(p_hat),
        baseline,
        p_value,
        n,
        alpha,
        significant: p_value < alpha,
    })
}

/// Two-sided p-value of a pooled two-proportion z-test.
pub fn two_proportion_p(made_a: u64, n_a: u64, made_b: u64, n_b: u64) -> (f64, f64) {
    let (na, nb) = (n_a as f64, n_b as f64);
    let (pa, pb) = (made_a as f64 / na, made_b as f64 / nb);
    let pooled = (made_a + made_b) as f64 / (na + nb);
    let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
    if se == 0.0 {
        // both sides all-made or all-missed
        return (0.0, 1.0);
    }
    let z = (pa - pb) / se;
    (z, erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0))
}

pub fn fgp_equality_test(
    counts_a: &ZoneCounts,
    counts_b: &ZoneCounts,
    alpha: f64,
) -> Result<TwoProportionResult> {
    if counts_a.attempts == 0 || counts_b.attempts == 0 {
        return Err(Error::ZeroAttempts);
    }
    let p1 = counts_a.made as f64 / counts_a.attempts as f64;
    let p2 = counts_b.made as f64 / counts_b.attempts as f64;
    let (z, p_value) = two_proportion_p(
        counts_a.made,
        counts_a.attempts,
        counts_b.made,
        counts_b.attempts,
    );
    Ok(TwoProportionResult {
        p1,
        p2,
        diff: p1 - p2,
        z,
        p_value,
        significant_at: alpha,
        significant: p_value < alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub bin_width_ft: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub alpha: f64,
    /// Bins with fewer attempts never take part in a flag.
    pub min_bin_count: u64,
    pub bonferroni: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            bin_width_ft: 1.0,
            d_min: 0.0,
            d_max: 40.0,
            alpha: DEFAULT_SCAN_ALPHA,
            min_bin_count: DEFAULT_MIN_BIN_COUNT,
            bonferroni: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discontinuity {
    /// Bin edge between the two compared bins.
    pub distance_ft: f64,
    /// FGP of the far bin minus FGP of the near bin.
    pub delta_fgp: f64,
    /// The (possibly corrected) p-value that triggered the flag.
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscontinuityScan {
    pub bin_edges_ft: Vec<f64>,
    pub fgp_per_bin: Vec<Option<f64>>,
    pub n_per_bin: Vec<u64>,
    pub made_per_bin: Vec<u64>,
    /// Raw p-value per adjacent bin pair; `None` when either bin is empty.
    pub adjacent_p_values: Vec<Option<f64>>,
    /// Comparisons eligible for flagging (both bins at or above the floor).
    pub n_eligible: usize,
    pub flagged: Vec<Discontinuity>,
    pub options: ScanOptions,
}

/// FGP per distance bin and adjacent-bin two-proportion tests.
pub fn discontinuity_scan(shots: &[ShotRecord], opts: &ScanOptions) -> Result<DiscontinuityScan> {
    let w = opts.bin_width_ft;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {w}"
        )));
    }
    if !(opts.d_min < opts.d_max) {
        return Err(Error::InvalidParameter(format!(
            "need d_min < d_max, got {} and {}",
            opts.d_min, opts.d_max
        )));
    }
    let n_bins = ((opts.d_max - opts.d_min) / w).ceil() as usize;
    let bin_edges_ft: Vec<f64> = (0..=n_bins).map(|i| opts.d_min + i as f64 * w).collect();
    let mut n_per_bin = vec![0u64; n_bins];
    let mut made_per_bin = vec![0u64; n_bins];
    let mut any = false;
    for s in shots {
        let d = s.shot_distance_ft;
        if d < opts.d_min || d >= opts.d_max {
            continue;
        }
        let b = (((d - opts.d_min) / w).floor() as usize).min(n_bins - 1);
        n_per_bin[b] += 1;
        made_per_bin[b] += s.made as u64;
        any = true;
    }
    if !any {
        return Err(Error::EmptyRange {
            lo: opts.d_min,
            hi: opts.d_max,
        });
    }

    let fgp_per_bin: Vec<Option<f64>> = n_per_bin
        .iter()
        .zip(&made_per_bin)
        .map(|(&n, &m)| (n > 0).then(|| m as f64 / n as f64))
        .collect();

    let adjacent_p_values: Vec<Option<f64>> = (0..n_bins.saturating_sub(1))
        .map(|i| {
            (n_per_bin[i] > 0 && n_per_bin[i + 1] > 0).then(|| {
                two_proportion_p(
                    made_per_bin[i],
                    n_per_bin[i],
                    made_per_bin[i + 1],
                    n_per_bin[i + 1],
                )
                .1
            })
        })
        .collect();

    let eligible: Vec<usize> = (0..adjacent_p_values.len())
        .filter(|&i| n_per_bin[i] >= opts.min_bin_count && n_per_bin[i + 1] >= opts.min_bin_count)
        .collect();
    let m = eligible.len().max(1) as f64;

    let flagged = eligible
        .iter()
        .filter_map(|&i| {
            let raw = adjacent_p_values[i]?;
            let p = if opts.bonferroni {
                (raw * m).min(1.0)
            } else {
                raw
            };
            let delta_fgp = fgp_per_bin[i + 1]? - fgp_per_bin[i]?;
            (p < opts.alpha).then_some(Discontinuity {
                distance_ft: bin_edges_ft[i + 1],
                delta_fgp,
                p_value: p,
            })
        })
        .collect();

    Ok(DiscontinuityScan {
        bin_edges_ft,
        fgp_per_bin,
        n_per_bin,
        made_per_bin,
        adjacent_p_values,
        n_eligible: eligible.len(),
        flagged,
        options: *opts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Normalized histogram of shot distance with bins aligned to multiples of
/// the width.
pub fn distance_density(shots: &[ShotRecord], bin_width_ft: f64) -> Result<Histogram> {
    if shots.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(bin_width_ft > 0.0 && bin_width_ft.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {bin_width_ft}"
        )));
    }
    let idx = |d: f64| (d / bin_width_ft).floor() as i64;
    let lo = shots.iter().map(|s| idx(s.shot_distance_ft)).min().unwrap();
    let hi = shots.iter().map(|s| idx(s.shot_distance_ft)).max().unwrap();
    let n_bins = (hi - lo + 1) as usize;
    let mut counts = vec![0u64; n_bins];
    for s in shots {
        counts[(idx(s.shot_distance_ft) - lo) as usize] += 1;
    }
    let norm = shots.len() as f64 * bin_width_ft;
    Ok(Histogram {
        bin_edges: (0..=n_bins)
            .map(|i| (lo + i as i64) as f64 * bin_width_ft)
            .collect(),
        densities: counts.iter().map(|&c| c as f64 / norm).collect(),
        counts,
    })
}

/// Attempts and makes per zone; every zone appears, shots outside all zones
/// are ignored.
pub fn aggregate_zone_counts(
    shots: &[ShotRecord],
    zones: &[ZoneSpec],
) -> BTreeMap<ZoneLabel, ZoneCounts> {
    let mut out: BTreeMap<ZoneLabel, ZoneCounts> = zones
        .iter()
        .map(|z| (z.label, ZoneCounts::empty(z.label)))
        .collect();
    for s in shots {
        if let Some(label) = classify_shot(s, zones) {
            let c = out.get_mut(&label).expect("label comes from zones");
            c.attempts += 1;
            c.made += s.made as u64;
        }
    }
    out
}
