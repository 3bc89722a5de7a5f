//! Correlation dimension of planar point sets.
//!
//! `C(r)` is the fraction of unordered point pairs at distance `<= r`. Over a
//! scaling range `[r1, r2]`, `C(r) ~ r^D2`; `D2` is estimated as the
//! least-squares slope of `ln C` against `ln r` on log-spaced radii.

pub mod pairs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::court::{Shape, ZoneSpec};
use crate::error::{Error, Result};

pub use pairs::{count_pairs_brute, count_pairs_grid, count_pairs_sampled};

/// Largest point count counted exactly.
pub const DEFAULT_EXACT_CAP: usize = 20_000;
/// Pairs drawn when the point count exceeds the exact cap.
pub const DEFAULT_SAMPLE_PAIRS: u64 = 20_000_000;
/// Pair-distance percentiles bounding the automatic scaling range.
pub const DEFAULT_P_LO: f64 = 0.5;
pub const DEFAULT_P_HI: f64 = 5.0;
pub const DEFAULT_N_RADII: usize = 20;
/// Pairwise distances examined when choosing the scaling range.
pub const RANGE_SAMPLE_PAIRS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<[f64; 2]>,
}

impl PointSet {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if let Some(i) = points
            .iter()
            .position(|p| !(p[0].is_finite() && p[1].is_finite()))
        {
            return Err(Error::NonFinite(i));
        }
        Ok(PointSet { points })
    }

    pub fn from_xy<I: IntoIterator<Item = (f64, f64)>>(xy: I) -> Result<Self> {
        Self::new(xy.into_iter().map(|(x, y)| [x, y]).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    fn require(&self, need: usize) -> Result<()> {
        if self.len() < need {
            Err(Error::TooFewPoints {
                need,
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCountOptions {
    pub exact_cap: usize,
    pub sample_pairs: u64,
    pub seed: u64,
}

impl Default for PairCountOptions {
    fn default() -> Self {
        PairCountOptions {
            exact_cap: DEFAULT_EXACT_CAP,
            sample_pairs: DEFAULT_SAMPLE_PAIRS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub n_radii: usize,
    /// Percentiles (0–100) of the pair distances used by the automatic range.
    pub p_lo: f64,
    pub p_hi: f64,
    pub pairs: PairCountOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            n_radii: DEFAULT_N_RADII,
            p_lo: DEFAULT_P_LO,
            p_hi: DEFAULT_P_HI,
            pairs: PairCountOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub radii: Vec<f64>,
    pub c_of_r: Vec<f64>,
    pub pair_counts: Vec<u64>,
    /// Number of pairs the fractions are relative to.
    pub pairs_total: u64,
    pub sampled: bool,
}

pub fn correlation_integral(
    points: &PointSet,
    radii: &[f64],
    opts: &PairCountOptions,
) -> Result<CorrelationCurve> {
    points.require(2)?;
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive and finite, got {r}"
        )));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "radii must be strictly ascending".into(),
        ));
    }
    let n = points.len();
    let (pair_counts, pairs_total, sampled) = if n <= opts.exact_cap {
        let total = n as u64 * (n as u64 - 1) / 2;
        (count_pairs_grid(points.points(), radii), total, false)
    } else {
        let m = opts.sample_pairs.max(1);
        (
            count_pairs_sampled(points.points(), radii, m, opts.seed),
            m,
            true,
        )
    };
    let c_of_r = pair_counts
        .iter()
        .map(|&c| c as f64 / pairs_total as f64)
        .collect();
    Ok(CorrelationCurve {
        radii: radii.to_vec(),
        c_of_r,
        pair_counts,
        pairs_total,
        sampled,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFit {
    pub d2: f64,
    pub r1: f64,
    pub r2: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    /// Radii that entered the regression.
    pub n_points_used: usize,
    /// Radii dropped because no pair fell within them.
    pub n_zero_excluded: usize,
    pub n_points: usize,
    pub curve: CorrelationCurve,
}

pub fn log_spaced(r1: f64, r2: f64, k: usize) -> Vec<f64> {
    let ratio = (r2 / r1).ln();
    (0..k)
        .map(|i| {
            if i + 1 == k {
                r2
            } else {
                r1 * (ratio * i as f64 / (k - 1) as f64).exp()
            }
        })
        .collect()
}

struct Ols {
    slope: f64,
    intercept: f64,
    stderr: f64,
    r_squared: f64,
}

fn ols(x: &[f64], y: &[f64]) -> Ols {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let stderr = if x.len() > 2 {
        (sse / (m - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ols {
        slope,
        intercept,
        stderr,
        r_squared,
    }
}

/// Fits `D2` over `n_radii` log-spaced radii in `[r1, r2]`.
pub fn estimate_d2(
    points: &PointSet,
    r1: f64,
    r2: f64,
    n_radii: usize,
    pairs: &PairCountOptions,
) -> Result<CorrelationFit> {
    points.require(2)?;
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r1 < r2, got r1={r1} r2={r2}"
        )));
    }
    if n_radii < 5 {
        return Err(Error::InvalidParameter(format!(
            "n_radii must be at least 5, got {n_radii}"
        )));
    }
    let radii = log_spaced(r1, r2, n_radii);
    let curve = correlation_integral(points, &radii, pairs)?;

    let (lx, ly): (Vec<f64>, Vec<f64>) = curve
        .radii
        .iter()
        .zip(&curve.c_of_r)
        .filter(|(_, &c)| c > 0.0)
        .map(|(r, c)| (r.ln(), c.ln()))
        .unzip();
    if lx.len() < 3 {
        return Err(Error::InsufficientScalingRange { usable: lx.len() });
    }
    let fit = ols(&lx, &ly);
    Ok(CorrelationFit {
        d2: fit.slope.max(0.0),
        r1,
        r2,
        intercept: fit.intercept,
        slope_stderr: fit.stderr,
        r_squared: fit.r_squared,
        n_points_used: lx.len(),
        n_zero_excluded: n_radii - lx.len(),
        n_points: points.len(),
        curve,
    })
}

/// Pairwise distances for range selection: every pair when there are at most
/// `max_pairs`, otherwise a fixed-seed uniform sample.
fn range_distances(points: &[[f64; 2]], max_pairs: usize) -> Vec<f64> {
    let n = points.len();
    let total = n * (n - 1) / 2;
    let d = |i: usize, j: usize| {
        let (a, b) = (points[i], points[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    };
    if total <= max_pairs {
        let mut out = Vec::with_capacity(total);
        for i in 0..n {
            for j in i + 1..n {
                out.push(d(i, j));
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d157);
        (0..max_pairs)
            .map(|_| {
                let (i, j) = pairs::sample_pair(&mut rng, n);
                d(i, j)
            })
            .collect()
    }
}

/// Nearest-rank percentile; reorders `v`.
fn select_percentile(v: &mut [f64], pct: f64) -> f64 {
    let m = v.len();
    let rank = ((pct / 100.0) * m as f64).ceil() as usize;
    let idx = rank.clamp(1, m) - 1;
    *v.select_nth_unstable_by(idx, f64::total_cmp).1
}

/// Scaling range from the default distance percentiles.
pub fn auto_scale_range(points: &PointSet) -> Result<(f64, f64)> {
    auto_scale_range_with(points, DEFAULT_P_LO, DEFAULT_P_HI)
}

/// Scaling range `[r1, r2]` at pair-distance percentiles `p_lo < p_hi`. A
/// zero lower percentile is replaced by the smallest positive distance; a
/// collapsed range is widened to `[min positive distance, median]`.
pub fn auto_scale_range_with(points: &PointSet, p_lo: f64, p_hi: f64) -> Result<(f64, f64)> {
    points.require(2)?;
    if !(0.0 <= p_lo && p_lo < p_hi && p_hi <= 100.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= p_lo < p_hi <= 100, got {p_lo}, {p_hi}"
        )));
    }
    let mut d = range_distances(points.points(), RANGE_SAMPLE_PAIRS);
    let min_pos = d
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min_pos.is_finite() {
        return Err(Error::DegeneratePointSet);
    }
    let mut r2 = select_percentile(&mut d, p_hi);
    let mut r1 = select_percentile(&mut d, p_lo);
    if r1 <= 0.0 {
        r1 = min_pos;
    }
    if r1 >= r2 {
        r1 = min_pos;
        r2 = select_percentile(&mut d, 50.0);
    }
    if r1 >= r2 {
        return Err(Error::DegenerateScaleRange { r1, r2 });
    }
    Ok((r1, r2))
}

/// Automatic range followed by [`estimate_d2`].
pub fn estimate_d2_auto(points: &PointSet, opts: &FitOptions) -> Result<CorrelationFit> {
    let (r1, r2) = auto_scale_range_with(points, opts.p_lo, opts.p_hi)?;
    estimate_d2(points, r1, r2, opts.n_radii, &opts.pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineInterval {
    /// 2.5th percentile of the per-trial estimates.
    pub lo: f64,
    /// 97.5th percentile.
    pub hi: f64,
    pub trials: usize,
    pub failed_trials: usize,
    pub per_trial_d2: Vec<f64>,
}

impl BaselineInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, d2: f64) -> bool {
        self.lo <= d2 && d2 <= self.hi
    }
}

/// Linear-interpolation percentile of sorted data.
pub(crate) fn interpolated_percentile(sorted: &[f64], pct: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * pct / 100.0;
    let i = h.floor() as usize;
    let frac = h - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Draws `n` points uniformly over the union of disjoint shapes.
pub fn sample_uniform<R: Rng + ?Sized>(shapes: &[Shape], n: usize, rng: &mut R) -> Vec<[f64; 2]> {
    let areas: Vec<f64> = shapes.iter().map(Shape::area).collect();
    let total: f64 = areas.iter().sum();
    (0..n)
        .map(|_| {
            let mut u = rng.random::<f64>() * total;
            let mut pick = shapes.len() - 1;
            for (i, a) in areas.iter().enumerate() {
                if u < *a {
                    pick = i;
                    break;
                }
                u -= a;
            }
            let (x, y) = shapes[pick].sample(rng);
            [x, y]
        })
        .collect()
}

/// Distribution of `D2` when `n` points are scattered uniformly over the
/// zone pair: the bias-free reference for an observed shot pattern.
pub fn reshuffle_baseline(
    zone_in: &ZoneSpec,
    zone_out: &ZoneSpec,
    n: usize,
    trials: usize,
    seed: u64,
    opts: &FitOptions,
) -> Result<BaselineInterval> {
    reshuffle_in_shapes(&[zone_in.shape, zone_out.shape], n, trials, seed, opts)
}

/// As [`reshuffle_baseline`] over any union of disjoint shapes. Trial `t`
/// uses rng stream `t` of `seed`, so results do not depend on scheduling.
pub fn reshuffle_in_shapes(
    shapes: &[Shape],
    n: usize,
    trials: usize,
    seed: u64,
    opts: &FitOptions,
) -> Result<BaselineInterval> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!(
            "reshuffle needs n >= 100, got {n}"
        )));
    }
    if trials < 20 {
        return Err(Error::InvalidParameter(format!(
            "reshuffle needs at least 20 trials, got {trials}"
        )));
    }
    if shapes.is_empty() {
        return Err(Error::InvalidParameter("no shapes to sample".into()));
    }

    let results: Vec<Result<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let pts = PointSet::new(sample_uniform(shapes, n, &mut rng))?;
            let mut trial_opts = *opts;
            trial_opts.pairs.seed = rng.random();
            estimate_d2_auto(&pts, &trial_opts).map(|f| f.d2)
        })
        .collect();

    let mut per_trial_d2 = Vec::with_capacity(trials);
    let mut failed = 0;
    for r in results {
        match r {
            Ok(d) => per_trial_d2.push(d),
            Err(_) => failed += 1,
        }
    }
    if failed * 10 > trials || per_trial_d2.is_empty() {
        return Err(Error::TooManyFailedTrials { failed, trials });
    }
    let mut sorted = per_trial_d2.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(BaselineInterval {
        lo: interpolated_percentile(&sorted, 2.5),
        hi: interpolated_percentile(&sorted, 97.5),
        trials,
        failed_trials: failed,
        per_trial_d2,
    })
}

/// Relative shortfall of the observed dimension against the baseline midpoint.
pub fn dimension_reduction(observed_d2: f64, baseline: &BaselineInterval) -> Result<f64> {
    let mid = baseline.midpoint();
    if !(mid > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "baseline midpoint must be positive, got {mid}"
        )));
    }
    Ok(1.0 - observed_d2 / mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[[f64; 2]]) -> PointSet {
        PointSet::new(v.to_vec()).unwrap()
    }

    fn uniform_square(n: usize, seed: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointSet::new((0..n).map(|_| [rng.random(), rng.random()]).collect()).unwrap()
    }

    fn interval(lo: f64, hi: f64) -> BaselineInterval {
        BaselineInterval {
            lo,
            hi,
            trials: 0,
            failed_trials: 0,
            per_trial_d2: vec![],
        }
    }

    #[test]
    fn single_pair_curve() {
        let c = correlation_integral(
            &ps(&[[0.0, 0.0], [1.0, 0.0]]),
            &[0.5, 1.0, 2.0],
            &Default::default(),
        )
        .unwrap();
        assert_eq!(c.c_of_r, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn three_collinear() {
        let c = correlation_integral(
            &ps(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]),
            &[1.0, 2.0],
            &Default::default(),
        )
        .unwrap();
        assert!((c.c_of_r[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.c_of_r[1], 1.0);
    }

    #[test]
    fn integral_errors() {
        let o = PairCountOptions::default();
        assert!(matches!(
            correlation_integral(&ps(&[[0.0, 0.0]]), &[1.0], &o),
            Err(Error::TooFewPoints { .. })
        ));
        let two = ps(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(correlation_integral(&two, &[0.0, 1.0], &o).is_err());
        assert!(correlation_integral(&two, &[-1.0], &o).is_err());
        assert!(correlation_integral(&two, &[2.0, 1.0], &o).is_err());
        assert!(matches!(
            PointSet::new(vec![[0.0, f64::NAN]]),
            Err(Error::NonFinite(0))
        ));
    }

    #[test]
    fn sampled_above_cap() {
        let pts = uniform_square(3_000, 5);
        let o = PairCountOptions {
            exact_cap: 1_000,
            sample_pairs: 500_000,
            seed: 9,
        };
        let c = correlation_integral(&pts, &[0.05, 0.1, 0.2], &o).unwrap();
        assert!(c.sampled);
        assert_eq!(c.pairs_total, 500_000);
        let exact = correlation_integral(&pts, &[0.05, 0.1, 0.2], &Default::default()).unwrap();
        for (a, b) in c.c_of_r.iter().zip(&exact.c_of_r) {
            // binomial standard error of a sampled fraction
            let se = (b * (1.0 - b) / 500_000.0).sqrt();
            assert!((a - b).abs() < 5.0 * se + 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn log_spacing() {
        let r = log_spaced(0.1, 10.0, 5);
        assert_eq!(r.len(), 5);
        assert_eq!(r[0], 0.1);
        assert_eq!(r[4], 10.0);
        assert!((r[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_errors() {
        let pts = uniform_square(200, 1);
        let o = PairCountOptions::default();
        assert!(estimate_d2(&pts, 0.2, 0.1, 10, &o).is_err());
        assert!(estimate_d2(&pts, 0.1, 0.2, 4, &o).is_err());
        // every radius below the closest pair
        let far = ps(&[[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]]);
        assert!(matches!(
            estimate_d2(&far, 0.1, 1.0, 10, &o),
            Err(Error::InsufficientScalingRange { usable: 0 })
        ));
    }

    #[test]
    fn zero_radii_are_excluded() {
        let pts = ps(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0], [7.0, 0.0]]);
        let fit = estimate_d2(&pts, 0.5, 8.0, 9, &Default::default()).unwrap();
        assert!(fit.n_zero_excluded > 0);
        assert_eq!(fit.n_points_used + fit.n_zero_excluded, 9);
    }

    #[test]
    fn auto_range_degenerate() {
        let same = ps(&[[1.0, 1.0]; 5]);
        assert!(matches!(
            auto_scale_range(&same),
            Err(Error::DegeneratePointSet)
        ));
        let two = ps(&[[0.0, 0.0], [3.0, 4.0]]);
        assert!(matches!(
            auto_scale_range(&two),
            Err(Error::DegenerateScaleRange { .. })
        ));
        // duplicates push the low percentile to zero
        let mut v = vec![[0.0, 0.0]; 50];
        v.extend((0..50).map(|i| [i as f64, 1.0]));
        let (r1, r2) = auto_scale_range_with(&ps(&v), 10.0, 60.0).unwrap();
        assert!(r1 > 0.0 && r1 < r2);
    }

    #[test]
    fn reduction_examples() {
        let left = dimension_reduction(0.67, &interval(0.96, 0.99)).unwrap();
        assert!((left - (1.0 - 0.67 / 0.975)).abs() < 1e-12);
        assert!((left - 0.313).abs() < 5e-4);
        let crest = dimension_reduction(1.17, &interval(1.74, 1.87)).unwrap();
        assert!((crest - 0.352).abs() < 5e-4);
        assert_eq!(dimension_reduction(1.5, &interval(1.4, 1.6)).unwrap(), 0.0);
        assert!(dimension_reduction(1.0, &interval(0.0, 0.0)).is_err());
    }

    #[test]
    fn reshuffle_preconditions() {
        let sq = Shape::StraightBand {
            x_lo: 0.0,
            x_hi: 1.0,
            y_lo: 0.0,
            y_hi: 1.0,
        };
        let o = FitOptions::default();
        assert!(reshuffle_in_shapes(&[sq], 99, 20, 0, &o).is_err());
        assert!(reshuffle_in_shapes(&[sq], 100, 19, 0, &o).is_err());
    }

    #[test]
    fn percentile_helpers() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(interpolated_percentile(&s, 50.0), 3.0);
        assert_eq!(interpolated_percentile(&s, 2.5), 1.1);
        let mut v = vec![5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(select_percentile(&mut v, 40.0), 2.0);
        assert_eq!(select_percentile(&mut v, 0.0), 1.0);
    }
}
