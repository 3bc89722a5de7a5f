//! Test-side oracles and generators, independent of the library's code paths.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_square(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut r = rng(seed);
    (0..n).map(|_| [r.random(), r.random()]).collect()
}

pub fn uniform_segment(n: usize, len: f64, seed: u64) -> Vec<[f64; 2]> {
    let mut r = rng(seed);
    (0..n).map(|_| [r.random::<f64>() * len, 0.0]).collect()
}

/// Chaos game on an equilateral triangle; the attractor has dimension
/// ln 3 / ln 2.
pub fn sierpinski(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let v = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
    let mut r = rng(seed);
    let mut p = [0.3, 0.3];
    let mut out = Vec::with_capacity(n);
    for i in 0..n + 50 {
        let c = v[r.random_range(0..3)];
        p = [(p[0] + c[0]) / 2.0, (p[1] + c[1]) / 2.0];
        if i >= 50 {
            out.push(p);
        }
    }
    out
}

/// Counts unordered pairs within each radius by full enumeration.
pub fn brute_counts(points: &[[f64; 2]], radii: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; radii.len()];
    for i in 0..points.len() {
        for j in 0..i {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            let d2 = dx * dx + dy * dy;
            for (c, r) in counts.iter_mut().zip(radii) {
                if d2 <= r * r {
                    *c += 1;
                }
            }
        }
    }
    counts
}

pub fn all_distances_sorted(points: &[[f64; 2]]) -> Vec<f64> {
    let mut d = Vec::new();
    for i in 0..points.len() {
        for j in 0..i {
            d.push((points[i][0] - points[j][0]).hypot(points[i][1] - points[j][1]));
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// Nearest-rank percentile of sorted data.
pub fn nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Pair-distance CDF of two uniform points in the unit square, r <= 1.
pub fn unit_square_distance_cdf(r: f64) -> f64 {
    std::f64::consts::PI * r * r - 8.0 / 3.0 * r.powi(3) + 0.5 * r.powi(4)
}

/// ln C(n, k) by summing logs, without the gamma function.
pub fn ln_choose_sum(n: u64, k: u64) -> f64 {
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Two-sided exact binomial p-value by direct summation of the pmf.
pub fn binom_two_sided_direct(k: u64, n: u64, p: f64) -> f64 {
    let pmf: Vec<f64> = (0..=n)
        .map(|i| (ln_choose_sum(n, i) + i as f64 * p.ln() + (n - i) as f64 * (1.0 - p).ln()).exp())
        .collect();
    let cut = pmf[k as usize] * (1.0 + 1e-7);
    pmf.iter().filter(|&&v| v <= cut).sum::<f64>().min(1.0)
}
