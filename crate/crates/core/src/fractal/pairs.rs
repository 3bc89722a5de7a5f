//! Counting point pairs within a set of radii.
//!
//! All counters return, for each radius `r[i]`, the number of unordered
//! pairs at Euclidean distance `<= r[i]`. Distances are compared squared, so
//! every counter agrees bit-for-bit on boundary pairs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

// pairs drawn per rng stream when sampling
const SAMPLE_CHUNK: u64 = 1 << 16;

#[inline]
fn dist_sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Index of the smallest radius that covers `d2`, or `radii_sq.len()`.
#[inline]
fn bin_of(d2: f64, radii_sq: &[f64]) -> usize {
    radii_sq.partition_point(|&r2| r2 < d2)
}

fn cumulate(hist: &[u64], n_radii: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n_radii);
    let mut acc = 0;
    for &h in &hist[..n_radii] {
        acc += h;
        out.push(acc);
    }
    out
}

fn add_hist(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// O(n²) enumeration of every pair.
pub fn count_pairs_brute(points: &[[f64; 2]], radii: &[f64]) -> Vec<u64> {
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let mut hist = vec![0u64; radii.len() + 1];
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            hist[bin_of(dist_sq(points[i], points[j]), &radii_sq)] += 1;
        }
    }
    cumulate(&hist, radii.len())
}

/// Exact counts using a uniform grid with cell size equal to the largest
/// radius. Each point only visits its own cell and four forward neighbours,
/// so every pair within the largest radius is seen exactly once.
pub fn count_pairs_grid(points: &[[f64; 2]], radii: &[f64]) -> Vec<u64> {
    let n = points.len();
    let k = radii.len();
    if n < 2 || k == 0 {
        return vec![0; k];
    }
    // any cell at least as wide as the largest radius is correct; the slack
    // absorbs rounding in the cell index computation
    let cell = radii[k - 1] * (1.0 + 1e-9);
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();

    let (x0, y0) = points
        .iter()
        .fold((f64::INFINITY, f64::INFINITY), |(a, b), p| {
            (a.min(p[0]), b.min(p[1]))
        });
    let key_of = |p: &[f64; 2]| -> (i64, i64) {
        (
            ((p[0] - x0) / cell).floor() as i64,
            ((p[1] - y0) / cell).floor() as i64,
        )
    };

    let mut keyed: Vec<((i64, i64), [f64; 2])> = points.iter().map(|p| (key_of(p), *p)).collect();
    keyed.sort_unstable_by_key(|&(key, _)| key);

    let mut ranges: HashMap<(i64, i64), (usize, usize)> = HashMap::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || keyed[i].0 != keyed[start].0 {
            ranges.insert(keyed[start].0, (start, i));
            start = i;
        }
    }

    const FORWARD: [(i64, i64); 4] = [(1, -1), (1, 0), (1, 1), (0, 1)];

    let hist = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; k + 1],
            |mut hist, pos| {
                let (key, p) = keyed[pos];
                let (_, own_end) = ranges[&key];
                for &(_, q) in &keyed[pos + 1..own_end] {
                    hist[bin_of(dist_sq(p, q), &radii_sq)] += 1;
                }
                for (dx, dy) in FORWARD {
                    if let Some(&(s, e)) = ranges.get(&(key.0 + dx, key.1 + dy)) {
                        for &(_, q) in &keyed[s..e] {
                            hist[bin_of(dist_sq(p, q), &radii_sq)] += 1;
                        }
                    }
                }
                hist
            },
        )
        .reduce(|| vec![0u64; k + 1], add_hist);

    cumulate(&hist, k)
}

/// Counts over `n_pairs` uniformly drawn pairs of distinct points. The draw is
/// split into fixed-size chunks, each on its own rng stream, so the result
/// depends only on `seed`.
pub fn count_pairs_sampled(
    points: &[[f64; 2]],
    radii: &[f64],
    n_pairs: u64,
    seed: u64,
) -> Vec<u64> {
    let n = points.len();
    let k = radii.len();
    if n < 2 || k == 0 || n_pairs == 0 {
        return vec![0; k];
    }
    let radii_sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let chunks = n_pairs.div_ceil(SAMPLE_CHUNK);

    let hist = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let todo = SAMPLE_CHUNK.min(n_pairs - c * SAMPLE_CHUNK);
            let mut hist = vec![0u64; k + 1];
            for _ in 0..todo {
                let (i, j) = sample_pair(&mut rng, n);
                hist[bin_of(dist_sq(points[i], points[j]), &radii_sq)] += 1;
            }
            hist
        })
        .reduce(|| vec![0u64; k + 1], add_hist);

    cumulate(&hist, k)
}

/// A uniformly drawn unordered pair of distinct indices.
pub(crate) fn sample_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}
