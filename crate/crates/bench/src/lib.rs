//! Fixed-seed inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shotdim::{
    make_study_zones, region_pair, CourtModel, FgpPiece, Region, ShotRecord, SyntheticSpec,
};

pub fn uniform_square(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.random(), rng.random()]).collect()
}

/// `n` points scattered uniformly over a region's inner and outer bands.
pub fn band_points(region: Region, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let zones = make_study_zones(&CourtModel::default());
    let (zi, zo) = region_pair(&zones, region).expect("every region has a zone pair");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shotdim::fractal::sample_uniform(&[zi.shape, zo.shape], n, &mut rng)
}

/// Biased synthetic chart with a background over the half court.
pub fn synthetic_chart(n_band: usize, n_background: usize, seed: u64) -> Vec<ShotRecord> {
    let spec = SyntheticSpec {
        n_shots: n_band,
        outer_bias: Some(0.85),
        n_background,
        background_min_ft: 0.0,
        background_max_ft: 40.0,
        fgp_by_distance: vec![
            FgpPiece {
                d_lo: 0.0,
                d_hi: 22.0,
                fgp: 0.45,
            },
            FgpPiece {
                d_lo: 22.0,
                d_hi: 94.0,
                fgp: 0.36,
            },
        ],
        seed,
    };
    shotdim::generate_synthetic(&spec, &CourtModel::default()).expect("valid spec")
}
