//! Synthetic shot charts with a known spatial bias and FGP profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::court::{baseline_outer_fraction, make_study_zones, region_pair, CourtModel, Region};
use crate::error::{Error, Result};
use crate::ingest::{ShotRecord, ShotType};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgpPiece {
    pub d_lo: f64,
    pub d_hi: f64,
    pub fgp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Shots placed in the study bands, split evenly over the four regions.
    pub n_shots: usize,
    /// Probability that a band shot near the three-point line lands in the
    /// outer band. `None` uses the area baseline, i.e. no bias. The control
    /// region always uses its area baseline.
    #[serde(default)]
    pub outer_bias: Option<f64>,
    /// Extra shots spread uniformly in distance over the half court.
    #[serde(default)]
    pub n_background: usize,
    #[serde(default)]
    pub background_min_ft: f64,
    #[serde(default = "default_background_max")]
    pub background_max_ft: f64,
    /// Piecewise-constant make probability by distance, `[d_lo, d_hi)`.
    /// Distances outside every piece never score.
    pub fgp_by_distance: Vec<FgpPiece>,
    #[serde(default)]
    pub seed: u64,
}

fn default_background_max() -> f64 {
    40.0
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if let Some(b) = self.outer_bias {
            if !(0.0..=1.0).contains(&b) {
                return bad(format!("outer_bias must lie in [0, 1], got {b}"));
            }
        }
        let mut pieces = self.fgp_by_distance.clone();
        for p in &pieces {
            if !(p.d_lo < p.d_hi) || !(0.0..=1.0).contains(&p.fgp) {
                return bad(format!("invalid fgp piece {p:?}"));
            }
        }
        pieces.sort_by(|a, b| a.d_lo.total_cmp(&b.d_lo));
        if pieces.windows(2).any(|w| w[0].d_hi > w[1].d_lo) {
            return bad("fgp pieces overlap".into());
        }
        if self.n_background > 0
            && !(0.0 <= self.background_min_ft && self.background_min_ft < self.background_max_ft)
        {
            return bad(format!(
                "background range [{}, {}) is empty",
                self.background_min_ft, self.background_max_ft
            ));
        }
        Ok(())
    }

    pub fn fgp_at(&self, d: f64) -> f64 {
        self.fgp_by_distance
            .iter()
            .find(|p| p.d_lo <= d && d < p.d_hi)
            .map_or(0.0, |p| p.fgp)
    }
}

fn record(i: usize, x: f64, y: f64, zone: &str, model: &CourtModel, made: bool) -> ShotRecord {
    let shot_type = if model.is_three_point_location(x, y) {
        ShotType::ThreePoint
    } else {
        ShotType::TwoPoint
    };
    ShotRecord {
        game_id: "synthetic".into(),
        event_id: i.to_string(),
        player_id: "0".into(),
        team_id: "0".into(),
        period: 1 + (i % 4) as u32,
        clock_remaining_s: (i % 720) as u32,
        action_type: "Jump Shot".into(),
        shot_type,
        shot_zone: zone.into(),
        shot_distance_ft: x.hypot(y),
        x_ft: x,
        y_ft: y,
        made,
    }
}

/// Deterministic for a given spec (including its seed) and court.
pub fn generate_synthetic(spec: &SyntheticSpec, model: &CourtModel) -> Result<Vec<ShotRecord>> {
    spec.validate()?;
    let zones = make_study_zones(model);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut shots = Vec::with_capacity(spec.n_shots + spec.n_background);

    let pairs: Vec<_> = Region::ALL
        .iter()
        .map(|&r| {
            let (zi, zo) = region_pair(&zones, r).expect("study zones cover every region");
            let geometric = baseline_outer_fraction(&zi, &zo)?;
            let p_out = match (r, spec.outer_bias) {
                (Region::Control, _) | (_, None) => geometric,
                (_, Some(b)) => b,
            };
            Ok((r, zi, zo, p_out))
        })
        .collect::<Result<_>>()?;

    for i in 0..spec.n_shots {
        let (region, zi, zo, p_out) = &pairs[rng.random_range(0..pairs.len())];
        let zone = if rng.random::<f64>() < *p_out { zo } else { zi };
        let (x, y) = zone.shape.sample(&mut rng);
        let made = rng.random::<f64>() < spec.fgp_at(x.hypot(y));
        shots.push(record(i, x, y, region.name(), model, made));
    }

    let (d_lo, d_hi) = (spec.background_min_ft, spec.background_max_ft);
    for j in 0..spec.n_background {
        let d = d_lo + rng.random::<f64>() * (d_hi - d_lo);
        // keep |x| inside the sideline
        let t0 = if d > model.court_half_width_ft {
            (model.court_half_width_ft / d).acos()
        } else {
            0.0
        };
        let t = t0 + rng.random::<f64>() * (std::f64::consts::PI - 2.0 * t0);
        let (x, y) = (d * t.cos(), d * t.sin());
        let made = rng.random::<f64>() < spec.fgp_at(d);
        shots.push(record(spec.n_shots + j, x, y, "Background", model, made));
    }
    Ok(shots)
}
