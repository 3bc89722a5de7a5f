//! Three-point line geometry and the analysis zones built around it.
//!
//! Coordinates are feet, basket center at the origin, x along the baseline,
//! y toward half-court. Angles are measured counter-clockwise from +x.
//!
//! Zone membership is half-open: the boundary nearer the basket is closed,
//! the far boundary open. A shot exactly on the three-point line therefore
//! counts in the OUT zone of its pair.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ShotRecord;

const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CourtModel {
    pub corner_dist_ft: f64,
    pub crest_dist_ft: f64,
    /// y where the straight corner segment meets the arc.
    pub corner_y_max_ft: f64,
    pub court_half_width_ft: f64,
    pub baseline_y_ft: f64,
}

impl Default for CourtModel {
    fn default() -> Self {
        CourtModel::new(22.0, 23.9, 25.0, -5.25).expect("default court is valid")
    }
}

impl CourtModel {
    pub const DEFAULT_CREST_FT: f64 = 23.9;
    pub const OFFICIAL_CREST_FT: f64 = 23.75;

    /// Builds a model, deriving `corner_y_max_ft` from where the arc reaches
    /// `|x| = corner_dist_ft`.
    pub fn new(
        corner_dist_ft: f64,
        crest_dist_ft: f64,
        court_half_width_ft: f64,
        baseline_y_ft: f64,
    ) -> Result<Self> {
        let vals = [
            corner_dist_ft,
            crest_dist_ft,
            court_half_width_ft,
            baseline_y_ft,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCourt("non-finite constant".into()));
        }
        if !(0.0 < corner_dist_ft && corner_dist_ft < crest_dist_ft) {
            return Err(Error::InvalidCourt(format!(
                "need 0 < corner_dist ({corner_dist_ft}) < crest_dist ({crest_dist_ft})"
            )));
        }
        if crest_dist_ft >= court_half_width_ft + 10.0 {
            return Err(Error::InvalidCourt(format!(
                "crest_dist ({crest_dist_ft}) must be below court_half_width + 10"
            )));
        }
        // the inner crest band must stay clear of the basket
        if crest_dist_ft <= 1.0 {
            return Err(Error::InvalidCourt(
                "crest_dist must exceed the 1 ft band width".into(),
            ));
        }
        let corner_y_max_ft =
            (crest_dist_ft * crest_dist_ft - corner_dist_ft * corner_dist_ft).sqrt();
        if corner_y_max_ft <= baseline_y_ft {
            return Err(Error::InvalidCourt(format!(
                "corner_y_max ({corner_y_max_ft}) must lie above baseline_y ({baseline_y_ft})"
            )));
        }
        Ok(CourtModel {
            corner_dist_ft,
            crest_dist_ft,
            corner_y_max_ft,
            court_half_width_ft,
            baseline_y_ft,
        })
    }

    /// Whether a location lies on or beyond the three-point line.
    pub fn is_three_point_location(&self, x: f64, y: f64) -> bool {
        if y < self.corner_y_max_ft {
            x.abs() >= self.corner_dist_ft
        } else {
            x.hypot(y) >= self.crest_dist_ft
        }
    }

    /// Start of the crest sectors. Chosen so that every point of the inner
    /// crest band has `y >= corner_y_max_ft`, which keeps the crest bands
    /// disjoint from the corner bands.
    pub fn crest_theta_lo(&self) -> f64 {
        (self.corner_y_max_ft / (self.crest_dist_ft - 1.0))
            .clamp(-1.0, 1.0)
            .asin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Shape {
    /// Rectangle between two vertical lines. Closed on the x edge nearer the
    /// basket axis and at `y_lo`; open on the other two edges.
    StraightBand {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
    /// `r_lo <= r < r_hi`, `theta_lo <= theta <= theta_hi`.
    AnnularSector {
        r_lo: f64,
        r_hi: f64,
        theta_lo: f64,
        theta_hi: f64,
    },
}

impl Shape {
    pub fn area(&self) -> f64 {
        match *self {
            Shape::StraightBand {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => (x_hi - x_lo) * (y_hi - y_lo),
            Shape::AnnularSector {
                r_lo,
                r_hi,
                theta_lo,
                theta_hi,
            } => 0.5 * (theta_hi - theta_lo) * (r_hi * r_hi - r_lo * r_lo),
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::StraightBand {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => {
                let in_y = y >= y_lo && y < y_hi;
                let in_x = if x_lo.abs() <= x_hi.abs() {
                    x >= x_lo && x < x_hi
                } else {
                    x > x_lo && x <= x_hi
                };
                in_x && in_y
            }
            Shape::AnnularSector {
                r_lo,
                r_hi,
                theta_lo,
                theta_hi,
            } => {
                let r = x.hypot(y);
                if !(r >= r_lo && r < r_hi) {
                    return false;
                }
                let mut t = y.atan2(x);
                if t < theta_lo {
                    t += 2.0 * PI;
                }
                t >= theta_lo && t <= theta_hi
            }
        }
    }

    /// Draws one point uniformly over the shape's area.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            Shape::StraightBand {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                (x_lo + u * (x_hi - x_lo), y_lo + v * (y_hi - y_lo))
            }
            Shape::AnnularSector {
                r_lo,
                r_hi,
                theta_lo,
                theta_hi,
            } => {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                let r = (r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo)).sqrt();
                let t = theta_lo + v * (theta_hi - theta_lo);
                (r * t.cos(), r * t.sin())
            }
        }
    }

    /// Axis-aligned bounding box `(x_lo, x_hi, y_lo, y_hi)`, possibly loose.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Shape::StraightBand {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => (x_lo, x_hi, y_lo, y_hi),
            Shape::AnnularSector { r_hi, .. } => (-r_hi, r_hi, -r_hi, r_hi),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::StraightBand {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
            } => x_lo < x_hi && y_lo < y_hi,
            Shape::AnnularSector {
                r_lo,
                r_hi,
                theta_lo,
                theta_hi,
            } => {
                0.0 <= r_lo && r_lo < r_hi && theta_lo < theta_hi && theta_hi - theta_lo <= 2.0 * PI
            }
        };
        if ok && self.area().is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "degenerate shape {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ZoneLabel {
    LeftCornerIn,
    LeftCornerOut,
    RightCornerIn,
    RightCornerOut,
    CrestIn,
    CrestOut,
    ControlIn,
    ControlOut,
}

impl ZoneLabel {
    pub const ALL: [ZoneLabel; 8] = [
        ZoneLabel::LeftCornerIn,
        ZoneLabel::LeftCornerOut,
        ZoneLabel::RightCornerIn,
        ZoneLabel::RightCornerOut,
        ZoneLabel::CrestIn,
        ZoneLabel::CrestOut,
        ZoneLabel::ControlIn,
        ZoneLabel::ControlOut,
    ];

    pub fn region(self) -> Region {
        use ZoneLabel::*;
        match self {
            LeftCornerIn | LeftCornerOut => Region::LeftCorner,
            RightCornerIn | RightCornerOut => Region::RightCorner,
            CrestIn | CrestOut => Region::Crest,
            ControlIn | ControlOut => Region::Control,
        }
    }

    pub fn is_outer(self) -> bool {
        use ZoneLabel::*;
        matches!(self, LeftCornerOut | RightCornerOut | CrestOut | ControlOut)
    }
}

impl fmt::Display for ZoneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An inner/outer zone pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    LeftCorner,
    RightCorner,
    Crest,
    Control,
}

impl Region {
    pub const ALL: [Region; 4] = [
        Region::LeftCorner,
        Region::RightCorner,
        Region::Crest,
        Region::Control,
    ];
    /// The regions straddling the three-point line.
    pub const THREE_POINT: [Region; 3] = [Region::LeftCorner, Region::RightCorner, Region::Crest];

    pub fn inner(self) -> ZoneLabel {
        match self {
            Region::LeftCorner => ZoneLabel::LeftCornerIn,
            Region::RightCorner => ZoneLabel::RightCornerIn,
            Region::Crest => ZoneLabel::CrestIn,
            Region::Control => ZoneLabel::ControlIn,
        }
    }

    pub fn outer(self) -> ZoneLabel {
        match self {
            Region::LeftCorner => ZoneLabel::LeftCornerOut,
            Region::RightCorner => ZoneLabel::RightCornerOut,
            Region::Crest => ZoneLabel::CrestOut,
            Region::Control => ZoneLabel::ControlOut,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::LeftCorner => "left_corner",
            Region::RightCorner => "right_corner",
            Region::Crest => "crest",
            Region::Control => "control",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneSpec {
    pub label: ZoneLabel,
    pub shape: Shape,
}

impl ZoneSpec {
    pub fn new(label: ZoneLabel, shape: Shape) -> Result<Self> {
        shape.validate()?;
        Ok(ZoneSpec { label, shape })
    }

    pub fn area(&self) -> f64 {
        self.shape.area()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.shape.contains(x, y)
    }
}

/// The six three-point study zones (1 ft bands either side of the line, at
/// both corners and the crest) and the two control bands either side of the
/// 17 ft arc.
pub fn make_study_zones(model: &CourtModel) -> Vec<ZoneSpec> {
    let c = model.corner_dist_ft;
    let (y_lo, y_hi) = (model.baseline_y_ft, model.corner_y_max_ft);
    let band = |x_lo, x_hi| Shape::StraightBand {
        x_lo,
        x_hi,
        y_lo,
        y_hi,
    };

    let t_lo = model.crest_theta_lo();
    let t_hi = PI - t_lo;
    let crest = model.crest_dist_ft;
    let sector = |r_lo, r_hi, theta_lo, theta_hi| Shape::AnnularSector {
        r_lo,
        r_hi,
        theta_lo,
        theta_hi,
    };

    vec![
        ZoneSpec {
            label: ZoneLabel::LeftCornerIn,
            shape: band(-c, -c + 1.0),
        },
        ZoneSpec {
            label: ZoneLabel::LeftCornerOut,
            shape: band(-c - 1.0, -c),
        },
        ZoneSpec {
            label: ZoneLabel::RightCornerIn,
            shape: band(c - 1.0, c),
        },
        ZoneSpec {
            label: ZoneLabel::RightCornerOut,
            shape: band(c, c + 1.0),
        },
        ZoneSpec {
            label: ZoneLabel::CrestIn,
            shape: sector(crest - 1.0, crest, t_lo, t_hi),
        },
        ZoneSpec {
            label: ZoneLabel::CrestOut,
            shape: sector(crest, crest + 1.0, t_lo, t_hi),
        },
        ZoneSpec {
            label: ZoneLabel::ControlIn,
            shape: sector(16.0, 17.0, 0.0, PI),
        },
        ZoneSpec {
            label: ZoneLabel::ControlOut,
            shape: sector(17.0, 18.0, 0.0, PI),
        },
    ]
}

pub fn zone_area(zone: &ZoneSpec) -> f64 {
    zone.area()
}

/// Looks up the inner and outer zone of a region.
pub fn region_pair(zones: &[ZoneSpec], region: Region) -> Option<(ZoneSpec, ZoneSpec)> {
    let find = |l| zones.iter().find(|z| z.label == l).copied();
    Some((find(region.inner())?, find(region.outer())?))
}

/// Share of the pair's area covered by the outer zone: the expected outer
/// fraction of shots when there is no spatial bias.
pub fn baseline_outer_fraction(zone_in: &ZoneSpec, zone_out: &ZoneSpec) -> Result<f64> {
    let close = |a: f64, b: f64| (a - b).abs() <= GEOM_EPS * (1.0 + a.abs().max(b.abs()));
    let paired = match (zone_in.shape, zone_out.shape) {
        (
            Shape::AnnularSector {
                r_hi: in_hi,
                theta_lo: a_lo,
                theta_hi: a_hi,
                ..
            },
            Shape::AnnularSector {
                r_lo: out_lo,
                theta_lo: b_lo,
                theta_hi: b_hi,
                ..
            },
        ) => close(in_hi, out_lo) && close(a_lo, b_lo) && close(a_hi, b_hi),
        (
            Shape::StraightBand {
                x_lo: ix_lo,
                x_hi: ix_hi,
                y_lo: iy_lo,
                y_hi: iy_hi,
            },
            Shape::StraightBand {
                x_lo: ox_lo,
                x_hi: ox_hi,
                y_lo: oy_lo,
                y_hi: oy_hi,
            },
        ) => {
            let same_y = close(iy_lo, oy_lo) && close(iy_hi, oy_hi);
            // outer band sits on the far side of the inner one
            let right = close(ix_hi, ox_lo) && ix_lo.abs() < ox_hi.abs();
            let left = close(ix_lo, ox_hi) && ix_hi.abs() < ox_lo.abs();
            same_y && (right || left)
        }
        _ => false,
    };
    if !paired {
        return Err(Error::MismatchedZones(
            zone_in.label.to_string(),
            zone_out.label.to_string(),
        ));
    }
    let a_in = zone_in.area();
    let a_out = zone_out.area();
    Ok(a_out / (a_in + a_out))
}

pub fn classify_point(x: f64, y: f64, zones: &[ZoneSpec]) -> Option<ZoneLabel> {
    zones.iter().find(|z| z.contains(x, y)).map(|z| z.label)
}

pub fn classify_shot(record: &ShotRecord, zones: &[ZoneSpec]) -> Option<ZoneLabel> {
    classify_point(record.x_ft, record.y_ft, zones)
}
