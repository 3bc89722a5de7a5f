//! Spatial analysis of basketball shot charts around the three-point line.
//!
//! - [`ingest`]: shot-chart parsing and validation.
//! - [`court`]: three-point line geometry, study zones and area baselines.
//! - [`fractal`]: correlation dimension `D2` of point sets, with uniform
//!   reshuffle baselines.
//! - [`stats`]: outer-fraction bias tests, FGP comparisons, the FGP
//!   discontinuity scan and distance histograms.
//! - [`equity`]: expected points per zone.
//! - [`synth`]: synthetic shot charts with known parameters.
//! - [`report`]: the end-to-end pipeline.

// `!(a < b)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod court;
pub mod equity;
pub mod error;
pub mod fractal;
pub mod ingest;
pub mod report;
pub mod stats;
pub mod synth;

pub use config::AnalysisConfig;
pub use court::{
    baseline_outer_fraction, classify_point, classify_shot, make_study_zones, region_pair,
    zone_area, CourtModel, Region, Shape, ZoneLabel, ZoneSpec,
};
pub use equity::{equity, zone_equity_report, EquityResult};
pub use error::{Error, Result};
pub use fractal::{
    auto_scale_range, auto_scale_range_with, correlation_integral, dimension_reduction,
    estimate_d2, estimate_d2_auto, reshuffle_baseline, reshuffle_in_shapes, BaselineInterval,
    CorrelationCurve, CorrelationFit, FitOptions, PairCountOptions, PointSet,
};
pub use ingest::{parse_shots, write_shots_csv, Format, IngestReport, ShotRecord, ShotType};
pub use report::{analyze_shots, run_analysis, AnalysisReport, Outcome};
pub use stats::{
    aggregate_zone_counts, discontinuity_scan, distance_density, fgp_equality_test,
    outer_fraction_test, DiscontinuityScan, Histogram, ProportionTestResult, ScanOptions,
    TwoProportionResult, ZoneCounts,
};
pub use synth::{generate_synthetic, FgpPiece, SyntheticSpec};
