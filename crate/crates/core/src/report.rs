//! The full analysis pipeline and its report.
//!
//! ingest -> zone counts -> bias tests -> FGP tests -> correlation dimension
//! with reshuffle baselines -> equity -> discontinuity scan -> density.
//! Per-region failures are recorded as skipped entries with a warning; they
//! do not abort the run.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::court::{
    baseline_outer_fraction, classify_shot, make_study_zones, region_pair, Region, ZoneLabel,
    ZoneSpec,
};
use crate::equity::{zone_equity_report, EquityResult};
use crate::error::{Error, Result};
use crate::fractal::{
    dimension_reduction, estimate_d2_auto, reshuffle_baseline, BaselineInterval, CorrelationFit,
    PointSet,
};
use crate::ingest::{parse_shots, Format, IngestReport, ShotRecord};
use crate::stats::{
    aggregate_zone_counts, discontinuity_scan, distance_density, fgp_equality_test,
    outer_fraction_test, DiscontinuityScan, Histogram, ProportionTestResult, TwoProportionResult,
    ZoneCounts,
};

/// Commonly quoted crest baseline, shown next to the geometric value for
/// comparison only.
pub const QUOTED_CREST_BASELINE: f64 = 0.52;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Skipped(String),
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Skipped(_) => None,
        }
    }

    fn from_result(r: Result<T>, what: &str, region: Region, warnings: &mut Vec<String>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => {
                warnings.push(format!("{region}: {what} skipped: {e}"));
                Outcome::Skipped(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBaseline {
    pub inner_area_sq_ft: f64,
    pub outer_area_sq_ft: f64,
    pub outer_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quoted_outer_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFractal {
    pub observed: CorrelationFit,
    pub baseline: BaselineInterval,
    pub reduction: f64,
    pub below_baseline: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub config_echo: AnalysisConfig,
    pub ingest: IngestReport,
    pub zone_counts: BTreeMap<ZoneLabel, ZoneCounts>,
    pub baselines: BTreeMap<Region, RegionBaseline>,
    pub bias_tests: BTreeMap<Region, Outcome<ProportionTestResult>>,
    pub fgp_tests: BTreeMap<Region, Outcome<TwoProportionResult>>,
    pub fractal: BTreeMap<Region, Outcome<RegionFractal>>,
    pub equity: BTreeMap<Region, Outcome<EquityResult>>,
    pub scan: Outcome<DiscontinuityScan>,
    pub density: Outcome<Histogram>,
    pub warnings: Vec<String>,
}

fn region_seed(seed: u64, region: Region) -> u64 {
    let idx = Region::ALL.iter().position(|&r| r == region).unwrap() as u64;
    seed ^ (idx + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn region_points(shots: &[ShotRecord], zones: &[ZoneSpec], region: Region) -> Vec<[f64; 2]> {
    shots
        .iter()
        .filter(|s| classify_shot(s, zones).is_some_and(|l| l.region() == region))
        .map(|s| [s.x_ft, s.y_ft])
        .collect()
}

fn region_fractal(
    shots: &[ShotRecord],
    zones: &[ZoneSpec],
    region: Region,
    cfg: &AnalysisConfig,
) -> Result<RegionFractal> {
    let (zi, zo) = region_pair(zones, region).expect("study zones cover every region");
    let points = PointSet::new(region_points(shots, zones, region))?;
    let mut fit_opts = cfg.fit;
    fit_opts.pairs.seed = region_seed(cfg.seed, region);
    let observed = estimate_d2_auto(&points, &fit_opts)?;
    let baseline = reshuffle_baseline(
        &zi,
        &zo,
        points.len(),
        cfg.trials,
        region_seed(cfg.seed, region),
        &fit_opts,
    )?;
    let reduction = dimension_reduction(observed.d2, &baseline)?;
    Ok(RegionFractal {
        below_baseline: observed.d2 < baseline.lo,
        observed,
        baseline,
        reduction,
    })
}

/// Runs every analysis on already-ingested shots.
pub fn analyze_shots(
    shots: &[ShotRecord],
    ingest: IngestReport,
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    cfg.validate()?;
    let zones = make_study_zones(&cfg.court);
    let zone_counts = aggregate_zone_counts(shots, &zones);
    let mut warnings = Vec::new();

    let mut baselines = BTreeMap::new();
    let mut bias_tests = BTreeMap::new();
    for region in Region::ALL {
        let (zi, zo) = region_pair(&zones, region).expect("study zones cover every region");
        let frac = baseline_outer_fraction(&zi, &zo)?;
        baselines.insert(
            region,
            RegionBaseline {
                inner_area_sq_ft: zi.area(),
                outer_area_sq_ft: zo.area(),
                outer_fraction: frac,
                quoted_outer_fraction: (region == Region::Crest).then_some(QUOTED_CREST_BASELINE),
            },
        );
        let test = outer_fraction_test(
            &zone_counts[&zi.label],
            &zone_counts[&zo.label],
            frac,
            cfg.alpha,
        );
        bias_tests.insert(
            region,
            Outcome::from_result(test, "bias test", region, &mut warnings),
        );
    }

    let mut fgp_tests = BTreeMap::new();
    let mut equity = BTreeMap::new();
    for region in Region::THREE_POINT {
        let ci = &zone_counts[&region.inner()];
        let co = &zone_counts[&region.outer()];
        let t = fgp_equality_test(co, ci, cfg.alpha);
        fgp_tests.insert(
            region,
            Outcome::from_result(t, "fgp test", region, &mut warnings),
        );
        let e = zone_equity_report(ci, co);
        equity.insert(
            region,
            Outcome::from_result(e, "equity", region, &mut warnings),
        );
    }

    let fractal_results: Vec<(Region, Result<RegionFractal>)> = Region::THREE_POINT
        .par_iter()
        .map(|&r| (r, region_fractal(shots, &zones, r, cfg)))
        .collect();
    let mut fractal = BTreeMap::new();
    for (region, r) in fractal_results {
        fractal.insert(
            region,
            Outcome::from_result(r, "fractal dimension", region, &mut warnings),
        );
    }

    let scan = match discontinuity_scan(shots, &cfg.scan) {
        Ok(s) => Outcome::Ok(s),
        Err(e) => {
            warnings.push(format!("discontinuity scan skipped: {e}"));
            Outcome::Skipped(e.to_string())
        }
    };
    let density = match distance_density(shots, cfg.density_bin_width_ft) {
        Ok(h) => Outcome::Ok(h),
        Err(e) => {
            warnings.push(format!("distance density skipped: {e}"));
            Outcome::Skipped(e.to_string())
        }
    };

    Ok(AnalysisReport {
        config_echo: cfg.clone(),
        ingest,
        zone_counts,
        baselines,
        bias_tests,
        fgp_tests,
        fractal,
        equity,
        scan,
        density,
        warnings,
    })
}

/// Reads `input`, analyzes it and writes `report.json` plus plot data into
/// `out_dir`.
pub fn run_analysis(
    input: &Path,
    format: Format,
    cfg: &AnalysisConfig,
    out_dir: &Path,
) -> Result<AnalysisReport> {
    cfg.validate()?;
    let file = File::open(input)?;
    let (shots, ingest) = parse_shots(file, format, cfg.unit_scale)?;
    if shots.is_empty() {
        return Err(Error::EmptyInput);
    }
    let report = analyze_shots(&shots, ingest, cfg)?;
    write_outputs(&report, &shots, out_dir)?;
    Ok(report)
}

fn tsv(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn write_outputs(report: &AnalysisReport, shots: &[ShotRecord], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    fs::write(out_dir.join("report.json"), json)?;

    if let Outcome::Ok(scan) = &report.scan {
        let rows = (0..scan.n_per_bin.len()).map(|i| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                scan.bin_edges_ft[i],
                scan.bin_edges_ft[i + 1],
                scan.n_per_bin[i],
                scan.made_per_bin[i],
                opt(scan.fgp_per_bin[i]),
                opt(scan.adjacent_p_values.get(i).copied().flatten()),
            )
        });
        tsv(
            &out_dir.join("fgp_by_distance.tsv"),
            "d_lo\td_hi\tattempts\tmade\tfgp\tp_next",
            rows,
        )?;
    }

    if let Outcome::Ok(h) = &report.density {
        let rows = (0..h.counts.len()).map(|i| {
            format!(
                "{}\t{}\t{}\t{}",
                h.bin_edges[i],
                h.bin_edges[i + 1],
                h.counts[i],
                h.densities[i]
            )
        });
        tsv(
            &out_dir.join("distance_density.tsv"),
            "d_lo\td_hi\tcount\tdensity",
            rows,
        )?;
    }

    for (region, f) in &report.fractal {
        if let Outcome::Ok(f) = f {
            let c = &f.observed.curve;
            let rows = c
                .radii
                .iter()
                .zip(&c.c_of_r)
                .map(|(r, v)| format!("{r}\t{v}\t{}\t{}", r.ln(), v.ln()));
            tsv(
                &out_dir.join(format!("correlation_{region}.tsv")),
                "r\tc\tln_r\tln_c",
                rows,
            )?;
        }
    }

    let zones = make_study_zones(&report.config_echo.court);
    let in_zone: Vec<(&ShotRecord, ZoneLabel)> = shots
        .iter()
        .filter_map(|s| classify_shot(s, &zones).map(|l| (s, l)))
        .collect();
    let keep = report.config_echo.sample_points.min(in_zone.len());
    let mut rng = ChaCha8Rng::seed_from_u64(report.config_echo.seed);
    let mut picked = sample(&mut rng, in_zone.len(), keep).into_vec();
    picked.sort_unstable();
    let rows = picked.into_iter().map(|i| {
        let (s, l) = in_zone[i];
        format!("{l}\t{}\t{}\t{}", s.x_ft, s.y_ft, s.made as u8)
    });
    tsv(
        &out_dir.join("zone_shots_sample.tsv"),
        "zone\tx_ft\ty_ft\tmade",
        rows,
    )?;
    Ok(())
}
