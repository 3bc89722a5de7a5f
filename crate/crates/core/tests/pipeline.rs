use std::fs;
use std::path::Path;

use shotdim::{
    generate_synthetic, run_analysis, write_shots_csv, AnalysisConfig, CourtModel, Error, FgpPiece,
    Format, Outcome, Region, SyntheticSpec,
};

fn synthetic_csv(dir: &Path, bias: Option<f64>, seed: u64) -> std::path::PathBuf {
    let spec = SyntheticSpec {
        n_shots: 6_000,
        outer_bias: bias,
        n_background: 8_000,
        background_min_ft: 0.0,
        background_max_ft: 35.0,
        fgp_by_distance: vec![
            FgpPiece {
                d_lo: 0.0,
                d_hi: 8.0,
                fgp: 0.6,
            },
            FgpPiece {
                d_lo: 8.0,
                d_hi: 22.0,
                fgp: 0.42,
            },
            FgpPiece {
                d_lo: 22.0,
                d_hi: 94.0,
                fgp: 0.36,
            },
        ],
        seed,
    };
    let shots = generate_synthetic(&spec, &CourtModel::default()).unwrap();
    let path = dir.join(format!("shots_{seed}.csv"));
    write_shots_csv(&shots, 0.1, fs::File::create(&path).unwrap()).unwrap();
    path
}

fn quick_config() -> AnalysisConfig {
    AnalysisConfig {
        trials: 20,
        seed: 3,
        ..AnalysisConfig::default()
    }
}

#[test]
fn biased_chart_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let input = synthetic_csv(dir.path(), Some(0.8), 1);
    let out = dir.path().join("out");
    let report = run_analysis(&input, Format::Csv, &quick_config(), &out).unwrap();

    assert_eq!(report.ingest.rejected, 0);
    assert_eq!(report.ingest.accepted, 14_000);
    for r in Region::THREE_POINT {
        let t = report.bias_tests[&r].ok().expect("bias test ran");
        assert!(t.significant && t.gap() > 0.2, "{r}: {t:?}");
        let f = report.fractal[&r].ok().expect("fractal ran");
        assert!(
            f.observed.d2 > 0.5 && f.observed.d2 < 2.2,
            "{r}: {}",
            f.observed.d2
        );
        assert!(report.equity[&r].ok().is_some());
    }
    let control = report.bias_tests[&Region::Control].ok().unwrap();
    assert!((control.baseline - 35.0 / 68.0).abs() < 1e-12);
    assert!(!control.significant, "{control:?}");
    let crest = &report.baselines[&Region::Crest];
    assert_eq!(crest.quoted_outer_fraction, Some(0.52));

    let Outcome::Ok(scan) = &report.scan else {
        panic!("scan skipped")
    };
    assert_eq!(scan.n_per_bin.iter().sum::<u64>(), 14_000);
    assert!(report.zone_counts.values().map(|c| c.attempts).sum::<u64>() >= 6_000);
    assert!(scan.fgp_per_bin[2].unwrap() > scan.fgp_per_bin[30].unwrap());

    for name in [
        "report.json",
        "fgp_by_distance.tsv",
        "distance_density.tsv",
        "correlation_crest.tsv",
        "correlation_left_corner.tsv",
        "correlation_right_corner.tsv",
        "zone_shots_sample.tsv",
    ] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(json["bias_tests"]["crest"]["ok"]["p_value"].is_number());
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = synthetic_csv(dir.path(), None, 2);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_analysis(&input, Format::Csv, &quick_config(), &a).unwrap();
    run_analysis(&input, Format::Csv, &quick_config(), &b).unwrap();
    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 6);
    for n in names {
        assert_eq!(
            fs::read(a.join(&n)).unwrap(),
            fs::read(b.join(&n)).unwrap(),
            "{n:?} differs"
        );
    }
}

#[test]
fn jsonl_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = synthetic_csv(dir.path(), Some(0.6), 4);
    let text = fs::read_to_string(&csv_path).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let mut jsonl = String::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let obj: serde_json::Map<String, serde_json::Value> = headers
            .iter()
            .zip(rec.iter())
            .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.to_string())))
            .collect();
        jsonl.push_str(&serde_json::to_string(&obj).unwrap());
        jsonl.push('\n');
    }
    let json_path = dir.path().join("shots.jsonl");
    fs::write(&json_path, jsonl).unwrap();
    let a = run_analysis(
        &csv_path,
        Format::Csv,
        &quick_config(),
        &dir.path().join("a"),
    )
    .unwrap();
    let b = run_analysis(
        &json_path,
        Format::Jsonl,
        &quick_config(),
        &dir.path().join("b"),
    )
    .unwrap();
    assert_eq!(a.zone_counts, b.zone_counts);
    assert_eq!(a.bias_tests, b.bias_tests);
    assert_eq!(a.fractal, b.fractal);
}

#[test]
fn sparse_regions_are_skipped_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("few.csv");
    fs::write(
        &input,
        "game_id,event_id,player_id,team_id,period,minutes_remaining,seconds_remaining,action_type,shot_type,\
         shot_zone,shot_distance,loc_x,loc_y,shot_made_flag\n\
         g,1,p,t,1,5,0,Jump Shot,3PT Field Goal,Above the Break 3,24.5,0,245,1\n\
         g,2,p,t,1,4,0,Jump Shot,2PT Field Goal,Mid-Range,15,0,150,0\n",
    )
    .unwrap();
    let report = run_analysis(
        &input,
        Format::Csv,
        &quick_config(),
        &dir.path().join("out"),
    )
    .unwrap();
    assert!(report
        .fractal
        .values()
        .all(|f| matches!(f, Outcome::Skipped(_))));
    assert!(report
        .bias_tests
        .values()
        .all(|t| matches!(t, Outcome::Skipped(_))));
    assert!(!report.warnings.is_empty());
}

#[test]
fn unusable_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad_header = dir.path().join("bad.csv");
    fs::write(&bad_header, "a,b,c\n1,2,3\n").unwrap();
    assert!(matches!(
        run_analysis(&bad_header, Format::Csv, &quick_config(), dir.path()),
        Err(Error::BadHeader(_))
    ));

    let all_rejected = dir.path().join("rejected.jsonl");
    fs::write(&all_rejected, "{\"game_id\": 1}\nnot json\n").unwrap();
    assert!(matches!(
        run_analysis(&all_rejected, Format::Jsonl, &quick_config(), dir.path()),
        Err(Error::EmptyInput)
    ));

    assert!(matches!(
        run_analysis(
            &dir.path().join("missing.csv"),
            Format::Csv,
            &quick_config(),
            dir.path()
        ),
        Err(Error::Io(_))
    ));
}
