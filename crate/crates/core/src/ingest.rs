//! Shot-chart ingestion.
//!
//! Reads shot records from the canonical delimited-text schema or from
//! JSON lines with the same keys, validates them and converts locations to
//! feet with the basket center at the origin. Rows that fail validation are
//! counted by reason in an [`IngestReport`]; they are never repaired.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of the canonical CSV schema.
pub const CSV_HEADER: [&str; 14] = [
    "game_id",
    "event_id",
    "player_id",
    "team_id",
    "period",
    "minutes_remaining",
    "seconds_remaining",
    "action_type",
    "shot_type",
    "shot_zone",
    "shot_distance",
    "loc_x",
    "loc_y",
    "shot_made_flag",
];

/// Feet per source location unit for the common tenths-of-feet convention.
pub const DEFAULT_UNIT_SCALE: f64 = 0.1;

/// Allowed gap between the reported (integer-rounded) distance and the
/// distance implied by the location.
pub const DISTANCE_TOLERANCE_FT: f64 = 1.0;

pub const MAX_SHOT_DISTANCE_FT: f64 = 94.0;

/// Lowest admissible y: the baseline sits 5.25 ft behind the basket center.
pub const MIN_Y_FT: f64 = -5.25;

// float slack when comparing against the tolerances above
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShotType {
    TwoPoint,
    ThreePoint,
}

impl ShotType {
    pub fn source_label(self) -> &'static str {
        match self {
            ShotType::TwoPoint => "2PT Field Goal",
            ShotType::ThreePoint => "3PT Field Goal",
        }
    }

    pub fn points(self) -> u32 {
        match self {
            ShotType::TwoPoint => 2,
            ShotType::ThreePoint => 3,
        }
    }

    pub fn is_three(self) -> bool {
        self == ShotType::ThreePoint
    }
}

impl FromStr for ShotType {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("2PT Field Goal") {
            Ok(ShotType::TwoPoint)
        } else if s.eq_ignore_ascii_case("3PT Field Goal") {
            Ok(ShotType::ThreePoint)
        } else {
            Err(())
        }
    }
}

/// One shot event, locations in feet with the basket at the origin, x along
/// the baseline and y toward half-court.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub game_id: String,
    pub event_id: String,
    pub player_id: String,
    pub team_id: String,
    pub period: u32,
    pub clock_remaining_s: u32,
    pub action_type: String,
    pub shot_type: ShotType,
    pub shot_zone: String,
    pub shot_distance_ft: f64,
    pub x_ft: f64,
    pub y_ft: f64,
    pub made: bool,
}

impl ShotRecord {
    /// Distance from the basket implied by the location.
    pub fn location_distance(&self) -> f64 {
        self.x_ft.hypot(self.y_ft)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub total_rows: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub rejection_reasons: BTreeMap<String, usize>,
}

impl IngestReport {
    fn reject(&mut self, reason: &str) {
        self.rejected += 1;
        *self
            .rejection_reasons
            .entry(reason.to_string())
            .or_insert(0) += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "ndjson" => Ok(Format::Jsonl),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Parse a whole shot file. Input order is preserved among accepted rows.
pub fn parse_shots<R: Read>(
    mut source: R,
    format: Format,
    unit_scale: f64,
) -> Result<(Vec<ShotRecord>, IngestReport)> {
    if !(unit_scale > 0.0 && unit_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "unit_scale must be positive, got {unit_scale}"
        )));
    }
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8)?;

    match format {
        Format::Csv => parse_csv(&text, unit_scale),
        Format::Jsonl => parse_jsonl(&text, unit_scale),
    }
}

fn parse_csv(text: &str, unit_scale: f64) -> Result<(Vec<ShotRecord>, IngestReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(text.as_bytes());

    let header = rdr.headers()?.clone();
    let matches = header.len() == CSV_HEADER.len()
        && header
            .iter()
            .zip(CSV_HEADER)
            .all(|(got, want)| got.trim().eq_ignore_ascii_case(want));
    if !matches {
        return Err(Error::BadHeader(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut shots = Vec::new();
    let mut report = IngestReport::default();
    for row in rdr.records() {
        report.total_rows += 1;
        let row = match row {
            Ok(r) => r,
            Err(_) => {
                report.reject("malformed_row");
                continue;
            }
        };
        if row.len() != CSV_HEADER.len() {
            report.reject("wrong_field_count");
            continue;
        }
        let fields: Vec<&str> = row.iter().collect();
        match validate(&fields, unit_scale) {
            Ok(rec) => {
                report.accepted += 1;
                shots.push(rec);
            }
            Err(reason) => report.reject(reason),
        }
    }
    Ok((shots, report))
}

fn parse_jsonl(text: &str, unit_scale: f64) -> Result<(Vec<ShotRecord>, IngestReport)> {
    let mut shots = Vec::new();
    let mut report = IngestReport::default();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        report.total_rows += 1;
        let obj = match serde_json::from_str::<serde_json::Value>(line) {
            Ok(serde_json::Value::Object(map)) => map,
            _ => {
                report.reject("malformed_json");
                continue;
            }
        };
        let mut owned = Vec::with_capacity(CSV_HEADER.len());
        let mut missing = false;
        for key in CSV_HEADER {
            match obj.get(key) {
                Some(serde_json::Value::String(s)) => owned.push(s.clone()),
                Some(serde_json::Value::Number(n)) => owned.push(n.to_string()),
                Some(serde_json::Value::Bool(b)) => owned.push(if *b { "1" } else { "0" }.into()),
                _ => {
                    missing = true;
                    break;
                }
            }
        }
        if missing {
            report.reject("missing_field");
            continue;
        }
        let fields: Vec<&str> = owned.iter().map(String::as_str).collect();
        match validate(&fields, unit_scale) {
            Ok(rec) => {
                report.accepted += 1;
                shots.push(rec);
            }
            Err(reason) => report.reject(reason),
        }
    }
    Ok((shots, report))
}

fn parse_int(s: &str) -> Option<i64> {
    let s = s.trim();
    s.parse::<i64>().ok().or_else(|| {
        // some exports write integral columns as "3.0"
        let f = s.parse::<f64>().ok()?;
        (f.fract() == 0.0 && f.abs() < 1e15).then_some(f as i64)
    })
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Field order follows [`CSV_HEADER`]. Returns the rejection reason on failure.
fn validate(f: &[&str], unit_scale: f64) -> std::result::Result<ShotRecord, &'static str> {
    let period = parse_int(f[4]).ok_or("bad_period")?;
    if period < 1 || period > u32::MAX as i64 {
        return Err("bad_period");
    }
    let minutes = parse_int(f[5]).ok_or("bad_clock")?;
    let seconds = parse_int(f[6]).ok_or("bad_clock")?;
    if minutes < 0 || seconds < 0 || minutes > 1_000_000 || seconds > 1_000_000 {
        return Err("bad_clock");
    }
    let shot_type: ShotType = f[8].parse().map_err(|_| "bad_shot_type")?;
    let distance = parse_real(f[10]).ok_or("bad_number")?;
    let loc_x = parse_real(f[11]).ok_or("bad_number")?;
    let loc_y = parse_real(f[12]).ok_or("bad_number")?;
    let made = match f[13].trim() {
        "1" => true,
        "0" => false,
        _ => return Err("bad_made_flag"),
    };

    if distance < 0.0 {
        return Err("negative_distance");
    }
    let x_ft = loc_x * unit_scale;
    let y_ft = loc_y * unit_scale;
    if distance > MAX_SHOT_DISTANCE_FT || y_ft < MIN_Y_FT - EPS {
        return Err("out_of_bounds");
    }
    if (x_ft.hypot(y_ft) - distance).abs() > DISTANCE_TOLERANCE_FT + EPS {
        return Err("distance_mismatch");
    }

    Ok(ShotRecord {
        game_id: f[0].trim().to_string(),
        event_id: f[1].trim().to_string(),
        player_id: f[2].trim().to_string(),
        team_id: f[3].trim().to_string(),
        period: period as u32,
        clock_remaining_s: (minutes * 60 + seconds) as u32,
        action_type: f[7].trim().to_string(),
        shot_type,
        shot_zone: f[9].trim().to_string(),
        shot_distance_ft: distance,
        x_ft,
        y_ft,
        made,
    })
}

/// Write records in the canonical CSV schema, locations divided by `unit_scale`.
pub fn write_shots_csv<W: Write>(shots: &[ShotRecord], unit_scale: f64, out: W) -> Result<()> {
    if !(unit_scale > 0.0 && unit_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "unit_scale must be positive, got {unit_scale}"
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in shots {
        w.write_record([
            s.game_id.clone(),
            s.event_id.clone(),
            s.player_id.clone(),
            s.team_id.clone(),
            s.period.to_string(),
            (s.clock_remaining_s / 60).to_string(),
            (s.clock_remaining_s % 60).to_string(),
            s.action_type.clone(),
            s.shot_type.source_label().to_string(),
            s.shot_zone.clone(),
            s.shot_distance_ft.to_string(),
            (s.x_ft / unit_scale).to_string(),
            (s.y_ft / unit_scale).to_string(),
            if s.made { "1" } else { "0" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_with(rows: &[&str]) -> String {
        let mut s = CSV_HEADER.join(",");
        for r in rows {
            s.push('\n');
            s.push_str(r);
        }
        s.push('\n');
        s
    }

    fn parse(text: &str) -> (Vec<ShotRecord>, IngestReport) {
        parse_shots(text.as_bytes(), Format::Csv, DEFAULT_UNIT_SCALE).unwrap()
    }

    #[test]
    fn at_rim_origin() {
        let (shots, rep) = parse(&csv_with(&[
            "g1,1,p,t,1,11,30,Layup,2PT Field Goal,Restricted Area,0,0,0,1",
        ]));
        assert_eq!(rep.accepted, 1);
        let s = &shots[0];
        assert_eq!(
            (s.x_ft, s.y_ft, s.shot_distance_ft, s.made),
            (0.0, 0.0, 0.0, true)
        );
        assert_eq!(s.clock_remaining_s, 11 * 60 + 30);
        assert_eq!(s.shot_type, ShotType::TwoPoint);
    }

    #[test]
    fn tenths_of_feet_location() {
        let (shots, rep) = parse(&csv_with(&[
            "g1,2,p,t,2,0,5,Jump Shot,3PT Field Goal,Above the Break 3,23,-10,230,0",
        ]));
        assert_eq!(rep.accepted, 1);
        let s = &shots[0];
        assert!((s.x_ft + 1.0).abs() < 1e-12);
        assert!((s.y_ft - 23.0).abs() < 1e-12);
        // hypot(1, 23) = 23.0217 by hand
        assert!((s.location_distance() - 23.021728866442675).abs() < 1e-9);
        assert!(!s.made);
    }

    #[test]
    fn distance_mismatch_rejected() {
        let (shots, rep) = parse(&csv_with(&[
            "g1,3,p,t,1,5,0,Jump Shot,2PT Field Goal,Mid-Range,23,0,400,0",
            "g1,4,p,t,1,5,0,Jump Shot,2PT Field Goal,Mid-Range,10,0,100,1",
        ]));
        assert_eq!(shots.len(), 1);
        assert_eq!(rep.total_rows, 2);
        assert_eq!(rep.rejected, 1);
        assert_eq!(rep.rejection_reasons["distance_mismatch"], 1);
    }

    #[test]
    fn per_row_rejection_reasons() {
        let (shots, rep) = parse(&csv_with(&[
            "g,1,p,t,0,5,0,J,2PT Field Goal,z,10,0,100,1",
            "g,2,p,t,1,-1,0,J,2PT Field Goal,z,10,0,100,1",
            "g,3,p,t,1,5,0,J,4PT Field Goal,z,10,0,100,1",
            "g,4,p,t,1,5,0,J,2PT Field Goal,z,abc,0,100,1",
            "g,5,p,t,1,5,0,J,2PT Field Goal,z,10,0,100,2",
            "g,6,p,t,1,5,0,J,2PT Field Goal,z,10,0,100",
            "g,7,p,t,1,5,0,J,3PT Field Goal,z,95,0,950,0",
            "g,8,p,t,1,5,0,J,2PT Field Goal,z,6,0,-60,0",
            "g,9,p,t,1,5,0,J,2PT Field Goal,z,-1,0,0,0",
            "g,10,p,t,1,5,0,J,2PT Field Goal,z,10,0,100,1",
        ]));
        assert_eq!(shots.len(), 1);
        assert_eq!(shots[0].event_id, "10");
        assert_eq!(rep.accepted + rep.rejected, rep.total_rows);
        let r = &rep.rejection_reasons;
        assert_eq!(r["bad_period"], 1);
        assert_eq!(r["bad_clock"], 1);
        assert_eq!(r["bad_shot_type"], 1);
        assert_eq!(r["bad_number"], 1);
        assert_eq!(r["bad_made_flag"], 1);
        assert_eq!(r["wrong_field_count"], 1);
        assert_eq!(r["out_of_bounds"], 2);
        assert_eq!(r["negative_distance"], 1);
    }

    #[test]
    fn bad_header_is_fatal() {
        let err = parse_shots("a,b,c\n1,2,3\n".as_bytes(), Format::Csv, 0.1).unwrap_err();
        assert!(matches!(err, Error::BadHeader(_)));
    }

    #[test]
    fn header_case_insensitive() {
        let mut text = CSV_HEADER.join(",").to_uppercase();
        text.push_str("\ng,1,p,t,1,5,0,J,2PT Field Goal,z,10,0,100,1\n");
        let (shots, _) = parse_shots(text.as_bytes(), Format::Csv, 0.1).unwrap();
        assert_eq!(shots.len(), 1);
    }

    #[test]
    fn invalid_utf8_is_fatal() {
        let bytes: &[u8] = &[0xff, 0xfe, b'\n'];
        assert!(matches!(
            parse_shots(bytes, Format::Csv, 0.1),
            Err(Error::NotUtf8)
        ));
    }

    #[test]
    fn unknown_format_tag() {
        assert!(matches!(
            "xml".parse::<Format>(),
            Err(Error::UnknownFormat(_))
        ));
        assert_eq!("JSONL".parse::<Format>().unwrap(), Format::Jsonl);
    }

    #[test]
    fn nonpositive_unit_scale() {
        let text = csv_with(&[]);
        assert!(parse_shots(text.as_bytes(), Format::Csv, 0.0).is_err());
    }

    #[test]
    fn jsonl_numbers_and_strings() {
        let text = concat!(
            r#"{"game_id":21400001,"event_id":"2","player_id":"p","team_id":"t","period":1,"minutes_remaining":3,"seconds_remaining":4,"action_type":"Jump Shot","shot_type":"3PT Field Goal","shot_zone":"Left Corner 3","shot_distance":22,"loc_x":-220,"loc_y":10,"shot_made_flag":1}"#,
            "\n\n",
            "not json\n",
            r#"{"game_id":"g"}"#,
            "\n"
        );
        let (shots, rep) = parse_shots(text.as_bytes(), Format::Jsonl, 0.1).unwrap();
        assert_eq!(rep.total_rows, 3);
        assert_eq!(rep.accepted, 1);
        assert_eq!(rep.rejection_reasons["malformed_json"], 1);
        assert_eq!(rep.rejection_reasons["missing_field"], 1);
        assert_eq!(shots[0].game_id, "21400001");
        assert!((shots[0].x_ft + 22.0).abs() < 1e-12);
        assert_eq!(shots[0].clock_remaining_s, 184);
    }

    #[test]
    fn deterministic() {
        let text = csv_with(&[
            "g,1,p,t,1,5,0,J,2PT Field Goal,z,10,0,100,1",
            "g,2,p,t,1,5,0,J,2PT Field Goal,z,99,0,100,1",
        ]);
        assert_eq!(parse(&text), parse(&text));
    }
}
