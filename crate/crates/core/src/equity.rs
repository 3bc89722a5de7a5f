//! Court equity: expected points of a shot, FGP times its point value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::ZoneCounts;

/// FGP ratio (outer over inner) at which a three-point zone and its
/// two-point neighbour yield the same expected points.
pub const EQUAL_EQUITY_RATIO: f64 = 2.0 / 3.0;

pub fn equity(fgp: f64, is_three: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&fgp) {
        return Err(Error::InvalidParameter(format!(
            "fgp must lie in [0, 1], got {fgp}"
        )));
    }
    Ok(if is_three { 3.0 * fgp } else { 2.0 * fgp })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquityResult {
    pub fgp_in: f64,
    pub fgp_out: f64,
    pub equity_in: f64,
    pub equity_out: f64,
    /// `fgp_out / fgp_in` needed for equal equity.
    pub ratio_required: f64,
    pub ratio_observed: f64,
    pub equity_gap: f64,
}

/// Equity of a two-point inner zone against its three-point outer zone,
/// from pooled zone FGPs.
pub fn zone_equity_report(counts_in: &ZoneCounts, counts_out: &ZoneCounts) -> Result<EquityResult> {
    let (Some(fgp_in), Some(fgp_out)) = (counts_in.fgp(), counts_out.fgp()) else {
        return Err(Error::ZeroAttempts);
    };
    if fgp_in == 0.0 {
        return Err(Error::ZeroInsideFgp);
    }
    let equity_in = equity(fgp_in, false)?;
    let equity_out = equity(fgp_out, true)?;
    Ok(EquityResult {
        fgp_in,
        fgp_out,
        equity_in,
        equity_out,
        ratio_required: EQUAL_EQUITY_RATIO,
        ratio_observed: fgp_out / fgp_in,
        equity_gap: equity_out - equity_in,
    })
}
