//! Closed-form yields and checks of the simulator against them.
//!
//! Yield is the number of maximally entangled pairs obtained per input pair.
//! All functions take `a` and use `b = √(1 − a²)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocols::{run_protocol, ProtocolId, ProtocolParams};
use crate::state::SimConfig;

fn check_a(a: f64) -> Result<f64> {
    if a > 0.0 && a < 1.0 {
        Ok(1.0 - a * a)
    } else {
        Err(Error::InvalidParameter(format!("coefficient a = {a} outside (0, 1)")))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("round count must be at least 1".into()))
    }
}

/// Two-copy protocols: `a²b²` pairs per input pair.
pub fn yield_bs(a: f64) -> Result<f64> {
    Ok(a * a * check_a(a)?)
}

/// One-copy protocols with a single-photon ancilla: `2a²b²`.
pub fn yield_single(a: f64) -> Result<f64> {
    Ok(2.0 * a * a * check_a(a)?)
}

/// Unconditional success probability of each parity-check round.
///
/// Round `j` succeeds with `2a_j²b_j²` given that all earlier rounds failed,
/// and a failure maps `(a, b)` to `(a², b²)/√(a⁴ + b⁴)`.
pub fn yield_qnd_rounds(a: f64, k: usize) -> Result<Vec<f64>> {
    let b2 = check_a(a)?;
    check_k(k)?;
    let (mut x, mut y) = (a * a, b2);
    let mut remaining = 1.0;
    let mut rounds = Vec::with_capacity(k);
    for _ in 0..k {
        let p = 2.0 * x * y;
        rounds.push(remaining * p);
        remaining *= 1.0 - p;
        let norm = x * x + y * y;
        (x, y) = (x * x / norm, y * y / norm);
    }
    Ok(rounds)
}

/// Product form of round `k`:
/// `2|ab|^(2^k) / Π_{j=2..k} (|a|^(2^j) + |b|^(2^j))`, evaluated in log space.
pub fn yield_qnd_round_closed(a: f64, k: usize) -> Result<f64> {
    let b2 = check_a(a)?;
    check_k(k)?;
    let (la, lb) = ((a * a).ln(), b2.ln());
    let pow = |j: usize| 2f64.powi(j as i32 - 1);
    let mut log = 2f64.ln() + pow(k) * (la + lb);
    for j in 2..=k {
        let (x, y) = (pow(j) * la, pow(j) * lb);
        let m = x.max(y);
        log -= m + ((x - m).exp() + (y - m).exp()).ln();
    }
    Ok(log.exp())
}

pub fn yield_qnd_total(a: f64, k: usize) -> Result<f64> {
    Ok(yield_qnd_rounds(a, k)?.iter().sum())
}

/// Variable-beam-splitter protocol: `2·min(a², b²)`.
pub fn yield_vbs(a: f64) -> Result<f64> {
    let b2 = check_a(a)?;
    Ok(2.0 * (a * a).min(b2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YieldRow {
    pub a: f64,
    pub y_bs: f64,
    pub y_single: f64,
    pub y_qnd_total: f64,
    pub y_vbs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YieldCurve {
    pub k: usize,
    pub rows: Vec<YieldRow>,
}

/// `a = start, start + step, …, ≤ end`, computed as `start + i·step`.
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start <= end) {
        return Err(Error::InvalidParameter(format!("bad grid {start}..{end} step {step}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// The 99-point grid `0.01, 0.02, …, 0.99`.
pub fn default_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

pub fn sweep_yields(grid: &[f64], k: usize) -> Result<YieldCurve> {
    check_k(k)?;
    let rows = grid
        .iter()
        .map(|&a| {
            Ok(YieldRow { a, y_bs: yield_bs(a)?, y_single: yield_single(a)?, y_qnd_total: yield_qnd_total(a, k)?, y_vbs: yield_vbs(a)? })
        })
        .collect::<Result<_>>()?;
    Ok(YieldCurve { k, rows })
}

/// Formats with 12 significant digits, no exponent for ordinary magnitudes.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let digits = 11 - x.abs().log10().floor() as i32;
    if (0..=30).contains(&digits) {
        let s = format!("{x:.*}", digits as usize);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

impl YieldCurve {
    pub fn header(&self) -> String {
        format!("a,Y_bs,Y_single,Y_qnd_total_K{},Y_vbs", self.k)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", sig12(r.a), sig12(r.y_bs), sig12(r.y_single), sig12(r.y_qnd_total), sig12(r.y_vbs));
        }
        out
    }

    /// Largest `|Y_qnd_total − Y_vbs|` over the grid.
    pub fn max_qnd_vbs_gap(&self) -> f64 {
        self.rows.iter().map(|r| (r.y_qnd_total - r.y_vbs).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub protocol: ProtocolId,
    pub simulated: f64,
    pub expected: f64,
    pub abs_error: f64,
    /// Per-round errors for the QND protocol.
    pub round_errors: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Runs the exact enumeration and compares it with the closed form.
pub fn verify(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig) -> Result<VerifyReport> {
    let result = run_protocol(id, p, cfg)?;
    let (expected, round_errors) = match id {
        ProtocolId::Vbs => (yield_vbs(p.a)?, Vec::new()),
        ProtocolId::Qnd => {
            let rounds = yield_qnd_rounds(p.a, p.k_max)?;
            let errs = rounds.iter().zip(&result.rounds).map(|(x, y)| (x - y).abs()).collect();
            (rounds.iter().sum(), errs)
        }
        _ => (yield_single(p.a)?, Vec::new()),
    };
    let abs_error = (result.success_probability - expected).abs();
    let worst = round_errors.iter().copied().fold(abs_error, f64::max);
    Ok(VerifyReport {
        protocol: id,
        simulated: result.success_probability,
        expected,
        abs_error,
        round_errors,
        tolerance: VERIFY_TOLERANCE,
        passed: worst <= VERIFY_TOLERANCE,
    })
}
