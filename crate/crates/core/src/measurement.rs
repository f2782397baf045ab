//! Projective measurements, detectors and post-selection.
//!
//! Every measurement enumerates all of its outcomes with exact probabilities.
//! The probability of an outcome is the squared norm of the projected state
//! under the active overlap mode. [`sample`] then picks one outcome from an
//! enumeration with a seeded generator. Measured photons and measured coherent
//! modes are removed from the post-measurement state.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{HybridState, Ket, ModeId, Polarization, C64};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarizationBasis {
    HV,
    PlusMinus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub label: String,
    pub probability: f64,
    /// Normalized post-measurement state; absent when the probability is
    /// below the prune tolerance.
    pub post_state: Option<HybridState>,
}

/// Builds an outcome from unnormalized projected kets. Returns `None` when
/// nothing survives canonicalization.
fn outcome(label: impl Into<String>, s: &HybridState, kets: Vec<Ket>) -> Result<Option<MeasurementOutcome>> {
    let projected = HybridState::new(kets, *s.config())?;
    if projected.is_empty() {
        return Ok(None);
    }
    let probability = projected.norm_sqr().max(0.0);
    let post_state = if probability >= s.config().prune_tol { Some(projected.normalize()?) } else { None };
    Ok(Some(MeasurementOutcome { label: label.into(), probability, post_state }))
}

pub fn measure_polarization(s: &HybridState, mode: impl Into<ModeId>, basis: PolarizationBasis) -> Result<Vec<MeasurementOutcome>> {
    let mode = mode.into();
    let h = FRAC_1_SQRT_2;
    // ⟨outcome|H⟩, ⟨outcome|V⟩
    let projectors: [(&str, f64, f64); 2] = match basis {
        PolarizationBasis::HV => [("H", 1.0, 0.0), ("V", 0.0, 1.0)],
        PolarizationBasis::PlusMinus => [("+", h, h), ("-", h, -h)],
    };
    let mut found = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut pols = ket.photons.in_mode(&mode);
        match (pols.next(), pols.next()) {
            (Some(p), None) => found.push(p),
            _ => {
                return Err(Error::InvalidMeasurement(format!("every ket must hold exactly one photon in `{mode}`")));
            }
        }
    }
    let mut outcomes = Vec::with_capacity(2);
    for (label, on_h, on_v) in projectors {
        let kets = s
            .kets()
            .iter()
            .zip(&found)
            .filter_map(|(ket, &pol)| {
                let amp = if pol == Polarization::H { on_h } else { on_v };
                (amp != 0.0).then(|| {
                    let mut k = ket.clone();
                    k.photons.remove(&mode, pol);
                    k.coeff *= amp;
                    k
                })
            })
            .collect();
        outcomes.extend(outcome(label, s, kets)?);
    }
    Ok(outcomes)
}

/// Result of conditioning on exactly one photon in each listed mode.
#[derive(Clone, Debug, PartialEq)]
pub struct PostSelection {
    pub state: Option<HybridState>,
    pub probability: f64,
}

/// The accepted (`"pass"`) and rejected (`"fail"`) parts of the one-photon-per-mode
/// condition, as a two-outcome measurement. Photons are not consumed.
pub fn one_photon_each_outcomes(s: &HybridState, modes: &[ModeId]) -> Result<Vec<MeasurementOutcome>> {
    if modes.is_empty() {
        return Err(Error::InvalidParameter("post-selection needs at least one mode".into()));
    }
    let (pass, fail): (Vec<Ket>, Vec<Ket>) = s.kets().iter().cloned().partition(|k| modes.iter().all(|m| k.photons.count_in(m) == 1));
    let mut outcomes = Vec::with_capacity(2);
    outcomes.extend(outcome("pass", s, pass)?);
    outcomes.extend(outcome("fail", s, fail)?);
    Ok(outcomes)
}

pub fn postselect_one_photon_each(s: &HybridState, modes: &[ModeId]) -> Result<PostSelection> {
    let pass = one_photon_each_outcomes(s, modes)?.into_iter().find(|o| o.label == "pass");
    Ok(match pass {
        Some(o) => PostSelection { state: o.post_state, probability: o.probability },
        None => PostSelection { state: None, probability: 0.0 },
    })
}

/// Threshold detector on `mode`.
///
/// A click consumes the photons when every clicking ket holds the same
/// polarization pattern in `mode`. A detector that cannot resolve
/// polarization leaves a mixture otherwise, so in that case the photons are
/// kept in place as an unread record and the post state stays pure.
pub fn detect_photon(s: &HybridState, mode: impl Into<ModeId>) -> Result<Vec<MeasurementOutcome>> {
    let mode = mode.into();
    let (mut click, dark): (Vec<Ket>, Vec<Ket>) = s.kets().iter().cloned().partition(|k| k.photons.count_in(&mode) > 0);
    let pattern = |k: &Ket| k.photons.in_mode(&mode).collect::<Vec<_>>();
    if let Some(first) = click.first().map(pattern) {
        if click.iter().all(|k| pattern(k) == first) {
            for k in &mut click {
                for &pol in &first {
                    k.photons.remove(&mode, pol);
                }
            }
        }
    }
    let mut outcomes = Vec::with_capacity(2);
    outcomes.extend(outcome("no-click", s, dark)?);
    outcomes.extend(outcome("click", s, click)?);
    Ok(outcomes)
}

/// Photon-number cutoff used when enumerating `|n⟩⟨n|` on a coherent mode.
pub fn photon_number_cutoff(max_amplitude: f64) -> usize {
    (max_amplitude * max_amplitude + 10.0 * max_amplitude + 10.0).ceil() as usize
}

/// Photon-number projection on a coherent mode. A ket with amplitude `α`
/// contributes `e^{−|α|²/2} αⁿ/√n!` to outcome `n`; the mode is removed.
pub fn measure_photon_number(s: &HybridState, mode: impl Into<ModeId>) -> Result<Vec<MeasurementOutcome>> {
    let mode = mode.into();
    let mut base = Vec::with_capacity(s.len());
    let mut amps = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        let alpha = k.coherents.remove(&mode).ok_or_else(|| Error::MissingMode(mode.clone()))?;
        base.push(k);
        amps.push(alpha);
    }
    let max_amp = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let n_max = photon_number_cutoff(max_amp);
    // running e^{−|α|²/2} αⁿ/√n! per ket
    let mut factors: Vec<C64> = amps.iter().map(|a| C64::new((-a.norm_sqr() / 2.0).exp(), 0.0)).collect();
    let mut outcomes = Vec::new();
    for n in 0..=n_max {
        if n > 0 {
            let root = (n as f64).sqrt();
            for (f, a) in factors.iter_mut().zip(&amps) {
                *f *= a / root;
            }
        }
        let kets = base
            .iter()
            .zip(&factors)
            .map(|(k, f)| Ket { coeff: k.coeff * f, ..k.clone() })
            .collect();
        outcomes.extend(outcome(format!("n={n}"), s, kets)?);
    }
    Ok(outcomes)
}

/// `|⟨α|α e^{2iθ}⟩| = exp(−|α|²(1 − cos 2θ))`, the overlap between the
/// unshifted and shifted probe states. Small values mean the phase classes
/// are well separated.
pub fn phase_class_overlap(alpha_ref: C64, theta: f64) -> f64 {
    (-alpha_ref.norm_sqr() * (1.0 - (2.0 * theta).cos())).exp()
}

/// Ideal homodyne readout of the probe into two classes: unshifted
/// (`"shift0"`) and shifted by ±2θ (`"shift2theta"`, signs merged).
pub fn homodyne_phase_class(s: &HybridState, probe_mode: impl Into<ModeId>, theta: f64, alpha_ref: C64) -> Result<Vec<MeasurementOutcome>> {
    let probe = probe_mode.into();
    let tol = s.config().prune_tol * alpha_ref.norm().max(1.0);
    let shifted = [alpha_ref * C64::from_polar(1.0, 2.0 * theta), alpha_ref * C64::from_polar(1.0, -2.0 * theta)];
    if (shifted[0] - alpha_ref).norm() <= tol {
        return Err(Error::InvalidParameter(format!("phase shift 2θ = {} is indistinguishable from zero", 2.0 * theta)));
    }
    let mut zero = Vec::new();
    let mut moved = Vec::new();
    for ket in s.kets() {
        let mut k = ket.clone();
        let amp = k.coherents.remove(&probe).ok_or_else(|| Error::MissingMode(probe.clone()))?;
        if (amp - alpha_ref).norm() <= tol {
            zero.push(k);
        } else if shifted.iter().any(|x| (amp - x).norm() <= tol) {
            moved.push(k);
        } else {
            return Err(Error::UnmodeledProbe(amp));
        }
    }
    let mut outcomes = Vec::with_capacity(2);
    outcomes.extend(outcome("shift0", s, zero)?);
    outcomes.extend(outcome("shift2theta", s, moved)?);
    Ok(outcomes)
}

/// Inverse-CDF draw of an index from a probability vector summing to 1.
pub fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> Result<usize> {
    if probabilities.is_empty() {
        return Err(Error::MalformedDistribution("no outcomes".into()));
    }
    if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::MalformedDistribution(format!("invalid probability {p}")));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::MalformedDistribution(format!("probabilities sum to {total}")));
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    // u landed in the rounding gap above the last partial sum
    Ok(probabilities.iter().rposition(|p| *p > 0.0).unwrap_or(probabilities.len() - 1))
}

pub fn sample<'a, R: Rng + ?Sized>(outcomes: &'a [MeasurementOutcome], rng: &mut R) -> Result<&'a MeasurementOutcome> {
    let probs: Vec<f64> = outcomes.iter().map(|o| o.probability).collect();
    Ok(&outcomes[sample_index(&probs, rng)?])
}
