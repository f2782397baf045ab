//! Linear-optical and cross-Kerr elements as pure transforms on [`HybridState`].
//!
//! Every element here is unitary on the subspace it is applied to and maps
//! coherent states to coherent states, so each transform is a per-ket rewrite
//! of the registers followed by canonicalization.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::state::{HybridState, Ket, ModeId, Polarization, C64};

/// Port assignment of a polarizing beam splitter.
///
/// H is transmitted and V reflected, so `(in1, H) → out1`, `(in1, V) → out2`,
/// `(in2, H) → out2` and `(in2, V) → out1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbsRouting {
    pub in1: ModeId,
    pub in2: ModeId,
    pub out1: ModeId,
    pub out2: ModeId,
}

impl PbsRouting {
    pub fn new(in1: impl Into<ModeId>, in2: impl Into<ModeId>, out1: impl Into<ModeId>, out2: impl Into<ModeId>) -> Result<Self> {
        let r = PbsRouting { in1: in1.into(), in2: in2.into(), out1: out1.into(), out2: out2.into() };
        let ids = [&r.in1, &r.in2, &r.out1, &r.out2];
        for i in 0..4 {
            for j in i + 1..4 {
                if ids[i] == ids[j] {
                    return Err(Error::InvalidParameter(format!("PBS ports must be distinct, `{}` repeated", ids[i])));
                }
            }
        }
        Ok(r)
    }

    fn route(&self, mode: &ModeId, pol: Polarization) -> Option<ModeId> {
        match pol {
            Polarization::H if *mode == self.in1 => Some(self.out1.clone()),
            Polarization::V if *mode == self.in1 => Some(self.out2.clone()),
            Polarization::H if *mode == self.in2 => Some(self.out2.clone()),
            Polarization::V if *mode == self.in2 => Some(self.out1.clone()),
            _ => None,
        }
    }
}

/// Cross-Kerr coupling between the photons in `photon_mode` and the coherent
/// probe in `probe_mode`. Each H photon contributes a phase `theta_h` to the
/// probe, each V photon `theta_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct KerrSetting {
    pub photon_mode: ModeId,
    pub probe_mode: ModeId,
    pub theta_h: f64,
    pub theta_v: f64,
}

impl KerrSetting {
    pub fn new(photon_mode: impl Into<ModeId>, probe_mode: impl Into<ModeId>, theta_h: f64, theta_v: f64) -> Self {
        KerrSetting { photon_mode: photon_mode.into(), probe_mode: probe_mode.into(), theta_h, theta_v }
    }
}

fn single_photon_in(ket: &Ket, mode: &ModeId) -> Result<Option<Polarization>> {
    let mut pols = ket.photons.in_mode(mode);
    let first = pols.next();
    if pols.next().is_some() {
        return Err(Error::InvalidMeasurement(format!("mode `{mode}` holds two photons")));
    }
    Ok(first)
}

fn rebuild(s: &HybridState, kets: Vec<Ket>) -> Result<HybridState> {
    HybridState::new(kets, *s.config())
}

/// Half-wave-plate rotation by `angle` on the photon in `mode`:
/// `|H⟩ → cos|H⟩ + sin|V⟩`, `|V⟩ → −sin|H⟩ + cos|V⟩`.
pub fn apply_hwp(s: &HybridState, mode: impl Into<ModeId>, angle: f64) -> Result<HybridState> {
    let mode = mode.into();
    let (sin, cos) = angle.sin_cos();
    let mut out = Vec::with_capacity(s.len() * 2);
    for ket in s.kets() {
        let Some(pol) = single_photon_in(ket, &mode)? else {
            out.push(ket.clone());
            continue;
        };
        let (to_h, to_v) = match pol {
            Polarization::H => (cos, sin),
            Polarization::V => (-sin, cos),
        };
        for (target, factor) in [(Polarization::H, to_h), (Polarization::V, to_v)] {
            let mut k = ket.clone();
            k.photons.remove(&mode, pol);
            k.photons.insert(mode.clone(), target)?;
            k.coeff *= factor;
            out.push(k);
        }
    }
    rebuild(s, out)
}

/// Exact `H ↔ V` exchange on the photon in `mode`.
///
/// Equal to `−(phase_flip ∘ hwp(π/2))`; unlike the bare π/2 rotation it adds
/// no relative sign between the two polarizations.
pub fn apply_bit_flip(s: &HybridState, mode: impl Into<ModeId>) -> Result<HybridState> {
    let mode = mode.into();
    let mut out = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        if let Some(pol) = single_photon_in(ket, &mode)? {
            k.photons.remove(&mode, pol);
            k.photons.insert(mode.clone(), pol.flipped())?;
        }
        out.push(k);
    }
    rebuild(s, out)
}

/// Moves every photon in `from` into `to` (a free-space path between elements).
pub fn propagate(s: &HybridState, from: impl Into<ModeId>, to: impl Into<ModeId>) -> Result<HybridState> {
    let (from, to) = (from.into(), to.into());
    let mut out = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        for pol in ket.photons.in_mode(&from) {
            k.photons.remove(&from, pol);
        }
        for pol in ket.photons.in_mode(&from) {
            k.photons.insert(to.clone(), pol)?;
        }
        out.push(k);
    }
    rebuild(s, out)
}

pub fn apply_pbs(s: &HybridState, routing: &PbsRouting) -> Result<HybridState> {
    let mut out = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        let moving: Vec<(ModeId, Polarization, ModeId)> = ket
            .photons
            .iter()
            .filter_map(|(m, p)| routing.route(m, *p).map(|dest| (m.clone(), *p, dest)))
            .collect();
        for (m, p, _) in &moving {
            k.photons.remove(m, *p);
        }
        for (_, p, dest) in moving {
            k.photons.insert(dest, p)?;
        }
        out.push(k);
    }
    rebuild(s, out)
}

/// 50:50 beam splitter on two coherent modes:
/// `(α₁, α₂) → ((α₁+α₂)/√2, (α₁−α₂)/√2)` written to `(out1, out2)`.
pub fn apply_bs(
    s: &HybridState,
    in1: impl Into<ModeId>,
    in2: impl Into<ModeId>,
    out1: impl Into<ModeId>,
    out2: impl Into<ModeId>,
) -> Result<HybridState> {
    let (in1, in2, out1, out2) = (in1.into(), in2.into(), out1.into(), out2.into());
    if in1 == in2 || out1 == out2 {
        return Err(Error::InvalidParameter("beam-splitter ports must be distinct".into()));
    }
    let mut out = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        let a1 = k.coherents.remove(&in1).ok_or_else(|| Error::MissingMode(in1.clone()))?;
        let a2 = k.coherents.remove(&in2).ok_or_else(|| Error::MissingMode(in2.clone()))?;
        for m in [&out1, &out2] {
            if k.coherents.contains(m) {
                return Err(Error::ModeCollision(m.clone()));
            }
        }
        k.coherents.set(out1.clone(), (a1 + a2) * FRAC_1_SQRT_2);
        k.coherents.set(out2.clone(), (a1 - a2) * FRAC_1_SQRT_2);
        out.push(k);
    }
    rebuild(s, out)
}

/// Variable beam splitter acting on the `pol` component of `in_mode`: the
/// photon leaves through `out_t` with amplitude `reflectance` and through
/// `out_r` with amplitude `√(1 − reflectance²)`.
pub fn apply_vbs(
    s: &HybridState,
    in_mode: impl Into<ModeId>,
    pol: Polarization,
    out_t: impl Into<ModeId>,
    out_r: impl Into<ModeId>,
    reflectance: f64,
) -> Result<HybridState> {
    if !(0.0..=1.0).contains(&reflectance) {
        return Err(Error::InvalidParameter(format!("reflectance {reflectance} outside [0, 1]")));
    }
    let (in_mode, out_t, out_r) = (in_mode.into(), out_t.into(), out_r.into());
    if out_t == out_r || out_t == in_mode || out_r == in_mode {
        return Err(Error::InvalidParameter("VBS ports must be distinct".into()));
    }
    let transmitted = (1.0 - reflectance * reflectance).max(0.0).sqrt();
    let mut out = Vec::with_capacity(s.len() * 2);
    for ket in s.kets() {
        if !ket.photons.contains(&in_mode, pol) {
            out.push(ket.clone());
            continue;
        }
        for (dest, factor) in [(&out_t, reflectance), (&out_r, transmitted)] {
            let mut k = ket.clone();
            k.photons.remove(&in_mode, pol);
            k.photons.insert(dest.clone(), pol)?;
            k.coeff *= factor;
            out.push(k);
        }
    }
    rebuild(s, out)
}

pub fn apply_cross_kerr(s: &HybridState, setting: &KerrSetting) -> Result<HybridState> {
    let mut out = Vec::with_capacity(s.len());
    for ket in s.kets() {
        let mut k = ket.clone();
        let probe = k.coherents.get(&setting.probe_mode).ok_or_else(|| Error::MissingMode(setting.probe_mode.clone()))?;
        let phase: f64 = ket
            .photons
            .in_mode(&setting.photon_mode)
            .map(|p| match p {
                Polarization::H => setting.theta_h,
                Polarization::V => setting.theta_v,
            })
            .sum();
        k.coherents.set(setting.probe_mode.clone(), probe * C64::from_polar(1.0, phase));
        out.push(k);
    }
    rebuild(s, out)
}

/// Negates every ket holding a V photon in `mode` (a local σz).
pub fn apply_phase_flip(s: &HybridState, mode: impl Into<ModeId>) -> Result<HybridState> {
    let mode = mode.into();
    let kets = s
        .kets()
        .iter()
        .map(|ket| {
            let mut k = ket.clone();
            if k.photons.contains(&mode, Polarization::V) {
                k.coeff = -k.coeff;
            }
            k
        })
        .collect();
    rebuild(s, kets)
}
