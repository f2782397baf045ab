//! Hybrid polarization/coherent-state kets and their exact linear algebra.
//!
//! A [`HybridState`] is a finite superposition of [`Ket`]s. Each ket carries a
//! complex coefficient, a register of single photons labelled by spatial mode
//! and polarization, and a register of coherent-state amplitudes keyed by
//! mode. Coherent states are never expanded in the Fock basis: every optical
//! element used here maps coherent states to coherent states, so the amplitude
//! is the whole description.
//!
//! Two coherent states `|α⟩` and `|β⟩` are not orthogonal. How that is treated
//! is controlled by [`OverlapMode`]:
//!
//! * [`OverlapMode::IdealOrthogonal`] treats distinct amplitudes as perfectly
//!   distinguishable (the large-amplitude limit).
//! * [`OverlapMode::ExactOverlap`] uses `⟨α|β⟩ = exp(-(|α|²+|β|²)/2 + α*β)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Symbolic spatial-mode label such as `a1`, `c2` or `d1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(Arc<str>);

impl ModeId {
    pub fn new(label: impl AsRef<str>) -> Self {
        ModeId(Arc::from(label.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ModeId {
    fn from(s: &str) -> Self {
        ModeId::new(s)
    }
}

impl From<String> for ModeId {
    fn from(s: String) -> Self {
        ModeId(Arc::from(s))
    }
}

impl From<&ModeId> for ModeId {
    fn from(m: &ModeId) -> Self {
        m.clone()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

/// Occupation set of `(mode, polarization)` pairs, each holding zero or one
/// photon. A mode may carry two photons only if their polarizations differ.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonRegister(BTreeSet<(ModeId, Polarization)>);

impl PhotonRegister {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, M>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, Polarization)>,
        M: Into<ModeId>,
    {
        let mut reg = Self::new();
        for (mode, pol) in pairs {
            reg.insert(mode, pol)?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, mode: impl Into<ModeId>, pol: Polarization) -> Result<()> {
        let mode = mode.into();
        if !self.0.insert((mode.clone(), pol)) {
            return Err(Error::Occupancy { mode, pol });
        }
        Ok(())
    }

    pub fn remove(&mut self, mode: &ModeId, pol: Polarization) -> bool {
        self.0.remove(&(mode.clone(), pol))
    }

    pub fn contains(&self, mode: &ModeId, pol: Polarization) -> bool {
        self.0.contains(&(mode.clone(), pol))
    }

    /// Polarizations of the photons currently in `mode`.
    pub fn in_mode<'a>(&'a self, mode: &'a ModeId) -> impl Iterator<Item = Polarization> + 'a {
        self.0.iter().filter(move |(m, _)| m == mode).map(|(_, p)| *p)
    }

    pub fn count_in(&self, mode: &ModeId) -> usize {
        self.in_mode(mode).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ModeId, Polarization)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn modes(&self) -> BTreeSet<ModeId> {
        self.0.iter().map(|(m, _)| m.clone()).collect()
    }
}

/// Coherent amplitude per mode; an amplitude of zero is the vacuum.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoherentRegister(BTreeMap<ModeId, C64>);

impl CoherentRegister {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, M>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, C64)>,
        M: Into<ModeId>,
    {
        let mut reg = Self::new();
        for (mode, amp) in pairs {
            let mode = mode.into();
            if reg.0.insert(mode.clone(), amp).is_some() {
                return Err(Error::ModeCollision(mode));
            }
        }
        Ok(reg)
    }

    pub fn get(&self, mode: &ModeId) -> Option<C64> {
        self.0.get(mode).copied()
    }

    pub fn set(&mut self, mode: impl Into<ModeId>, amp: C64) {
        self.0.insert(mode.into(), amp);
    }

    pub fn remove(&mut self, mode: &ModeId) -> Option<C64> {
        self.0.remove(mode)
    }

    pub fn contains(&self, mode: &ModeId) -> bool {
        self.0.contains_key(mode)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeId, &C64)> {
        self.0.iter()
    }

    pub fn domain(&self) -> BTreeSet<ModeId> {
        self.0.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    pub coeff: C64,
    pub photons: PhotonRegister,
    pub coherents: CoherentRegister,
}

impl Ket {
    pub fn new(coeff: C64, photons: PhotonRegister, coherents: CoherentRegister) -> Self {
        Ket { coeff, photons, coherents }
    }

    /// A ket with empty registers; the identity for [`HybridState::tensor`].
    pub fn scalar(coeff: C64) -> Self {
        Ket::new(coeff, PhotonRegister::new(), CoherentRegister::new())
    }

    pub fn with_photon(mut self, mode: impl Into<ModeId>, pol: Polarization) -> Result<Self> {
        self.photons.insert(mode, pol)?;
        Ok(self)
    }

    pub fn with_coherent(mut self, mode: impl Into<ModeId>, amp: C64) -> Result<Self> {
        let mode = mode.into();
        if self.coherents.contains(&mode) {
            return Err(Error::ModeCollision(mode));
        }
        self.coherents.set(mode, amp);
        Ok(self)
    }

    fn same_registers(&self, other: &Ket, tol: f64) -> bool {
        self.photons == other.photons
            && self.coherents.len() == other.coherents.len()
            && self.coherents.iter().zip(other.coherents.iter()).all(|((m1, a1), (m2, a2))| m1 == m2 && (a1 - a2).norm() <= tol)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum OverlapMode {
    #[serde(rename = "ideal")]
    IdealOrthogonal,
    #[serde(rename = "exact")]
    ExactOverlap,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub overlap_mode: OverlapMode,
    pub prune_tol: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { overlap_mode: OverlapMode::IdealOrthogonal, prune_tol: 1e-12, seed: 0 }
    }
}

impl SimConfig {
    pub fn new(overlap_mode: OverlapMode, prune_tol: f64, seed: u64) -> Result<Self> {
        let cfg = SimConfig { overlap_mode, prune_tol, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn exact() -> Self {
        SimConfig { overlap_mode: OverlapMode::ExactOverlap, ..Self::default() }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SimConfig { seed, ..self }
    }

    pub fn with_overlap_mode(self, overlap_mode: OverlapMode) -> Self {
        SimConfig { overlap_mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.prune_tol > 0.0 && self.prune_tol < 1e-6) {
            return Err(Error::InvalidParameter(format!("prune_tol {} outside (0, 1e-6)", self.prune_tol)));
        }
        Ok(())
    }
}

/// `⟨α|β⟩ = exp(-(|α|²+|β|²)/2 + conj(α)·β)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (-(alpha.norm_sqr() + beta.norm_sqr()) / 2.0 + alpha.conj() * beta).exp()
}

fn mode_overlap(a: C64, b: C64, mode: OverlapMode, tol: f64) -> C64 {
    match mode {
        OverlapMode::IdealOrthogonal => {
            if (a - b).norm() <= tol {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }
        OverlapMode::ExactOverlap => coherent_overlap(a, b),
    }
}

// Both registers are assumed to share a domain.
fn register_overlap(a: &CoherentRegister, b: &CoherentRegister, mode: OverlapMode, tol: f64) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for ((_, x), (_, y)) in a.0.iter().zip(b.0.iter()) {
        acc *= mode_overlap(*x, *y, mode, tol);
        if acc == C64::new(0.0, 0.0) {
            break;
        }
    }
    acc
}

// Amplitudes are compared on a 1e-12 grid for ordering and merging.
fn quantize(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

fn quantized(k: &Ket) -> impl Iterator<Item = (&ModeId, i64, i64)> {
    k.coherents.0.iter().map(|(m, a)| (m, quantize(a.re), quantize(a.im)))
}

fn canonical_cmp(x: &Ket, y: &Ket) -> Ordering {
    x.photons.cmp(&y.photons).then_with(|| quantized(x).cmp(quantized(y)))
}

/// A finite superposition of kets sharing one coherent-mode domain.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    kets: Vec<Ket>,
    config: SimConfig,
}

impl HybridState {
    /// Validates the kets and returns the canonical form.
    pub fn new(kets: Vec<Ket>, config: SimConfig) -> Result<Self> {
        Ok(Self::from_raw(kets, config)?.canonicalize())
    }

    /// Validates the kets but keeps them exactly as given.
    pub fn from_raw(kets: Vec<Ket>, config: SimConfig) -> Result<Self> {
        config.validate()?;
        if let Some(first) = kets.first() {
            for ket in &kets[1..] {
                if !ket.coherents.0.keys().eq(first.coherents.0.keys()) {
                    let domain = first.coherents.domain();
                    return Err(Error::Incompatible(format!(
                        "kets disagree on coherent domain: {:?} vs {:?}",
                        domain,
                        ket.coherents.domain()
                    )));
                }
            }
        }
        Ok(HybridState { kets, config })
    }

    /// The one-ket state with empty registers and coefficient 1.
    pub fn unit(config: SimConfig) -> Self {
        HybridState { kets: vec![Ket::scalar(C64::new(1.0, 0.0))], config }
    }

    /// `a|H…H⟩|α₁…αₘ⟩ + b|V…V⟩|−α₁…−αₘ⟩` over the given photon and coherent
    /// modes. With one photon and one coherent mode this is the familiar
    /// less-entangled pair; `a = b = 1/√2` gives the maximal one.
    pub fn hybrid_entangled<M, K>(a: C64, b: C64, photon_modes: &[M], coherent_modes: &[(K, C64)], config: SimConfig) -> Result<Self>
    where
        M: Clone + Into<ModeId>,
        K: Clone + Into<ModeId>,
    {
        let mut kets = Vec::with_capacity(2);
        for (coeff, pol, sign) in [(a, Polarization::H, 1.0), (b, Polarization::V, -1.0)] {
            let photons = PhotonRegister::from_pairs(photon_modes.iter().cloned().map(|m| (m, pol)))?;
            let coherents = CoherentRegister::from_pairs(coherent_modes.iter().cloned().map(|(m, amp)| (m, amp * sign)))?;
            kets.push(Ket::new(coeff, photons, coherents));
        }
        Self::new(kets, config)
    }

    /// A single photon `h|H⟩ + v|V⟩` in `mode` with no coherent modes.
    pub fn single_photon(mode: impl Into<ModeId>, h: C64, v: C64, config: SimConfig) -> Result<Self> {
        let mode = mode.into();
        let kets = vec![
            Ket::scalar(h).with_photon(mode.clone(), Polarization::H)?,
            Ket::scalar(v).with_photon(mode, Polarization::V)?,
        ];
        Self::new(kets, config)
    }

    /// A coherent state `|α⟩` in `mode` with no photons.
    pub fn coherent(mode: impl Into<ModeId>, alpha: C64, config: SimConfig) -> Result<Self> {
        Self::new(vec![Ket::scalar(C64::new(1.0, 0.0)).with_coherent(mode, alpha)?], config)
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn into_kets(self) -> Vec<Ket> {
        self.kets
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.kets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kets.is_empty()
    }

    /// Coherent-mode domain, or `None` for a state with no kets.
    pub fn coherent_domain(&self) -> Option<BTreeSet<ModeId>> {
        self.kets.first().map(|k| k.coherents.domain())
    }

    pub fn photon_modes(&self) -> BTreeSet<ModeId> {
        self.kets.iter().flat_map(|k| k.photons.modes()).collect()
    }

    pub fn with_config(&self, config: SimConfig) -> Self {
        HybridState { kets: self.kets.clone(), config }
    }

    fn check_compatible(&self, other: &HybridState) -> Result<()> {
        if self.config.overlap_mode != other.config.overlap_mode {
            return Err(Error::Incompatible(format!(
                "overlap modes differ: {:?} vs {:?}",
                self.config.overlap_mode, other.config.overlap_mode
            )));
        }
        if let (Some(d1), Some(d2)) = (self.coherent_domain(), other.coherent_domain()) {
            if d1 != d2 {
                return Err(Error::Incompatible(format!("coherent domains differ: {d1:?} vs {d2:?}")));
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner_product(&self, other: &HybridState) -> Result<C64> {
        self.check_compatible(other)?;
        Ok(self.inner_unchecked(other))
    }

    fn inner_unchecked(&self, other: &HybridState) -> C64 {
        let mode = self.config.overlap_mode;
        let tol = self.config.prune_tol;
        let mut acc = C64::new(0.0, 0.0);
        for x in &self.kets {
            for y in &other.kets {
                if x.photons != y.photons {
                    continue;
                }
                acc += x.coeff.conj() * y.coeff * register_overlap(&x.coherents, &y.coherents, mode, tol);
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner_unchecked(self).re
    }

    pub fn tensor(&self, other: &HybridState) -> Result<HybridState> {
        if self.config.overlap_mode != other.config.overlap_mode {
            return Err(Error::Incompatible("overlap modes differ".into()));
        }
        let mine: BTreeSet<ModeId> = self.photon_modes().into_iter().chain(self.coherent_domain().unwrap_or_default()).collect();
        let theirs: BTreeSet<ModeId> = other.photon_modes().into_iter().chain(other.coherent_domain().unwrap_or_default()).collect();
        if let Some(clash) = mine.intersection(&theirs).next() {
            return Err(Error::ModeCollision(clash.clone()));
        }
        let mut kets = Vec::with_capacity(self.kets.len() * other.kets.len());
        for x in &self.kets {
            for y in &other.kets {
                let mut photons = x.photons.clone();
                for (m, p) in y.photons.iter() {
                    photons.insert(m.clone(), *p)?;
                }
                let mut coherents = x.coherents.clone();
                for (m, a) in y.coherents.iter() {
                    coherents.set(m.clone(), *a);
                }
                kets.push(Ket::new(x.coeff * y.coeff, photons, coherents));
            }
        }
        HybridState::new(kets, self.config)
    }

    /// Merges kets with equal registers, drops negligible coefficients and
    /// sorts into the canonical order.
    pub fn canonicalize(&self) -> HybridState {
        let mut sorted: Vec<&Ket> = self.kets.iter().collect();
        sorted.sort_by(|a, b| canonical_cmp(a, b));
        let mut merged: Vec<Ket> = Vec::with_capacity(sorted.len());
        for ket in sorted {
            match merged.last_mut() {
                Some(last) if canonical_cmp(last, ket).is_eq() => last.coeff += ket.coeff,
                _ => merged.push(ket.clone()),
            }
        }
        let tol = self.config.prune_tol;
        merged.retain(|k| k.coeff.norm() > tol);
        let kets = merged;
        HybridState { kets, config: self.config }
    }

    pub fn normalize(&self) -> Result<HybridState> {
        let canon = self.canonicalize();
        let n2 = canon.norm_sqr();
        let tol = self.config.prune_tol;
        if canon.kets.is_empty() || n2.is_nan() || n2 <= tol * tol {
            return Err(Error::VanishedBranch(n2));
        }
        Ok(canon.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> HybridState {
        let kets = self.kets.iter().map(|k| Ket { coeff: k.coeff * factor, ..k.clone() }).collect();
        HybridState { kets, config: self.config }
    }

    /// `|⟨target|self⟩|²`.
    pub fn fidelity(&self, target: &HybridState) -> Result<f64> {
        Ok(target.inner_product(self)?.norm_sqr())
    }

    /// True when both states describe the same registers with coefficients
    /// equal within `tol`. Coherent amplitudes are matched on the ideal
    /// orthogonality criterion regardless of the active overlap mode.
    pub fn approx_eq(&self, other: &HybridState, tol: f64) -> bool {
        if self.kets.len() != other.kets.len() {
            return false;
        }
        self.kets.iter().zip(&other.kets).all(|(x, y)| {
            x.same_registers(y, tol.max(self.config.prune_tol)) && (x.coeff - y.coeff).norm() <= tol
        })
    }
}
