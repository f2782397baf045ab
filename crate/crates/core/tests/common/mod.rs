#![allow(dead_code)]

use hybrid_ecp::optics::{apply_bs, apply_cross_kerr, apply_hwp, apply_pbs, apply_phase_flip, apply_vbs, KerrSetting, PbsRouting};
use hybrid_ecp::state::{CoherentRegister, PhotonRegister};
use hybrid_ecp::{HybridState, Ket, OverlapMode, Polarization, Result, SimConfig, C64};
use rand::Rng;

pub const PHOTON_MODES: [&str; 2] = ["x", "y"];
pub const COHERENT_MODES: [&str; 2] = ["p", "q"];

/// Amplitudes drawn from a small lattice so that kets collide and merge.
const LATTICE: [(f64, f64); 6] = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (1.5, 0.5), (-0.5, -1.5)];

pub fn random_amplitude<R: Rng>(rng: &mut R, continuous: bool, scale: f64) -> C64 {
    if continuous {
        C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
    } else {
        let (re, im) = LATTICE[rng.random_range(0..LATTICE.len())];
        C64::new(re, im)
    }
}

/// A normalized state over photon modes `x`, `y` (at most one photon each)
/// and coherent modes `p`, `q`. Ideal-mode states use lattice amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, mode: OverlapMode) -> HybridState {
    let cfg = SimConfig::default().with_overlap_mode(mode);
    let continuous = mode == OverlapMode::ExactOverlap;
    loop {
        let n = rng.random_range(1..=6);
        let mut kets = Vec::with_capacity(n);
        for _ in 0..n {
            let mut photons = PhotonRegister::new();
            for m in PHOTON_MODES {
                match rng.random_range(0..3) {
                    0 => {}
                    1 => photons.insert(m, Polarization::H).unwrap(),
                    _ => photons.insert(m, Polarization::V).unwrap(),
                }
            }
            let coherents = CoherentRegister::from_pairs(COHERENT_MODES.map(|m| (m, random_amplitude(rng, continuous, 2.0)))).unwrap();
            let coeff = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            kets.push(Ket::new(coeff, photons, coherents));
        }
        if let Ok(s) = HybridState::new(kets, cfg).and_then(|s| s.normalize()) {
            return s;
        }
    }
}

/// Every optical element with a random setting, applied to `s`.
pub fn apply_random_element<R: Rng>(rng: &mut R, s: &HybridState) -> Result<(String, HybridState)> {
    let theta = rng.random_range(-3.2..3.2);
    Ok(match rng.random_range(0..6) {
        0 => ("hwp".into(), apply_hwp(s, "x", theta)?),
        1 => ("pbs".into(), apply_pbs(s, &PbsRouting::new("x", "y", "u", "w")?)?),
        2 => ("bs".into(), apply_bs(s, "p", "q", "r", "t")?),
        3 => {
            let pol = if rng.random_bool(0.5) { Polarization::H } else { Polarization::V };
            ("vbs".into(), apply_vbs(s, "y", pol, "u", "w", rng.random_range(0.0..=1.0))?)
        }
        4 => ("kerr".into(), apply_cross_kerr(s, &KerrSetting::new("x", "q", theta, -0.5 * theta))?),
        _ => ("phase-flip".into(), apply_phase_flip(s, "y")?),
    })
}
