//! Cross-Kerr parity check with recycling of failed rounds.
//!
//! Each round adds an ancilla photon prepared with the current coefficients,
//! couples both photons to a probe through two Kerr media with opposite
//! sign patterns, and reads the probe phase class. An unshifted probe means
//! even parity and success. A shifted probe leaves the pair in the same form
//! with coefficients `(a², b²)` renormalized, which is fed to the next round.

use std::f64::consts::FRAC_1_SQRT_2;

use super::bs::pair;
use super::tree::{Node, Tree, ALICE, BOB};
use super::{ProtocolParams, Verdict};
use crate::error::Result;
use crate::measurement::{homodyne_phase_class, measure_polarization, phase_class_overlap, PolarizationBasis};
use crate::optics::{apply_bit_flip, apply_cross_kerr, apply_phase_flip, propagate, KerrSetting};
use crate::state::{HybridState, SimConfig, C64};

const PROBE: &str = "p";

/// Coefficients for the round after a failed parity check.
pub fn next_coefficients(a: f64, b: f64) -> (f64, f64) {
    let (a2, b2) = (a * a, b * b);
    let norm = (a2 * a2 + b2 * b2).sqrt();
    (a2 / norm, b2 / norm)
}

pub(super) fn target(p: &ProtocolParams, cfg: SimConfig) -> Result<HybridState> {
    let h = C64::from(FRAC_1_SQRT_2);
    HybridState::hybrid_entangled(h, h, &["a1"], &[("b1", p.beta)], cfg)
}

pub(super) fn metadata(p: &ProtocolParams) -> Vec<(&'static str, String)> {
    vec![
        (
            "wiring",
            "ancilla a_k|H>+b_k|V> in a2; bit-flip a2; a2 -> a3; Kerr(a1 -> p: H -θ, V +θ); Kerr(a3 -> p: H +θ, V -θ); homodyne p; measure a3 in +/-".into(),
        ),
        ("correction", "phase flip on a1 after a '-' outcome, in both phase classes".into()),
        ("recycling", "shift2theta continues with a' = a^2/sqrt(a^4+b^4), b' = b^2/sqrt(a^4+b^4)".into()),
        ("homodyne_class_overlap", format!("{:e}", phase_class_overlap(p.alpha_probe, p.theta))),
        ("k_max", p.k_max.to_string()),
    ]
}

fn round_input(s: &HybridState, a: f64, b: f64, p: &ProtocolParams) -> Result<HybridState> {
    let cfg = *s.config();
    let ancilla = HybridState::single_photon("a2", C64::from(a), C64::from(b), cfg)?;
    let s = apply_bit_flip(&s.tensor(&ancilla)?, "a2")?;
    let s = propagate(&s, "a2", "a3")?;
    let s = s.tensor(&HybridState::coherent(PROBE, p.alpha_probe, cfg)?)?;
    let s = apply_cross_kerr(&s, &KerrSetting::new("a1", PROBE, -p.theta, p.theta))?;
    apply_cross_kerr(&s, &KerrSetting::new("a3", PROBE, p.theta, -p.theta))
}

pub(super) fn explore(p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let (mut a, mut b) = (p.a, p.b);
    let mut frontier = vec![Node::root(pair(p, &["a1".into()], &["b1".into()], cfg)?)];
    for k in 1..=p.k_max {
        let mut next = Vec::new();
        for mut node in frontier {
            node.round = Some(k);
            node.state = round_input(&node.state, a, b, p)?;
            let outcomes = homodyne_phase_class(&node.state, PROBE, p.theta, p.alpha_probe)?;
            for (class, checked) in tree.split(node, &format!("round {k}: homodyne p"), outcomes)? {
                let outcomes = measure_polarization(&checked.state, "a3", PolarizationBasis::PlusMinus)?;
                for (sign, mut leaf) in tree.split(checked, &format!("round {k}: a3 in +/-"), outcomes)? {
                    if sign == "-" {
                        leaf.correct("phase-flip a1", |s| apply_phase_flip(s, "a1"))?;
                    }
                    if class == "shift0" {
                        leaf.say(ALICE, BOB, "keep");
                        tree.finish(leaf, Verdict::Success)?;
                    } else if k == p.k_max {
                        leaf.say(ALICE, BOB, "discard");
                        tree.finish(leaf, Verdict::Failure)?;
                    } else {
                        leaf.say(ALICE, BOB, "retry");
                        next.push(leaf.clone());
                        tree.finish(leaf, Verdict::Recycled)?;
                    }
                }
            }
        }
        (a, b) = next_coefficients(a, b);
        frontier = next;
    }
    Ok(())
}
