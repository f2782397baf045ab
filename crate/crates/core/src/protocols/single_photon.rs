//! One hybrid state plus a single photon prepared as `a|H⟩ + b|V⟩`.
//!
//! Only Alice measures, and she only ever tells the others whether to keep
//! their share, so the classical communication is one-way.

use std::f64::consts::FRAC_1_SQRT_2;

use super::bs::pair;
use super::tree::{coherent_party, indexed, photon_party, Node, Tree, ALICE};
use super::{ProtocolParams, Verdict};
use crate::error::Result;
use crate::measurement::{measure_polarization, one_photon_each_outcomes, PolarizationBasis};
use crate::optics::{apply_bit_flip, apply_pbs, apply_phase_flip, propagate, PbsRouting};
use crate::state::{HybridState, ModeId, SimConfig, C64};

/// Photon modes of the output: `c1` for Alice, untouched `a1_j` for the rest.
fn output_photons(n: usize) -> Vec<ModeId> {
    std::iter::once(ModeId::new("c1")).chain((2..=n).map(|j| indexed("a1", j, n))).collect()
}

pub(super) fn target(p: &ProtocolParams, n: usize, m: usize, cfg: SimConfig) -> Result<HybridState> {
    let h = C64::from(FRAC_1_SQRT_2);
    let coh: Vec<(ModeId, C64)> = (1..=m).map(|k| (indexed("b1", k, m), p.beta)).collect();
    HybridState::hybrid_entangled(h, h, &output_photons(n), &coh, cfg)
}

pub(super) fn metadata(n: usize, m: usize) -> Vec<(&'static str, String)> {
    let a1 = indexed("a1", 1, n);
    vec![
        ("wiring", format!("ancilla a|H>+b|V> in a2; bit-flip a2; a2 -> a3; PBS({a1},a3->c2,c1); postselect one photon in c1 and c2; measure c2 in +/-")),
        ("correction", "phase flip on c1 after a '-' outcome".into()),
        ("parties", format!("{n} photon, {m} coherent")),
    ]
}

pub(super) fn explore(p: &ProtocolParams, n: usize, m: usize, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let a1: Vec<ModeId> = (1..=n).map(|j| indexed("a1", j, n)).collect();
    let b1: Vec<ModeId> = (1..=m).map(|k| indexed("b1", k, m)).collect();
    let ancilla = HybridState::single_photon("a2", C64::from(p.a), C64::from(p.b), cfg)?;
    let s = pair(p, &a1, &b1, cfg)?.tensor(&ancilla)?;
    let s = apply_bit_flip(&s, "a2")?;
    let s = propagate(&s, "a2", "a3")?;
    let s = apply_pbs(&s, &PbsRouting::new(&a1[0], "a3", "c2", "c1")?)?;
    let outcomes = one_photon_each_outcomes(&s, &["c1".into(), "c2".into()])?;
    let others: Vec<String> = (2..=n).map(photon_party).chain((1..=m).map(coherent_party)).collect();

    for (label, mut node) in tree.split(Node::root(s), "postselect c1,c2", outcomes)? {
        let keep = label == "pass";
        for o in &others {
            node.say(ALICE, o, if keep { "keep" } else { "discard" });
        }
        if !keep {
            tree.finish(node, Verdict::Failure)?;
            continue;
        }
        let outcomes = measure_polarization(&node.state, "c2", PolarizationBasis::PlusMinus)?;
        for (sign, mut leaf) in tree.split(node, "c2 in +/-", outcomes)? {
            if sign == "-" {
                leaf.correct("phase-flip c1", |s| apply_phase_flip(s, "c1"))?;
            }
            tree.finish(leaf, Verdict::Success)?;
        }
    }
    Ok(())
}
