//! Ancilla-free concentration with a variable beam splitter.
//!
//! The larger-amplitude polarization is attenuated to match the smaller one.
//! The VBS always acts on V, so when `a > b` the photon is bit-flipped before
//! the first PBS and flipped back on success.

use std::f64::consts::FRAC_1_SQRT_2;

use super::bs::pair;
use super::tree::{Node, Tree, ALICE, BOB};
use super::{ProtocolParams, Verdict};
use crate::error::Result;
use crate::measurement::detect_photon;
use crate::optics::{apply_bit_flip, apply_pbs, apply_vbs, PbsRouting};
use crate::state::{HybridState, Polarization, SimConfig, C64};

pub(super) fn target(p: &ProtocolParams, cfg: SimConfig) -> Result<HybridState> {
    let h = C64::from(FRAC_1_SQRT_2);
    HybridState::hybrid_entangled(h, h, &["a3"], &[("b1", p.beta)], cfg)
}

pub fn reflectance(a: f64, b: f64) -> f64 {
    a.min(b) / a.max(b)
}

pub(super) fn metadata(p: &ProtocolParams) -> Vec<(&'static str, String)> {
    let pre = if p.a > p.b { "bit-flip a1; " } else { "" };
    vec![
        ("wiring", format!("{pre}PBS1(a1,e1->a2,c1); VBS(c1 V -> c2 kept, c3 dumped); PBS2(a2,c2->a3,e2); detector on c3")),
        ("reflectance", format!("{}", reflectance(p.a, p.b))),
        ("pre_rotation", (p.a > p.b).to_string()),
    ]
}

pub(super) fn explore(p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let rotate = p.a > p.b;
    let mut s = pair(p, &["a1".into()], &["b1".into()], cfg)?;
    if rotate {
        s = apply_bit_flip(&s, "a1")?;
    }
    let s = apply_pbs(&s, &PbsRouting::new("a1", "e1", "a2", "c1")?)?;
    let s = apply_vbs(&s, "c1", Polarization::V, "c2", "c3", reflectance(p.a, p.b))?;
    let s = apply_pbs(&s, &PbsRouting::new("a2", "c2", "a3", "e2")?)?;
    let outcomes = detect_photon(&s, "c3")?;
    for (label, mut node) in tree.split(Node::root(s), "detector c3", outcomes)? {
        if label == "click" {
            node.say(ALICE, BOB, "discard");
            tree.finish(node, Verdict::Failure)?;
        } else {
            if rotate {
                node.correct("bit-flip a3", |s| apply_bit_flip(s, "a3"))?;
            }
            node.say(ALICE, BOB, "keep");
            tree.finish(node, Verdict::Success)?;
        }
    }
    Ok(())
}
