//! Two-copy protocols: the photons meet on a PBS, the coherent parts on a
//! 50:50 beam splitter (or a photon-number detector in the improved form).

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::tree::{coherent_party, indexed, photon_party, Node, Tree, ALICE, BOB};
use super::{ProtocolParams, Verdict};
use crate::error::Result;
use crate::measurement::{measure_photon_number, measure_polarization, one_photon_each_outcomes, PolarizationBasis};
use crate::optics::{apply_bit_flip, apply_bs, apply_pbs, apply_phase_flip, PbsRouting};
use crate::state::{HybridState, ModeId, SimConfig, C64};

pub(super) fn pair(p: &ProtocolParams, photons: &[ModeId], coherents: &[ModeId], cfg: SimConfig) -> Result<HybridState> {
    let coh: Vec<(ModeId, C64)> = coherents.iter().map(|m| (m.clone(), p.beta)).collect();
    HybridState::hybrid_entangled(C64::from(p.a), C64::from(p.b), photons, &coh, cfg)
}

fn modes(base: &str, count: usize) -> Vec<ModeId> {
    (1..=count).map(|j| indexed(base, j, count)).collect()
}

fn label_list(ms: &[ModeId]) -> String {
    ms.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(",")
}

pub(super) fn target_bs(p: &ProtocolParams, n: usize, m: usize, cfg: SimConfig) -> Result<HybridState> {
    let h = C64::from(FRAC_1_SQRT_2);
    let mut coh = Vec::with_capacity(2 * m);
    for k in 1..=m {
        coh.push((indexed("d1", k, m), C64::new(0.0, 0.0)));
        coh.push((indexed("d2", k, m), p.beta * SQRT_2));
    }
    HybridState::hybrid_entangled(h, h, &modes("c1", n), &coh, cfg)
}

pub(super) fn target_improved(p: &ProtocolParams, cfg: SimConfig) -> Result<HybridState> {
    let h = C64::from(FRAC_1_SQRT_2);
    HybridState::hybrid_entangled(h, h, &["c1"], &[("b1", p.beta)], cfg)
}

pub(super) fn metadata_bs(n: usize, m: usize) -> Vec<(&'static str, String)> {
    let (n_s, m_s) = if n == 1 && m == 1 { ("", "") } else { ("_j", "_k") };
    vec![
        ("wiring", format!("bit-flip a2{n_s}; PBS(a1{n_s},a2{n_s}->c2{n_s},c1{n_s}); BS(b1{m_s},b2{m_s}->d1{m_s},d2{m_s}); postselect one photon in every c mode; measure c2{n_s} in +/-")),
        ("correction", "phase flip on c1 when the number of '-' outcomes is odd".into()),
        ("parties", format!("{n} photon, {m} coherent")),
    ]
}

pub(super) fn metadata_improved() -> Vec<(&'static str, String)> {
    vec![
        ("wiring", "bit-flip a2; PBS(a1,a2->c2,c1); postselect one photon in c1 and c2; measure c2 in +/-; photon number on b2".into()),
        (
            "correction",
            "phase flip on c1 when exactly one of ('-' outcome, odd photon number) holds; the sign depends on the photon-number parity as well as the +/- result".into(),
        ),
    ]
}

pub(super) fn explore_bs(p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let s = pair(p, &["a1".into()], &["b1".into()], cfg)?.tensor(&pair(p, &["a2".into()], &["b2".into()], cfg)?)?;
    let s = apply_bit_flip(&s, "a2")?;
    let s = apply_pbs(&s, &PbsRouting::new("a1", "a2", "c2", "c1")?)?;
    let s = apply_bs(&s, "b1", "b2", "d1", "d2")?;
    let outcomes = one_photon_each_outcomes(&s, &["c1".into(), "c2".into()])?;
    for (label, mut node) in tree.split(Node::root(s), "postselect c1,c2", outcomes)? {
        if label == "fail" {
            node.say(ALICE, BOB, "discard");
            tree.finish(node, Verdict::Failure)?;
            continue;
        }
        node.say(ALICE, BOB, "keep");
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

pub(super) fn explore_improved(p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let s = pair(p, &["a1".into()], &["b1".into()], cfg)?.tensor(&pair(p, &["a2".into()], &["b2".into()], cfg)?)?;
    let s = apply_bit_flip(&s, "a2")?;
    let s = apply_pbs(&s, &PbsRouting::new("a1", "a2", "c2", "c1")?)?;
    let outcomes = one_photon_each_outcomes(&s, &["c1".into(), "c2".into()])?;
    for (label, mut node) in tree.split(Node::root(s), "postselect c1,c2", outcomes)? {
        if label == "fail" {
            node.say(ALICE, BOB, "discard");
            tree.finish(node, Verdict::Failure)?;
            continue;
        }
        node.say(ALICE, BOB, "keep");
        let outcomes = measure_polarization(&node.state, "c2", PolarizationBasis::PlusMinus)?;
        for (sign, signed) in tree.split(node, "c2 in +/-", outcomes)? {
            let outcomes = measure_photon_number(&signed.state, "b2")?;
            for (n_label, mut leaf) in tree.split(signed, "b2 photon number", outcomes)? {
                leaf.say(BOB, ALICE, n_label.clone());
                let odd = n_label.trim_start_matches("n=").parse::<usize>().map(|n| n % 2 == 1).unwrap_or(false);
                if (sign == "-") != odd {
                    leaf.correct("phase-flip c1", |s| apply_phase_flip(s, "c1"))?;
                }
                tree.finish(leaf, Verdict::Success)?;
            }
        }
    }
    Ok(())
}

pub(super) fn explore_multi(p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    let (n, m) = (p.n_photons, p.n_coherent);
    let (a1, a2, b1, b2) = (modes("a1", n), modes("a2", n), modes("b1", m), modes("b2", m));
    let (c1, c2) = (modes("c1", n), modes("c2", n));
    let mut s = pair(p, &a1, &b1, cfg)?.tensor(&pair(p, &a2, &b2, cfg)?)?;
    for j in 0..n {
        s = apply_bit_flip(&s, &a2[j])?;
        s = apply_pbs(&s, &PbsRouting::new(&a1[j], &a2[j], &c2[j], &c1[j])?)?;
    }
    for k in 0..m {
        s = apply_bs(&s, &b1[k], &b2[k], indexed("d1", k + 1, m), indexed("d2", k + 1, m))?;
    }
    let watched: Vec<ModeId> = c1.iter().chain(&c2).cloned().collect();
    let outcomes = one_photon_each_outcomes(&s, &watched)?;
    let others: Vec<String> = (2..=n).map(photon_party).chain((1..=m).map(coherent_party)).collect();

    for (label, mut node) in tree.split(Node::root(s), &format!("postselect {}", label_list(&watched)), outcomes)? {
        if label == "fail" {
            for o in &others {
                node.say(ALICE, o, "discard");
            }
            tree.finish(node, Verdict::Failure)?;
            continue;
        }
        for o in &others {
            node.say(ALICE, o, "keep");
        }
        // one ± measurement per photon party; (node, number of "-")
        let mut frontier = vec![(node, 0usize)];
        for (j, c2j) in c2.iter().enumerate().take(n) {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for (node, minus) in frontier {
                let outcomes = measure_polarization(&node.state, c2j, PolarizationBasis::PlusMinus)?;
                for (sign, mut child) in tree.split(node, &format!("{} in +/-", c2j), outcomes)? {
                    if j > 0 {
                        child.say(&photon_party(j + 1), ALICE, sign.clone());
                    }
                    next.push((child, minus + usize::from(sign == "-")));
                }
            }
            frontier = next;
        }
        for (mut leaf, minus) in frontier {
            if minus % 2 == 1 {
                leaf.correct(format!("phase-flip {}", c1[0]), |s| apply_phase_flip(s, &c1[0]))?;
            }
            tree.finish(leaf, Verdict::Success)?;
        }
    }
    Ok(())
}
