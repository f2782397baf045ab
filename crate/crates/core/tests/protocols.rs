use std::f64::consts::FRAC_1_SQRT_2;

use hybrid_ecp::protocols::{run_bs_improved, run_bs_multiparty, run_bs_protocol, run_qnd_protocol, run_single_photon, run_vbs_protocol};
use hybrid_ecp::{run_monte_carlo, run_protocol, ModeId, ProtocolId, ProtocolParams, SimConfig, Verdict, C64};

fn cfg() -> SimConfig {
    SimConfig::ideal()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

#[test]
fn bs_examples() {
    let r = run_bs_protocol(&ProtocolParams::new(FRAC_1_SQRT_2), cfg()).unwrap();
    assert!(close(r.success_probability, 0.5, 1e-12));
    let r = run_bs_protocol(&ProtocolParams::new(0.6), cfg()).unwrap();
    assert!(close(r.success_probability, 0.4608, 1e-12));
    assert!(close(r.mean_output_fidelity, 1.0, 1e-12));
    let r = run_bs_protocol(&ProtocolParams::new(0.999), cfg()).unwrap();
    assert!(close(r.success_probability, 2.0 * 0.998001 * (1.0 - 0.998001), 1e-12));
    assert!(close(r.success_probability, 0.003990008, 1e-9));
}

#[test]
fn bs_minus_branch_is_corrected() {
    let r = run_bs_protocol(&ProtocolParams::new(0.6), cfg()).unwrap();
    let minus = r.successes().find(|b| b.path.last().unwrap().outcome == "-").unwrap();
    assert_eq!(minus.corrections_applied, ["phase-flip c1"]);
    let plus = r.successes().find(|b| b.path.last().unwrap().outcome == "+").unwrap();
    assert!(plus.corrections_applied.is_empty());
    assert!(close(plus.probability, 0.2304, 1e-12));
}

#[test]
fn bs_improved_examples() {
    let r = run_bs_improved(&ProtocolParams::new(FRAC_1_SQRT_2), cfg()).unwrap();
    assert!(close(r.success_probability, 0.5, 1e-10));
    for b in r.successes() {
        for ket in b.output.as_ref().unwrap().kets() {
            let amp = ket.coherents.get(&ModeId::new("b1")).unwrap();
            assert!(close(amp.norm(), 2.0, 1e-12), "amplitude {amp}");
        }
    }
    assert!(r.metadata["correction"].contains("parity"));

    let zero = ProtocolParams::new(0.6).with_beta(C64::new(0.0, 0.0));
    let r = run_bs_improved(&zero, cfg()).unwrap();
    let counts: Vec<_> = r.successes().map(|b| b.path.last().unwrap().outcome.clone()).collect();
    assert!(counts.iter().all(|n| n == "n=0"), "{counts:?}");
    assert!(close(r.success_probability, 0.4608, 1e-12));
}

#[test]
fn bs_improved_reports_photon_number_to_alice() {
    let r = run_bs_improved(&ProtocolParams::new(0.6), cfg()).unwrap();
    for b in r.successes() {
        let last = b.comm.last().unwrap();
        assert_eq!((last.sender.as_str(), last.receiver.as_str()), ("Bob", "Alice"));
        assert_eq!(last.message, b.path.last().unwrap().outcome);
    }
}

#[test]
fn multiparty_examples() {
    let p = ProtocolParams::new(FRAC_1_SQRT_2).with_parties(2, 2);
    let r = run_bs_multiparty(&p, cfg()).unwrap();
    assert!(close(r.success_probability, 0.5, 1e-10));
    let flipped: Vec<_> = r.successes().map(|b| (b.outcome_key(), !b.corrections_applied.is_empty())).collect();
    assert_eq!(flipped.len(), 4);
    for (key, corrected) in flipped {
        let minus = key.matches('-').count();
        assert_eq!(corrected, minus % 2 == 1, "{key}");
    }
    let r = run_bs_multiparty(&ProtocolParams::new(0.6).with_parties(3, 1), cfg()).unwrap();
    assert!(close(r.success_probability, 0.4608, 1e-10));
}

#[test]
fn single_photon_examples() {
    let r = run_single_photon(&ProtocolParams::new(FRAC_1_SQRT_2), cfg()).unwrap();
    assert!(close(r.success_probability, 0.5, 1e-10));
    let p = ProtocolParams::new(0.6).with_parties(2, 2);
    let r = run_protocol(ProtocolId::SinglePhotonMulti, &p, cfg()).unwrap();
    assert!(close(r.success_probability, 0.4608, 1e-10));
    assert!(r.branches.iter().all(|b| b.comm.iter().all(|c| c.receiver != "Alice")));
    let receivers: Vec<_> = r.branches[0].comm.iter().map(|c| c.receiver.as_str()).collect();
    assert_eq!(receivers, ["photon-holder-2", "Bob", "coherent-holder-2"]);
}

#[test]
fn qnd_examples() {
    let p = ProtocolParams::new(0.8f64.sqrt()).with_rounds(2);
    let r = run_qnd_protocol(&p, cfg()).unwrap();
    assert!(close(r.rounds[0], 0.32, 1e-10));
    assert!(close(r.rounds[1], 0.0512 / 0.68, 1e-10));
    assert!(close(r.success_probability, 0.3952941, 1e-7));
    let recycled = r.branches.iter().filter(|b| b.verdict == Verdict::Recycled).count();
    assert_eq!(recycled, 2);
    let failures: f64 = r.branches.iter().filter(|b| b.verdict == Verdict::Failure).map(|b| b.probability).sum();
    assert!(close(failures, 1.0 - r.success_probability, 1e-12));
    assert!(r.metadata.contains_key("homodyne_class_overlap"));

    let r = run_qnd_protocol(&ProtocolParams::new(FRAC_1_SQRT_2).with_rounds(10), cfg()).unwrap();
    assert!(close(r.success_probability, 0.9990234375, 1e-12));
}

#[test]
fn qnd_ignores_probe_strength() {
    let weak = ProtocolParams::new(0.6).with_probe(C64::new(0.5, 0.5), 0.05).with_rounds(3);
    let strong = ProtocolParams::new(0.6).with_probe(C64::new(8.0, 0.0), 1.0).with_rounds(3);
    let a = run_qnd_protocol(&weak, cfg()).unwrap();
    let b = run_qnd_protocol(&strong, cfg()).unwrap();
    for (x, y) in a.rounds.iter().zip(&b.rounds) {
        assert!(close(*x, *y, 1e-12));
    }
}

#[test]
fn vbs_examples() {
    let r = run_vbs_protocol(&ProtocolParams::new(0.6), cfg()).unwrap();
    assert!(close(r.success_probability, 0.72, 1e-12));
    let click = r.branches.iter().find(|b| b.verdict == Verdict::Failure).unwrap();
    assert!(close(click.probability, 0.28, 1e-12));
    let out = click.output.as_ref().unwrap();
    assert_eq!(out.len(), 1, "click leaves a product state");
    let ket = &out.kets()[0];
    assert!(close(ket.coherents.get(&ModeId::new("b1")).unwrap().re, -2.0, 1e-12));

    let r = run_vbs_protocol(&ProtocolParams::new(FRAC_1_SQRT_2), cfg()).unwrap();
    assert!(close(r.success_probability, 1.0, 1e-12));
    let r = run_vbs_protocol(&ProtocolParams::new(0.8), cfg()).unwrap();
    assert!(close(r.success_probability, 0.72, 1e-12));
}

#[test]
fn monte_carlo_examples() {
    let p = ProtocolParams::new(0.6);
    let mc = run_monte_carlo(ProtocolId::Bs, &p, cfg().with_seed(7), 100_000).unwrap();
    assert!(close(mc.success_frequency, 0.4608, 0.0048), "{}", mc.success_frequency);
    assert!(close(mc.mean_fidelity, 1.0, 1e-12));
    assert_eq!(mc.outcome_counts.values().sum::<u64>(), 100_000);
    assert_eq!(mc.outcome_counts.keys().cloned().collect::<Vec<_>>(), ["fail", "pass/+", "pass/-"]);

    let other = run_monte_carlo(ProtocolId::Bs, &p, cfg().with_seed(8), 1_000).unwrap();
    let again = run_monte_carlo(ProtocolId::Bs, &p, cfg().with_seed(8), 1_000).unwrap();
    assert_eq!(other, again);
}

#[test]
fn json_export_contains_tree_and_branches() {
    let r = run_qnd_protocol(&ProtocolParams::new(0.6).with_rounds(2), cfg()).unwrap();
    let v = r.to_json();
    assert_eq!(v["protocol"], "qnd");
    assert_eq!(v["rounds"].as_array().unwrap().len(), 2);
    let tree = &v["tree"]["round 1: homodyne p"];
    assert!(tree["shift0"].is_object() && tree["shift2theta"].is_object());
    let recycled = &tree["shift2theta"]["round 1: a3 in +/-"]["+"];
    assert_eq!(recycled["verdict"], "recycled");
    assert!(recycled["round 2: homodyne p"].is_object());
    let text = serde_json::to_string(&v).unwrap();
    let back: hybrid_ecp::ProtocolResult = serde_json::from_value(serde_json::from_str::<serde_json::Value>(&text).unwrap()).unwrap();
    assert_eq!(back.branches.len(), r.branches.len());
}
