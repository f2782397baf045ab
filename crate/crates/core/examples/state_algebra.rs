//! Building hybrid states, taking overlaps and tensor products, and a JSON
//! round trip.
//!
//! `cargo run --example state_algebra`

use std::f64::consts::FRAC_1_SQRT_2;

use hybrid_ecp::state::coherent_overlap;
use hybrid_ecp::{HybridState, SimConfig, C64};

fn main() -> hybrid_ecp::Result<()> {
    let beta = C64::new(1.0, 0.0);
    println!("<β|−β> for β = 1: {:.6}", coherent_overlap(beta, -beta).re);

    for cfg in [SimConfig::ideal(), SimConfig::exact()] {
        let h = C64::from(FRAC_1_SQRT_2);
        let maximal = HybridState::hybrid_entangled(h, h, &["a1"], &[("b1", beta)], cfg)?;
        let partial = HybridState::hybrid_entangled(C64::from(0.6), C64::from(0.8), &["a1"], &[("b1", beta)], cfg)?;
        println!(
            "{:?}: norm² {:.12}, fidelity with the maximal state {:.6}",
            cfg.overlap_mode,
            partial.norm_sqr(),
            partial.fidelity(&maximal)?
        );
    }

    let cfg = SimConfig::ideal();
    let one = HybridState::hybrid_entangled(C64::from(0.6), C64::from(0.8), &["a1"], &[("b1", beta)], cfg)?;
    let two = HybridState::hybrid_entangled(C64::from(0.6), C64::from(0.8), &["a2"], &[("b2", beta)], cfg)?;
    let both = one.tensor(&two)?;
    println!("two copies: {} kets", both.len());
    for k in both.kets() {
        let photons: Vec<String> = k.photons.iter().map(|(m, p)| format!("{m}:{p:?}")).collect();
        let coh: Vec<String> = k.coherents.iter().map(|(m, a)| format!("{m}={}", a.re)).collect();
        println!("  {:+.2} |{}> |{}>", k.coeff.re, photons.join(" "), coh.join(" "));
    }

    let text = one.to_json();
    println!("JSON: {text}");
    let back = HybridState::from_json(&text).expect("round trip");
    assert_eq!(back, one);
    Ok(())
}
