//! The beam-splitter-free variant: a photon-number readout on one coherent
//! mode replaces the BS and keeps the amplitude at β. The sign correction
//! uses both the ± result and the parity of n.
//!
//! `cargo run --example bs_improved`

use std::collections::BTreeMap;

use hybrid_ecp::protocols::run_bs_improved;
use hybrid_ecp::{ProtocolParams, SimConfig, C64};

fn main() -> hybrid_ecp::Result<()> {
    let p = ProtocolParams::new(0.6).with_beta(C64::new(2.0, 0.0));
    let r = run_bs_improved(&p, SimConfig::ideal())?;
    println!("{}", r.metadata["correction"]);

    // success probability grouped by (±, parity) and whether a flip was needed
    let mut groups: BTreeMap<(String, &str, bool), f64> = BTreeMap::new();
    for b in r.successes() {
        let sign = b.path[1].outcome.clone();
        let n: usize = b.path[2].outcome[2..].parse().unwrap();
        let parity = if n.is_multiple_of(2) { "even" } else { "odd" };
        *groups.entry((sign, parity, !b.corrections_applied.is_empty())).or_default() += b.probability;
    }
    for ((sign, parity, flipped), prob) in groups {
        println!("{sign} {parity:<4} flip={flipped:<5} p = {prob:.6}");
    }
    println!("success {:.12}, mean fidelity {:.12}", r.success_probability, r.mean_output_fidelity);
    Ok(())
}
