//! Two less-entangled pairs, a PBS parity check on the photons and a 50:50
//! beam splitter on the coherent parts. Prints every branch of the tree.
//!
//! `cargo run --example bs_protocol -- [a]`

use hybrid_ecp::protocols::run_bs_protocol;
use hybrid_ecp::{ProtocolParams, SimConfig};

fn main() -> hybrid_ecp::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.6);
    let r = run_bs_protocol(&ProtocolParams::new(a), SimConfig::ideal())?;
    println!("wiring: {}", r.metadata["wiring"]);
    for b in r.terminal() {
        println!(
            "{:<14} p = {:.6}  {:?}  corrections {:?}  fidelity {}",
            b.outcome_key(),
            b.probability,
            b.verdict,
            b.corrections_applied,
            b.fidelity.map_or("-".into(), |f| format!("{f:.12}"))
        );
    }
    println!("success probability {:.12} (2a²b² = {:.12})", r.success_probability, 2.0 * a * a * (1.0 - a * a));
    for b in r.successes().take(1) {
        for k in b.output.as_ref().unwrap().kets() {
            let amps: Vec<String> = k.coherents.iter().map(|(m, x)| format!("{m}={x:.4}")).collect();
            println!("  output ket {:+.4}  {}", k.coeff, amps.join(" "));
        }
    }
    Ok(())
}
