//! One pair plus a single photon prepared as a|H> + b|V>. Shows the
//! classical messages on each branch: all of them leave Alice.
//!
//! `cargo run --example single_photon`

use hybrid_ecp::protocols::run_single_photon;
use hybrid_ecp::{ProtocolParams, SimConfig};

fn main() -> hybrid_ecp::Result<()> {
    let r = run_single_photon(&ProtocolParams::new(0.6), SimConfig::ideal())?;
    for b in r.terminal() {
        let msgs: Vec<String> = b.comm.iter().map(|c| format!("{} -> {}: {}", c.sender, c.receiver, c.message)).collect();
        println!("{:<8} p = {:.4} {:?}  [{}]", b.outcome_key(), b.probability, b.verdict, msgs.join("; "));
    }
    let to_alice = r.branches.iter().flat_map(|b| &b.comm).filter(|c| c.receiver == "Alice").count();
    println!("success {:.6}; messages to Alice: {to_alice}", r.success_probability);
    Ok(())
}
