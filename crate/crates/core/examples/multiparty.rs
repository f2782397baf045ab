//! Multiparty versions: N photons and M coherent modes per copy, with the
//! PBS/BS scheme and with a single ancilla photon.
//!
//! `cargo run --example multiparty`

use hybrid_ecp::{run_protocol, ProtocolId, ProtocolParams, SimConfig};

fn main() -> hybrid_ecp::Result<()> {
    let a = 0.6;
    println!("{:<20} {:>2} {:>2} {:>10} {:>9} {:>9}", "protocol", "N", "M", "success", "branches", "fidelity");
    for id in [ProtocolId::BsMulti, ProtocolId::SinglePhotonMulti] {
        for (n, m) in [(1, 1), (2, 2), (3, 1), (3, 3)] {
            let r = run_protocol(id, &ProtocolParams::new(a).with_parties(n, m), SimConfig::ideal())?;
            println!(
                "{:<20} {n:>2} {m:>2} {:>10.6} {:>9} {:>9.6}",
                id.as_str(),
                r.success_probability,
                r.successes().count(),
                r.mean_output_fidelity
            );
        }
    }

    let r = run_protocol(ProtocolId::BsMulti, &ProtocolParams::new(a).with_parties(3, 1), SimConfig::ideal())?;
    println!("\nparity rule for N = 3:");
    for b in r.successes() {
        println!("  {:<16} corrections {:?}", b.outcome_key(), b.corrections_applied);
    }
    Ok(())
}
