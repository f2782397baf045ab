//! Seeded Monte Carlo runs of every protocol next to the exact enumeration.
//!
//! `cargo run --release --example monte_carlo -- [trials] [seed]`

use std::time::Instant;

use hybrid_ecp::{run_monte_carlo, run_protocol, ProtocolId, ProtocolParams, SimConfig};

fn main() -> hybrid_ecp::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let cfg = SimConfig::ideal().with_seed(seed);
    let p = ProtocolParams::new(0.6).with_parties(2, 2).with_rounds(3);

    println!("{:<20} {:>10} {:>10} {:>8} {:>8}", "protocol", "exact", "sampled", "sigma", "secs");
    for id in ProtocolId::ALL {
        let exact = run_protocol(id, &p, cfg)?.success_probability;
        let start = Instant::now();
        let mc = run_monte_carlo(id, &p, cfg, trials)?;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = if sigma > 0.0 { (mc.success_frequency - exact) / sigma } else { 0.0 };
        println!("{:<20} {:>10.6} {:>10.6} {:>8.2} {:>8.2}", id.as_str(), exact, mc.success_frequency, z, start.elapsed().as_secs_f64());
    }
    Ok(())
}
