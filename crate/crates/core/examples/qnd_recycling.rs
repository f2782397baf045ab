//! Cross-Kerr parity checks with recycling: failed rounds are fed back with
//! updated coefficients, and the per-round yields are compared with the
//! recursion.
//!
//! `cargo run --example qnd_recycling -- [a] [k]`

use hybrid_ecp::analysis::yield_qnd_rounds;
use hybrid_ecp::protocols::run_qnd_protocol;
use hybrid_ecp::{ProtocolParams, SimConfig, C64};

fn main() -> hybrid_ecp::Result<()> {
    let mut args = std::env::args().skip(1);
    let a: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.8f64.sqrt());
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let p = ProtocolParams::new(a).with_probe(C64::new(5.0, 0.0), 0.2).with_rounds(k);
    let r = run_qnd_protocol(&p, SimConfig::ideal())?;
    println!("phase-class overlap of the probe: {}", r.metadata["homodyne_class_overlap"]);

    let formula = yield_qnd_rounds(a, k)?;
    let mut cumulative = 0.0;
    println!("{:>5} {:>14} {:>14} {:>14}", "round", "enumerated", "recursion", "cumulative");
    for (j, (x, y)) in r.rounds.iter().zip(&formula).enumerate() {
        cumulative += x;
        println!("{:>5} {x:>14.10} {y:>14.10} {cumulative:>14.10}", j + 1);
    }
    println!("bound 2·min(a², b²) = {:.10}", 2.0 * (a * a).min(1.0 - a * a));
    Ok(())
}
