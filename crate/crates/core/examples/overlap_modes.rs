//! Coherent states are not orthogonal. The exact model keeps their overlaps,
//! the ideal model treats distinct amplitudes as orthogonal. Protocol branch
//! probabilities agree because every measured pair of kets already differs
//! in its photons.
//!
//! `cargo run --example overlap_modes`

use hybrid_ecp::measurement::measure_photon_number;
use hybrid_ecp::{run_protocol, HybridState, ProtocolId, ProtocolParams, SimConfig, C64};

fn main() -> hybrid_ecp::Result<()> {
    for beta in [0.3, 1.0, 2.0] {
        let s = HybridState::coherent("b", C64::new(beta, 0.0), SimConfig::exact())?;
        let t = HybridState::coherent("b", C64::new(-beta, 0.0), SimConfig::exact())?;
        println!("β = {beta}: |<β|−β>|² = {:.3e}", s.inner_product(&t)?.norm_sqr());
    }

    let p = ProtocolParams::new(0.6).with_beta(C64::new(1.0, 0.0)).with_parties(2, 2).with_rounds(3);
    for id in ProtocolId::ALL {
        let ideal = run_protocol(id, &p, SimConfig::ideal())?;
        let exact = run_protocol(id, &p, SimConfig::exact())?;
        let worst = ideal.branches.iter().zip(&exact.branches).map(|(x, y)| (x.probability - y.probability).abs()).fold(0.0, f64::max);
        println!("{:<20} branches {:>3}  max |Δp| = {worst:.1e}", id.as_str(), ideal.branches.len());
    }

    // a superposition of |β> and |−β> with no photon to tell them apart
    let kets = |cfg| {
        HybridState::new(
            vec![
                hybrid_ecp::Ket::scalar(C64::new(1.0, 0.0)).with_coherent("b", C64::new(0.5, 0.0)).unwrap(),
                hybrid_ecp::Ket::scalar(C64::new(1.0, 0.0)).with_coherent("b", C64::new(-0.5, 0.0)).unwrap(),
            ],
            cfg,
        )
        .and_then(|s| s.normalize())
    };
    let cat = kets(SimConfig::exact())?;
    let p_odd: f64 = measure_photon_number(&cat, "b")?
        .iter()
        .filter(|o| o.label[2..].parse::<usize>().unwrap() % 2 == 1)
        .map(|o| o.probability)
        .sum();
    println!("even cat state, exact overlaps: P(odd n) = {:.2e}", p_odd.abs());
    Ok(())
}
