//! Ancilla-free concentration with a variable beam splitter, on both sides
//! of a = b.
//!
//! `cargo run --example vbs`

use hybrid_ecp::protocols::run_vbs_protocol;
use hybrid_ecp::{ProtocolParams, SimConfig};

fn main() -> hybrid_ecp::Result<()> {
    for a in [0.3, 0.6, std::f64::consts::FRAC_1_SQRT_2, 0.8, 0.95] {
        let r = run_vbs_protocol(&ProtocolParams::new(a), SimConfig::ideal())?;
        println!(
            "a = {a:.4}  R = {:<20} rotated = {:<5} success {:.6}  (2·min(a², b²) = {:.6})",
            r.metadata["reflectance"],
            r.metadata["pre_rotation"],
            r.success_probability,
            2.0 * (a * a).min(1.0 - a * a)
        );
    }
    Ok(())
}
