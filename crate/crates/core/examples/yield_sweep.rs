//! Yield curves of all protocol families over a coefficient grid, written
//! as CSV to stdout or to a file.
//!
//! `cargo run --example yield_sweep -- [k] [out.csv]`

use hybrid_ecp::analysis::{default_grid, sweep_yields};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let curve = sweep_yields(&default_grid(), k)?;
    match args.next() {
        Some(path) => {
            std::fs::write(&path, curve.to_csv())?;
            eprintln!("wrote {path}");
        }
        None => print!("{}", curve.to_csv()),
    }
    eprintln!("max |Y_qnd_total - Y_vbs| at K = {k}: {:.3e}", curve.max_qnd_vbs_gap());
    Ok(())
}
