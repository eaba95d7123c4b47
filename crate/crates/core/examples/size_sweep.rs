//! Size sweep of a disk dimer at fixed gap, written as CSV: the hybridized
//! pair straddles the isolated resonance and closes onto it as δ → 0.
//!
//! cargo run --release --example size_sweep -- [config]

use nanoresonance::cli::{cmd_sweep, RunConfig};
use nanoresonance::Result;

fn main() -> Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/sweep_placeholder.conf"
        )
        .into()
    });
    let cfg = RunConfig::from_file(&path)?;
    let out = cmd_sweep(&cfg)?;
    print!("{}", out.text);
    for n in out.notes {
        eprintln!("note: {n}");
    }
    Ok(())
}
