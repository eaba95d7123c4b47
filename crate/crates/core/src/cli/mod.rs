//! Configuration reader and the commands behind the `resonance` binary.

mod commands;
mod config;

pub use commands::{
    cmd_dimer, cmd_eigen, cmd_field, cmd_single, cmd_sweep, Output, EIGEN_COLUMNS, OUTPUT_VERSION,
    SWEEP_COLUMNS,
};
pub use config::{
    parse_json, parse_key_values, Axis, FieldSpec, Incident, Placement, RunConfig, KNOWN_KEYS,
};

use crate::error::{Error, Result};

/// Caps the global rayon pool at `RESONANCE_NUM_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("RESONANCE_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Config(format!(
            "RESONANCE_NUM_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    // a pool that is already built keeps its size
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}
