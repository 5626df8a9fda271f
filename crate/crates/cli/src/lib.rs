//! Library side of the smoothbound CLI: shared table construction and the
//! acceptance-criteria harness used by both `smoothbound verify` and the
//! integration tests.

pub mod verify;

use smoothbound_core::PrimeTable;

/// Default sieve bound when neither a flag nor the environment overrides it.
pub const DEFAULT_TABLE_LIMIT: u64 = 2_000_000;

/// Table limit from SMOOTHBOUND_TABLE_LIMIT, if set and parseable.
pub fn env_table_limit() -> Option<u64> {
    std::env::var("SMOOTHBOUND_TABLE_LIMIT").ok()?.parse().ok()
}

pub fn build_table(limit: u64) -> anyhow::Result<PrimeTable> {
    PrimeTable::build(limit).map_err(|e| anyhow::anyhow!("{e}"))
}
