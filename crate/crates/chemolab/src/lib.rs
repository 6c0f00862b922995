//! IO layer and command implementations for the chemolab CLI: INI configs,
//! CSV/JSON emitters, binary field checkpoints, and the check/run/sweep
//! drivers. The numerics live in `chemolab-core`.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod json;

/// Stable process exit codes: 0 success, 2 invalid input, 3 expectation
/// mismatch.
pub mod exit_codes {
    pub const SUCCESS: u8 = 0;
    pub const INVALID_INPUT: u8 = 2;
    pub const EXPECTATION_MISMATCH: u8 = 3;
}
