//! Exhaustive verification over all Boolean functions on few variables.
//!
//! Mutual information through a memoryless symmetric channel is invariant
//! under permuting inputs, negating inputs and negating the output, so each
//! orbit is evaluated once through its smallest truth table.

mod group;
mod shard;
mod verify;

pub use group::{
    canonicalize, check_run_size, dictator_key, enumerate_canonical, key_table, table_key,
    CanonicalClass, SymmetryGroup, IN_MEMORY_MAX_DIM, MAX_SEARCH_DIM,
};
pub use shard::{
    run_sharded, shard_ranges, verify_coordinate_sum, verify_total_mi, Checkpoint, RunConfig,
    RunOutcome, ShardState, CHECKPOINT_FORMAT_VERSION, DEFAULT_CHECKPOINT_EVERY,
};
pub use verify::{
    Accumulator, AlphaAccumulator, AlphaSummary, SearchReport, SearchTask, Violation,
    VIOLATION_TOL,
};
