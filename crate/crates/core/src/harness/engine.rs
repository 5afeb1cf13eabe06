//! Deterministic block-level Monte-Carlo loop.
//!
//! Blocks are evaluated in chunks on the current rayon pool and then
//! accumulated in block order, so the stopping block and every count are
//! the same for any number of worker threads.

use rayon::prelude::*;

use crate::error::{invalid, Result};

const FIRST_CHUNK: u64 = 64;
const MAX_CHUNK: u64 = 16_384;

/// Stop once `min_block_errors` block errors are seen or after `max_blocks`
/// blocks, whichever comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub max_blocks: u64,
}

impl StopRule {
    pub const DEFAULT: StopRule = StopRule {
        min_block_errors: 100,
        max_blocks: 10_000_000,
    };

    /// Exactly `blocks` blocks.
    pub fn fixed(blocks: u64) -> Self {
        StopRule {
            min_block_errors: u64::MAX,
            max_blocks: blocks,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_block_errors == 0 {
            return invalid("the block-error target must be at least 1");
        }
        if self.max_blocks == 0 {
            return invalid("the block limit must be at least 1");
        }
        Ok(())
    }

    pub fn satisfied(&self, t: &Tally) -> bool {
        t.block_errors >= self.min_block_errors || t.blocks >= self.max_blocks
    }
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule::DEFAULT
    }
}

/// Result of a single block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BlockOutcome {
    pub bit_errors: u64,
    pub block_error: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Tally {
    pub blocks: u64,
    pub bit_errors: u64,
    pub block_errors: u64,
}

impl Tally {
    pub fn add(&mut self, o: BlockOutcome) {
        self.blocks += 1;
        self.bit_errors += o.bit_errors;
        self.block_errors += u64::from(o.block_error);
    }
}

/// Runs `block(state, index)` for `index = 0, 1, ...` until `stop` holds.
///
/// `init` builds per-worker scratch state such as decoders. The block
/// function must derive all randomness from its index.
pub fn run_blocks<S, I, F>(stop: StopRule, init: I, block: F) -> Result<Tally>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> Result<BlockOutcome> + Sync + Send,
{
    stop.validate()?;
    let mut tally = Tally::default();
    let mut chunk = FIRST_CHUNK;
    while !stop.satisfied(&tally) {
        let start = tally.blocks;
        let end = start.saturating_add(chunk).min(stop.max_blocks);
        let outcomes: Vec<Result<BlockOutcome>> = (start..end)
            .into_par_iter()
            .map_init(&init, |s, i| block(s, i))
            .collect();
        for o in outcomes {
            tally.add(o?);
            if stop.satisfied(&tally) {
                break;
            }
        }
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
    Ok(tally)
}
