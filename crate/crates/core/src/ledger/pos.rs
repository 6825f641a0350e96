//! Stake-weighted validator choice and the block triggers.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::block::Block;
use super::chain::Chain;
use super::tx::TxPool;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForgeRules {
    /// Seconds between interval-triggered blocks.
    pub interval: f64,
    /// Pool size that triggers a block, also the per-block cap.
    pub max_txs: usize,
    pub block_reward: f64,
}

impl Default for ForgeRules {
    fn default() -> Self {
        Self { interval: 1.0, max_txs: 100, block_reward: 1.0 }
    }
}

/// Samples a validator proportionally to stake.
pub fn select_validator(stakes: &BTreeMap<u64, f64>, rng: &mut impl Rng) -> Result<u64> {
    let total: f64 = stakes.values().filter(|s| **s > 0.0).sum();
    if !(total > 0.0) {
        return Err(Error::NoValidator);
    }
    let mut r = rng.random::<f64>() * total;
    let mut last = None;
    for (&id, &s) in stakes.iter().filter(|(_, s)| **s > 0.0) {
        if r < s {
            return Ok(id);
        }
        r -= s;
        last = Some(id);
    }
    last.ok_or(Error::NoValidator)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForgeOutcome {
    Idle,
    Forged(Block),
    NoValidator,
}

/// Forges when the pool holds `max_txs` transactions, or when it is nonempty
/// and `interval` has passed since the previous block (or since `start`).
pub fn maybe_forge_block(
    pool: &mut TxPool,
    chain: &Chain,
    now: f64,
    since: f64,
    stakes: &BTreeMap<u64, f64>,
    rules: &ForgeRules,
    rng: &mut impl Rng,
) -> ForgeOutcome {
    let last = chain.tip().map_or(since, |b| b.timestamp);
    let due = !pool.is_empty() && now - last >= rules.interval - 1e-9;
    if !(due || pool.len() >= rules.max_txs) {
        return ForgeOutcome::Idle;
    }
    let Ok(validator) = select_validator(stakes, rng) else {
        return ForgeOutcome::NoValidator;
    };
    let txs = pool.take_oldest(rules.max_txs, now);
    ForgeOutcome::Forged(Block::new(chain.next_height(), chain.tip_digest(), validator, now, txs, rules.block_reward))
}
