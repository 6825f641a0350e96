use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::tx::Transaction;

/// Parent digest of the first block.
pub const GENESIS_PARENT: &str = "0000000000000000000000000000000000000000000000000000000000000000";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub height: u64,
    pub parent: String,
    pub digest: String,
    pub validator: u64,
    /// Seconds.
    pub timestamp: f64,
    pub transactions: Vec<Transaction>,
    pub reward: f64,
}

#[derive(Serialize)]
struct Content<'a> {
    height: u64,
    parent: &'a str,
    validator: u64,
    timestamp: f64,
    transactions: &'a [Transaction],
    reward: f64,
}

impl Block {
    pub fn new(height: u64, parent: String, validator: u64, timestamp: f64, transactions: Vec<Transaction>, reward: f64) -> Self {
        let mut b = Block { height, parent, digest: String::new(), validator, timestamp, transactions, reward };
        b.digest = b.compute_digest();
        b
    }

    /// SHA-256 over the canonical JSON of every field except the digest, in
    /// declaration order.
    pub fn compute_digest(&self) -> String {
        let content = Content {
            height: self.height,
            parent: &self.parent,
            validator: self.validator,
            timestamp: self.timestamp,
            transactions: &self.transactions,
            reward: self.reward,
        };
        let bytes = serde_json::to_vec(&content).expect("block content serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn fees(&self) -> f64 {
        self.transactions.iter().map(|t| t.fee).sum()
    }
}
