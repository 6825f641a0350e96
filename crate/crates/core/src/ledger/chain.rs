use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::block::{Block, GENESIS_PARENT};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockReject {
    Parent,
    Height { expected: u64, found: u64 },
    Digest,
    TooManyTransactions(usize),
    InvalidTransaction { id: u64, reason: String },
}

impl std::fmt::Display for BlockReject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockReject::Parent => write!(f, "parent digest does not match the tip"),
            BlockReject::Height { expected, found } => write!(f, "height {found}, expected {expected}"),
            BlockReject::Digest => write!(f, "digest does not recompute"),
            BlockReject::TooManyTransactions(n) => write!(f, "{n} transactions"),
            BlockReject::InvalidTransaction { id, reason } => write!(f, "transaction {id}: {reason}"),
        }
    }
}

/// Accepted blocks and the balances they imply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub blocks: Vec<Block>,
    pub max_block_txs: usize,
    pub initial_balances: BTreeMap<u64, f64>,
    pub balances: BTreeMap<u64, f64>,
    pub certified: BTreeSet<u64>,
    pub minted: f64,
}

impl Chain {
    pub fn new(initial_balances: BTreeMap<u64, f64>, max_block_txs: usize) -> Self {
        Self {
            blocks: Vec::new(),
            max_block_txs,
            balances: initial_balances.clone(),
            initial_balances,
            certified: BTreeSet::new(),
            minted: 0.0,
        }
    }

    pub fn tip(&self) -> Option<&Block> {
        self.blocks.last()
    }

    pub fn next_height(&self) -> u64 {
        self.blocks.len() as u64
    }

    pub fn tip_digest(&self) -> String {
        self.tip().map_or_else(|| GENESIS_PARENT.to_string(), |b| b.digest.clone())
    }

    pub fn verify_block(&self, block: &Block) -> std::result::Result<(), BlockReject> {
        if block.parent != self.tip_digest() {
            return Err(BlockReject::Parent);
        }
        if block.height != self.next_height() {
            return Err(BlockReject::Height { expected: self.next_height(), found: block.height });
        }
        if block.compute_digest() != block.digest {
            return Err(BlockReject::Digest);
        }
        if block.transactions.len() > self.max_block_txs {
            return Err(BlockReject::TooManyTransactions(block.transactions.len()));
        }
        let mut ids = BTreeSet::new();
        for t in &block.transactions {
            let invalid = |reason: String| BlockReject::InvalidTransaction { id: t.id, reason };
            t.well_formed().map_err(|e| invalid(e.to_string()))?;
            if self.certified.contains(&t.id) || !ids.insert(t.id) {
                return Err(invalid("already certified".into()));
            }
        }
        Ok(())
    }

    /// Verifies and appends a block, moving payments and rewarding the
    /// validator.
    pub fn append(&mut self, block: Block) -> std::result::Result<(), BlockReject> {
        self.verify_block(&block)?;
        for t in &block.transactions {
            *self.balances.entry(t.payer).or_default() -= t.amount;
            *self.balances.entry(t.payee).or_default() += t.amount - t.fee;
            self.certified.insert(t.id);
        }
        reward_validator(&block, &mut self.balances);
        self.minted += block.reward;
        self.blocks.push(block);
        Ok(())
    }

    pub fn total_balance(&self) -> f64 {
        self.balances.values().sum()
    }

    /// Replays every block from an empty chain.
    pub fn replay(&self) -> std::result::Result<Chain, (u64, BlockReject)> {
        let mut fresh = Chain::new(self.initial_balances.clone(), self.max_block_txs);
        for b in &self.blocks {
            fresh.append(b.clone()).map_err(|e| (b.height, e))?;
        }
        Ok(fresh)
    }

    /// One block per line.
    pub fn export_jsonl(&self, mut w: impl Write) -> Result<()> {
        for b in &self.blocks {
            serde_json::to_writer(&mut w, b)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn parse_jsonl(text: &str) -> Result<Vec<Block>> {
        text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
    }
}

/// Credits the block's fees and reward to its validator.
pub fn reward_validator(block: &Block, balances: &mut BTreeMap<u64, f64>) {
    *balances.entry(block.validator).or_default() += block.fees() + block.reward;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::tx::{TaskProfile, Transaction};
    use proptest::prelude::*;

    fn tx(id: u64, amount: f64, fee: f64) -> Transaction {
        Transaction { id, payer: 1, payee: 2, amount, fee, profile: TaskProfile::default(), created: 0.0 }
    }

    fn chain() -> Chain {
        Chain::new(BTreeMap::from([(1, 100.0), (2, 0.0), (9, 0.0)]), 100)
    }

    fn next(c: &Chain, txs: Vec<Transaction>) -> Block {
        Block::new(c.next_height(), c.tip_digest(), 9, c.next_height() as f64, txs, 1.0)
    }

    #[test]
    fn accepts_a_well_formed_block() {
        let mut c = chain();
        let b = next(&c, vec![tx(1, 0.2, 0.002)]);
        c.append(b).unwrap();
        assert_eq!(c.blocks.len(), 1);
        assert_eq!(c.blocks[0].parent, GENESIS_PARENT);
    }

    #[test]
    fn rejects_tampering_and_gaps() {
        let mut c = chain();
        let mut b = next(&c, vec![tx(1, 0.2, 0.002)]);
        b.transactions[0].amount = 5.0;
        assert_eq!(c.verify_block(&b), Err(BlockReject::Digest));
        let gap = Block::new(2, c.tip_digest(), 9, 0.0, vec![], 1.0);
        assert!(matches!(c.verify_block(&gap), Err(BlockReject::Height { .. })));
        c.append(next(&c, vec![tx(1, 0.2, 0.002)])).unwrap();
        let orphan = Block::new(1, GENESIS_PARENT.into(), 9, 2.0, vec![], 1.0);
        assert_eq!(c.verify_block(&orphan), Err(BlockReject::Parent));
        let replayed = next(&c, vec![tx(1, 0.2, 0.002)]);
        assert!(matches!(c.verify_block(&replayed), Err(BlockReject::InvalidTransaction { .. })));
        let big = next(&c, (10..111).map(|i| tx(i, 0.1, 0.0)).collect());
        assert_eq!(c.verify_block(&big), Err(BlockReject::TooManyTransactions(101)));
        assert_eq!(c.blocks.len(), 1);
    }

    #[test]
    fn rewards() {
        let mut c = chain();
        c.append(next(&c, vec![tx(1, 1.0, 0.0)])).unwrap();
        assert_eq!(c.balances[&9], 1.0);
        c.append(next(&c, vec![tx(2, 10.0, 0.1), tx(3, 20.0, 0.2)])).unwrap();
        assert!((c.balances[&9] - (1.0 + 0.3 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn jsonl_round_trip() {
        let mut c = chain();
        c.append(next(&c, vec![tx(1, 0.2, 0.002)])).unwrap();
        c.append(next(&c, vec![])).unwrap();
        let mut buf = Vec::new();
        c.export_jsonl(&mut buf).unwrap();
        let blocks = Chain::parse_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(blocks, c.blocks);
    }

    proptest! {
        #[test]
        fn integrity_and_conservation(
            sizes in proptest::collection::vec(0usize..5, 1..8),
            amounts in proptest::collection::vec(0.0f64..5.0, 40),
            flip_block in 0usize..8,
            flip_byte in 0usize..64,
        ) {
            let mut c = chain();
            let start = c.total_balance();
            let mut id = 0;
            for &n in &sizes {
                let txs = (0..n).map(|_| { id += 1; let a = amounts[id as usize % 40]; tx(id, a, a * 0.01) }).collect();
                let b = next(&c, txs);
                c.append(b).unwrap();
            }
            let replayed = c.replay().unwrap();
            prop_assert_eq!(&replayed.balances, &c.balances);
            prop_assert!((c.total_balance() - start - c.minted).abs() < 1e-9);

            let k = flip_block % c.blocks.len();
            let mut tampered = c.clone();
            let mut digest = tampered.blocks[k].digest.clone().into_bytes();
            digest[flip_byte] = if digest[flip_byte] == b'0' { b'1' } else { b'0' };
            tampered.blocks[k].digest = String::from_utf8(digest).unwrap();
            prop_assert!(tampered.replay().is_err());

            let mut tampered = c.clone();
            tampered.blocks[k].timestamp += 1e-9;
            prop_assert!(tampered.replay().is_err());
        }
    }
}
