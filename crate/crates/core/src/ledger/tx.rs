use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::auth::Registry;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TaskProfile {
    pub up: f64,
    pub req: f64,
    pub deadline: f64,
    pub latency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transaction {
    pub id: u64,
    pub payer: u64,
    pub payee: u64,
    /// Tokens.
    pub amount: f64,
    pub fee: f64,
    pub profile: TaskProfile,
    /// Seconds.
    pub created: f64,
}

impl Transaction {
    pub fn well_formed(&self) -> Result<(), TxReject> {
        if !(self.amount >= 0.0 && self.fee >= 0.0 && self.fee <= self.amount) {
            return Err(TxReject::Malformed("amount and fee must satisfy 0 <= fee <= amount".into()));
        }
        if self.payer == self.payee {
            return Err(TxReject::Malformed("payer equals payee".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TxReject {
    Duplicate,
    Unauthenticated,
    Malformed(String),
}

impl std::fmt::Display for TxReject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TxReject::Duplicate => write!(f, "duplicate transaction id"),
            TxReject::Unauthenticated => write!(f, "payer failed authentication"),
            TxReject::Malformed(m) => write!(f, "malformed: {m}"),
        }
    }
}

/// Pending transactions in arrival order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TxPool {
    pub pending: VecDeque<Transaction>,
    /// Every id ever accepted, pending or certified.
    pub seen: BTreeSet<u64>,
    /// Time the pool last went from empty to nonempty.
    pub nonempty_since: Option<f64>,
}

impl TxPool {
    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    /// Removes up to `n` of the oldest transactions.
    pub fn take_oldest(&mut self, n: usize, now: f64) -> Vec<Transaction> {
        let k = n.min(self.pending.len());
        let out: Vec<Transaction> = self.pending.drain(..k).collect();
        self.nonempty_since = self.pending.front().map(|_| now);
        out
    }
}

/// Authenticates the payer with `credential` and appends the transaction.
pub fn submit_transaction(
    pool: &mut TxPool,
    tx: Transaction,
    credential: &str,
    registry: &Registry,
) -> Result<(), TxReject> {
    if !registry.authenticate(tx.payer, credential) {
        return Err(TxReject::Unauthenticated);
    }
    tx.well_formed()?;
    if pool.seen.contains(&tx.id) {
        return Err(TxReject::Duplicate);
    }
    if pool.pending.is_empty() {
        pool.nonempty_since = Some(tx.created);
    }
    pool.seen.insert(tx.id);
    pool.pending.push_back(tx);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tx(id: u64) -> Transaction {
        Transaction { id, payer: 1, payee: 2, amount: 0.2, fee: 0.002, profile: TaskProfile::default(), created: 0.0 }
    }

    fn registry() -> Registry {
        let mut r = Registry::default();
        r.register(1, "secret-1");
        r
    }

    #[test]
    fn accepts_and_dedups() {
        let reg = registry();
        let mut pool = TxPool::default();
        submit_transaction(&mut pool, tx(7), "secret-1", &reg).unwrap();
        assert_eq!(pool.len(), 1);
        assert_eq!(submit_transaction(&mut pool, tx(7), "secret-1", &reg), Err(TxReject::Duplicate));
        assert_eq!(pool.len(), 1);
    }

    #[test]
    fn spoofed_payer_rejected() {
        let reg = registry();
        let mut pool = TxPool::default();
        assert_eq!(submit_transaction(&mut pool, tx(8), "secret-666", &reg), Err(TxReject::Unauthenticated));
        assert!(pool.is_empty());
    }

    #[test]
    fn malformed_rejected() {
        let reg = registry();
        let mut pool = TxPool::default();
        let mut t = tx(9);
        t.payee = 1;
        assert!(matches!(submit_transaction(&mut pool, t, "secret-1", &reg), Err(TxReject::Malformed(_))));
    }

    #[test]
    fn oldest_first() {
        let reg = registry();
        let mut pool = TxPool::default();
        for id in 0..5 {
            submit_transaction(&mut pool, tx(id), "secret-1", &reg).unwrap();
        }
        let got: Vec<u64> = pool.take_oldest(3, 1.0).iter().map(|t| t.id).collect();
        assert_eq!(got, vec![0, 1, 2]);
        assert_eq!(pool.nonempty_since, Some(1.0));
        pool.take_oldest(10, 2.0);
        assert_eq!(pool.nonempty_since, None);
    }
}
