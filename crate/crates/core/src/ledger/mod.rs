//! Payments on a proof-of-stake chain, reputations and attacker models.

pub mod attack;
pub mod auth;
pub mod block;
pub mod chain;
pub mod pos;
pub mod reputation;
pub mod tx;

pub use attack::{apply_attack, AttackKind, AttackerProfile};
pub use auth::Registry;
pub use block::{Block, GENESIS_PARENT};
pub use chain::{reward_validator, BlockReject, Chain};
pub use pos::{maybe_forge_block, select_validator, ForgeOutcome, ForgeRules};
pub use reputation::{AuditOutcome, Record, ReputationLedger};
pub use tx::{submit_transaction, TaskProfile, Transaction, TxPool, TxReject};
