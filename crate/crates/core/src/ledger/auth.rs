use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub fn credential_digest(credential: &str) -> String {
    hex::encode(Sha256::digest(credential.as_bytes()))
}

/// Registered identities and the digests of their credentials.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub digests: BTreeMap<u64, String>,
}

impl Registry {
    pub fn register(&mut self, id: u64, credential: &str) {
        self.digests.insert(id, credential_digest(credential));
    }

    pub fn authenticate(&self, id: u64, credential: &str) -> bool {
        self.digests.get(&id).is_some_and(|d| *d == credential_digest(credential))
    }
}
