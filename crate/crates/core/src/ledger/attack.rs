use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    IdentitySpoof,
    AlwaysOn,
    OnOff,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::IdentitySpoof => "identity_spoof",
            AttackKind::AlwaysOn => "always_on",
            AttackKind::OnOff => "on_off",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackerProfile {
    pub node: u64,
    pub kind: AttackKind,
    /// Seconds of correct results per cycle (on-off only).
    #[serde(default)]
    pub on_period: f64,
    #[serde(default)]
    pub off_period: f64,
    /// Identity presented by a spoofer.
    #[serde(default)]
    pub victim: Option<u64>,
}

impl AttackerProfile {
    pub fn validate(&self) -> Result<()> {
        if self.kind == AttackKind::OnOff && !(self.on_period > 0.0 && self.off_period > 0.0) {
            return Err(Error::Config(format!("on-off attacker {} needs positive periods", self.node)));
        }
        Ok(())
    }
}

/// Whether a result computed at `since_spawn` seconds is correct.
pub fn apply_attack(profile: Option<&AttackerProfile>, since_spawn: f64) -> bool {
    match profile.map(|p| (p.kind, p)) {
        None | Some((AttackKind::IdentitySpoof, _)) => true,
        Some((AttackKind::AlwaysOn, _)) => false,
        Some((AttackKind::OnOff, p)) => (since_spawn.max(0.0) % (p.on_period + p.off_period)) < p.on_period,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(kind: AttackKind) -> AttackerProfile {
        AttackerProfile { node: 1, kind, on_period: 5.0, off_period: 5.0, victim: None }
    }

    #[test]
    fn correctness_by_kind() {
        assert!(apply_attack(None, 3.0));
        assert!(!apply_attack(Some(&profile(AttackKind::AlwaysOn)), 0.0));
        let p = profile(AttackKind::OnOff);
        assert!(apply_attack(Some(&p), 2.0));
        assert!(!apply_attack(Some(&p), 7.0));
        assert!(apply_attack(Some(&p), 12.0));
    }

    #[test]
    fn on_off_needs_periods() {
        let mut p = profile(AttackKind::OnOff);
        p.off_period = 0.0;
        assert!(p.validate().is_err());
        assert!(profile(AttackKind::AlwaysOn).validate().is_ok());
    }
}
