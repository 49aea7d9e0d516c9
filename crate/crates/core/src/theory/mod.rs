//! The augmentation construction and executable checkers for the structural
//! results, over instances small enough to enumerate.

mod augment;
mod chains;
mod checks;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;
use crate::mechanisms::DEFAULT_MAX_PROFILES;
use crate::model::{MatchingGuard, Problem};

pub use augment::{augment, augmentation_pairs, witness_extension, AugmentedPriority};
pub use chains::{dominance_cover, maximal_pareto_chains, DEFAULT_MAX_CHAINS};
pub use checks::{
    check_corollary1, check_corollary2, check_corollary4, check_corollary5, check_corollary6,
    check_lemma1, check_theorem1,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Lemma1,
    Cor1,
    Cor2,
    Cor4,
    Cor5,
    Cor6,
    Cor7,
    Thm1,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::Lemma1,
        Claim::Cor1,
        Claim::Cor2,
        Claim::Cor4,
        Claim::Cor5,
        Claim::Cor6,
        Claim::Cor7,
        Claim::Thm1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Lemma1 => "lemma1",
            Claim::Cor1 => "cor1",
            Claim::Cor2 => "cor2",
            Claim::Cor4 => "cor4",
            Claim::Cor5 => "cor5",
            Claim::Cor6 => "cor6",
            Claim::Cor7 => "cor7",
            Claim::Thm1 => "thm1",
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Counterexample,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub claim: Claim,
    pub instance: Value,
    pub verdict: Verdict,
    pub detail: String,
    /// Replayable evidence for a counterexample; `null` otherwise.
    pub witness: Value,
}

impl CheckReport {
    pub(crate) fn holds(claim: Claim, prob: &Problem, detail: impl Into<String>) -> Self {
        Self::new(claim, prob, Verdict::Holds, detail.into(), Value::Null)
    }

    pub(crate) fn counterexample(
        claim: Claim,
        prob: &Problem,
        detail: impl Into<String>,
        witness: Value,
    ) -> Self {
        Self::new(claim, prob, Verdict::Counterexample, detail.into(), witness)
    }

    pub(crate) fn skipped(claim: Claim, prob: &Problem, why: &Error) -> Self {
        Self::new(claim, prob, Verdict::Skipped, why.to_string(), Value::Null)
    }

    fn new(claim: Claim, prob: &Problem, verdict: Verdict, detail: String, witness: Value) -> Self {
        Self {
            claim,
            instance: crate::io::problem_json(prob),
            verdict,
            detail,
            witness,
        }
    }

    pub fn holds_or_skipped(&self) -> bool {
        self.verdict != Verdict::Counterexample
    }
}

/// Size limits for exhaustive checks. Instances over a limit are reported
/// as skipped rather than checked partially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckLimits {
    pub max_profiles: u128,
    pub matchings: MatchingGuard,
    pub max_chains: usize,
}

impl Default for CheckLimits {
    fn default() -> Self {
        Self {
            max_profiles: DEFAULT_MAX_PROFILES,
            matchings: MatchingGuard::default(),
            max_chains: DEFAULT_MAX_CHAINS,
        }
    }
}
