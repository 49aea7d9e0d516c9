//! Deferred acceptance, tiebreaking extension profiles and EADAM.

pub(crate) mod da;
mod eadam;
mod profile;

pub use da::{deferred_acceptance, deferred_acceptance_with};
pub use eadam::{
    eadam, eadam_trace, eadam_with, EadamConfig, EadamRound, EadamTrace, PreferenceDeletion,
};
pub use profile::{
    count_extension_profiles, enumerate_extension_profiles, enumerate_single_tiebreak_profiles,
    extend_profile, extend_profile_tiebreak, ExtensionProfile, TiebreakKind, TiebreakProfile,
    DEFAULT_MAX_PROFILES,
};
