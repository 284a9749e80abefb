//! Numerical semigroups, their Apéry-level structure, the numbers `W` and
//! `W₀`, and exhaustive checks over the genus tree.

pub mod apery;
pub mod bitmap;
pub mod campaign;
pub mod census;
pub mod checkpoint;
pub mod error;
pub mod laws;
pub mod predicate;
pub mod records;
pub mod semigroup;
pub mod tree;
pub mod wilf;

pub use apery::{
    apery_analysis, apery_set, compressed_set, dq_count_from_profile, left_count_from_profile,
    level, level_slices, p_left_count_from_profile, profile, AperyAnalysis, CompressedElement,
    LevelSlice, Profile,
};
pub use campaign::{
    run, run_hunt, run_laws, CampaignConfig, CampaignError, CampaignResult, CampaignStatus,
    LawTally, Tallies, ViolationRecord,
};
pub use census::{brute_force_census, CENSUS_MAX_GENUS};
pub use error::SemigroupError;
pub use laws::{Law, LawOutcome};
pub use predicate::{Predicate, PredicateParse};
pub use records::{ReportFormat, ReportRecord};
pub use semigroup::{DepthOffset, NumericalSemigroup, ELEMENT_BOUND};
pub use tree::{enumerate, EnumerationError, Frontier, TreeNode};
pub use wilf::{
    report, sufficient_flags, w0_number, w_number, Flag, FlagSet, WilfError, WilfReport,
};
