//! Named rewrite rules, matching in context, and their certification.

mod matching;
mod rules;
mod verify;

pub use matching::{apply, check_embedding, find_matches, find_pattern, Embedding};
pub use rules::{elim, five, four, fuse, n_legged, n_plus, naive, pauli1, rule, RewriteRule, RuleName};
pub use verify::{
    check_direction, verify_distance_preserving, verify_distance_preserving_with, verify_semantics,
    verify_semantics_with, DirectionReport, PreservationReport, Verdict, VerifyOptions, Witness,
};
