//! Dominance tests, the nondominated archive and adaptive weight refinement.

mod adaptive;
mod archive;
mod dominance;

pub use adaptive::{
    adaptive_search, adaptive_search_general, adaptive_search_p2, lattice_cells, AdaptiveOutcome,
    AdaptiveParams, AuditRecord, Cell, GapRecord, Termination,
};
pub use archive::{archive_insert, redundancy_ratio, Archive, ArchiveEntry, InsertReport};
pub use dominance::{
    dominates, filter_nondominated, is_weakly_nondominated, same_point, strictly_dominates,
    DOMINANCE_TOL,
};
