//! Multi-valued topology on finite spaces.
//!
//! Spaces are finite preorders given by minimal open neighborhoods
//! ([`FiniteSpace`]), maps are total assignments of nonempty value sets
//! ([`MultiMap`]). On top of these the crate decides m-continuity,
//! m-homotopy (through finite fences standing in for the unit interval), the
//! m-homotopy lifting property on finite squares, and computes the covering
//! invariants D^m, catm, tmc and msecat with cover certificates.
//!
//! All values are values on finite models.

pub mod error;
pub mod fibration;
pub mod homotopy;
pub mod hyperspace;
pub mod invariants;
pub mod io;
pub mod models;
pub mod multimap;
pub mod pointset;
pub mod space;

pub use error::{Error, Result};
pub use fibration::{
    fibration_certificate, find_filler, pullback, section_exists, CommutingSquare,
    FibrationCertificate, FillerOutcome, Pullback, SectionAssignment, SectionOutcome,
};
pub use homotopy::{
    are_m_homotopic, fence_homotopy, is_m_contractible, is_m_pathwise_connected,
    is_null_m_homotopic, m_path_exists, one_step, FenceHomotopy, HomotopySearch, HomotopyStatus,
    HomotopyVerdict, Strategy,
};
pub use hyperspace::{hyper_step, HyperStepTable};
pub use invariants::{
    catm_map, catm_space, homotopic_distance, msecat, tmc_map, tmc_space, Bound, Invariant,
    InvariantOptions, InvariantResult, TmcMode,
};
pub use multimap::{Classification, MultiMap, Semicontinuity};
pub use pointset::PointSet;
pub use space::FiniteSpace;
