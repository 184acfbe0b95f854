//! Definitional brute-force oracles for the covering invariants.
//!
//! Admissibility is decided on every nonempty open, with no use of
//! monotonicity, and then all families of opens are tried in order of size.
//! Only practical for small spaces.

use std::sync::Arc;

use crate::error::Result;
use crate::fibration::{section_exists, SectionOutcome};
use crate::homotopy::{HomotopySearch, HomotopyStatus};
use crate::multimap::MultiMap;
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

use super::Bound;

/// Least number of admissible opens covering `space`.
///
/// `admissible` returns `None` when undecided; a cover that would need an
/// undecided open, or the absence of a cover while some open is undecided,
/// yields `Unknown`.
pub fn cover_number(
    space: &FiniteSpace,
    admissible: impl Fn(PointSet) -> Option<bool>,
) -> Result<Bound> {
    let opens: Vec<PointSet> = space
        .open_sets()?
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let verdicts: Vec<Option<bool>> = opens.iter().map(|&c| admissible(c)).collect();
    let yes: Vec<PointSet> = opens
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| **v == Some(true))
        .map(|(c, _)| *c)
        .collect();
    let maybe: Vec<PointSet> = opens
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| **v != Some(false))
        .map(|(c, _)| *c)
        .collect();
    let universe = space.points();
    let strict = smallest_cover(universe, &yes);
    let relaxed = smallest_cover(universe, &maybe);
    Ok(match (strict, relaxed) {
        (Some(s), Some(r)) if s == r => Bound::Finite(s),
        (None, None) => Bound::Infinite,
        _ => Bound::Unknown,
    })
}

/// Smallest `k` such that some `k` members of `family` cover `universe`.
fn smallest_cover(universe: PointSet, family: &[PointSet]) -> Option<usize> {
    (1..=universe.len()).find(|&k| covers_with(universe, family, 0, k))
}

fn covers_with(uncovered: PointSet, family: &[PointSet], from: usize, k: usize) -> bool {
    if uncovered.is_empty() {
        return true;
    }
    k > 0
        && (from..family.len()).any(|i| {
            family[i].intersects(uncovered)
                && covers_with(uncovered.difference(family[i]), family, i + 1, k - 1)
        })
}

fn homotopy_verdict(status: HomotopyStatus) -> Option<bool> {
    match status {
        HomotopyStatus::Homotopic => Some(true),
        HomotopyStatus::NotHomotopic => Some(false),
        HomotopyStatus::Unknown => None,
    }
}

pub fn homotopic_distance(
    alpha: &MultiMap,
    beta: &MultiMap,
    search: &HomotopySearch,
) -> Result<Bound> {
    cover_number(alpha.dom(), |c| {
        let v = search
            .homotopic(
                &alpha.restrict(c).expect("nonempty"),
                &beta.restrict(c).expect("nonempty"),
            )
            .expect("restrictions of m-continuous maps");
        homotopy_verdict(v.status)
    })
}

pub fn catm_map(alpha: &MultiMap, search: &HomotopySearch) -> Result<Bound> {
    cover_number(alpha.dom(), |c| {
        let v = search
            .null_homotopic(&alpha.restrict(c).expect("nonempty"))
            .expect("restriction of an m-continuous map");
        homotopy_verdict(v.status)
    })
}

pub fn catm_space(x: &Arc<FiniteSpace>, search: &HomotopySearch) -> Result<Bound> {
    catm_map(&MultiMap::identity(x), search)
}

pub fn tmc_space(x: &Arc<FiniteSpace>, search: &HomotopySearch) -> Result<Bound> {
    super::require_path_connected(x)?;
    let (p1, p2) = super::projections(x)?;
    homotopic_distance(&p1, &p2, search)
}

pub fn msecat(rho: &MultiMap, budget: usize) -> Result<Bound> {
    cover_number(rho.cod(), |c| match section_exists(rho, c, budget) {
        Ok(SectionOutcome::Found(_)) => Some(true),
        Ok(SectionOutcome::NotFound) => Some(false),
        _ => None,
    })
}
