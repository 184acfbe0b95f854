//! m-homotopy between m-continuous maps.
//!
//! The unit interval is replaced by finite fences. One deformation step from
//! `f` to `g` is an m-continuous map on `dom × Sierpiński` that is `f` on the
//! closed end and `g` on the open end; this happens exactly when
//! `hyper_step(f(x), g(x))` holds at every point ([`one_step`]). Two maps are
//! m-homotopic when a chain of such steps, in either direction, joins them.
//!
//! Searches are three-valued: `NotHomotopic` is only reported once the whole
//! component has been exhausted, and a spent budget yields `Unknown`.

mod direct;
mod fence;
pub(crate) mod reduce;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperspace::{step, HyperStepTable};
use crate::models;
use crate::multimap::MultiMap;
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

pub use fence::{fence_homotopy, FenceHomotopy};
pub(crate) use reduce::Hyperspace;

/// Default number of maps a single search may visit.
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HomotopyStatus {
    Homotopic,
    NotHomotopic,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct HomotopyVerdict {
    pub status: HomotopyStatus,
    /// Chain of maps from the source to the target (Homotopic only).
    pub certificate: Vec<MultiMap>,
    /// Maps visited across all search phases.
    pub explored: usize,
    pub budget_hit: bool,
    /// Whether the certificate is a shortest chain.
    pub minimal: bool,
}

impl HomotopyVerdict {
    fn unknown(explored: usize) -> Self {
        HomotopyVerdict {
            status: HomotopyStatus::Unknown,
            certificate: vec![],
            explored,
            budget_hit: true,
            minimal: false,
        }
    }

    fn not_homotopic(explored: usize) -> Self {
        HomotopyVerdict {
            status: HomotopyStatus::NotHomotopic,
            certificate: vec![],
            explored,
            budget_hit: false,
            minimal: false,
        }
    }
}

/// How a search is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Decide on the core-reduced problem, then look for a shortest canonical
    /// certificate in the full map space (falling back to the lifted chain
    /// if that search runs out of budget).
    #[default]
    Minimal,
    /// Core-reduced decision only; certificates are lifted chains.
    Reduced,
    /// Breadth-first search over the full map space only.
    Direct,
}

/// Search configuration.
#[derive(Debug, Clone, Copy)]
pub struct HomotopySearch {
    pub budget: usize,
    pub strategy: Strategy,
    pub parallel: bool,
    /// Null-homotopy targets only constants with a single point as value.
    pub singleton_constants: bool,
}

impl Default for HomotopySearch {
    fn default() -> Self {
        HomotopySearch {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Minimal,
            parallel: false,
            singleton_constants: false,
        }
    }
}

impl HomotopySearch {
    pub fn new(budget: usize) -> Self {
        HomotopySearch {
            budget,
            ..Default::default()
        }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn singleton_constants(mut self, yes: bool) -> Self {
        self.singleton_constants = yes;
        self
    }

    pub fn homotopic(&self, f: &MultiMap, g: &MultiMap) -> Result<HomotopyVerdict> {
        check_pair(f, g)?;
        let hs = Hyperspace::new(HyperStepTable::new(f.cod().clone())?);
        Ok(self.homotopic_in(&hs, f, g))
    }

    pub fn null_homotopic(&self, f: &MultiMap) -> Result<HomotopyVerdict> {
        if !f.is_m_continuous() {
            return Err(Error::NotContinuous("f".into()));
        }
        let hs = Hyperspace::new(HyperStepTable::new(f.cod().clone())?);
        Ok(self.null_in(&hs, f))
    }

    pub fn contractible(&self, x: &Arc<FiniteSpace>) -> Result<HomotopyVerdict> {
        self.null_homotopic(&MultiMap::identity(x))
    }

    /// `f`, `g` already validated against `hs`'s codomain.
    pub(crate) fn homotopic_in(
        &self,
        hs: &Hyperspace,
        f: &MultiMap,
        g: &MultiMap,
    ) -> HomotopyVerdict {
        let target: Vec<u16> = g
            .values()
            .iter()
            .map(|&v| hs.table.rank_of(v) as u16)
            .collect();
        self.run(hs, f, reduce::Goal::Map(g), move |s| s == target.as_slice())
    }

    pub(crate) fn null_in(&self, hs: &Hyperspace, f: &MultiMap) -> HomotopyVerdict {
        let singles = self.singleton_constants;
        let table = &hs.table;
        let is_constant = move |s: &[u16]| {
            s.windows(2).all(|w| w[0] == w[1])
                && (!singles || table.subset(s[0] as usize).len() == 1)
        };
        self.run(
            hs,
            f,
            reduce::Goal::Constant {
                singletons: singles,
            },
            is_constant,
        )
    }

    fn run(
        &self,
        hs: &Hyperspace,
        f: &MultiMap,
        goal: reduce::Goal<'_>,
        is_target: impl Fn(&[u16]) -> bool + Sync,
    ) -> HomotopyVerdict {
        if self.strategy == Strategy::Direct {
            let out = direct::search(f, &hs.table, is_target, self.budget, self.parallel);
            return match out.status {
                HomotopyStatus::Homotopic => HomotopyVerdict {
                    status: out.status,
                    certificate: out.certificate,
                    explored: out.explored,
                    budget_hit: false,
                    minimal: true,
                },
                HomotopyStatus::NotHomotopic => HomotopyVerdict::not_homotopic(out.explored),
                HomotopyStatus::Unknown => HomotopyVerdict::unknown(out.explored),
            };
        }
        let reduced = reduce::decide(hs, f, goal, self.budget);
        match reduced.status {
            HomotopyStatus::NotHomotopic => {
                return HomotopyVerdict::not_homotopic(reduced.explored)
            }
            HomotopyStatus::Unknown => return HomotopyVerdict::unknown(reduced.explored),
            HomotopyStatus::Homotopic => {}
        }
        if self.strategy == Strategy::Minimal {
            let out = direct::search(f, &hs.table, is_target, self.budget, self.parallel);
            debug_assert_ne!(
                out.status,
                HomotopyStatus::NotHomotopic,
                "reduced and direct searches disagree"
            );
            if out.status == HomotopyStatus::Homotopic {
                return HomotopyVerdict {
                    status: HomotopyStatus::Homotopic,
                    certificate: out.certificate,
                    explored: reduced.explored + out.explored,
                    budget_hit: false,
                    minimal: true,
                };
            }
        }
        let minimal = reduced.certificate.len() <= 2;
        HomotopyVerdict {
            status: HomotopyStatus::Homotopic,
            certificate: reduced.certificate,
            explored: reduced.explored,
            budget_hit: false,
            minimal,
        }
    }
}

fn check_pair(f: &MultiMap, g: &MultiMap) -> Result<()> {
    if *f.dom() != *g.dom() || *f.cod() != *g.cod() {
        return Err(Error::DomainMismatch(
            "maps must share domain and codomain".into(),
        ));
    }
    if !f.is_m_continuous() {
        return Err(Error::NotContinuous("f".into()));
    }
    if !g.is_m_continuous() {
        return Err(Error::NotContinuous("g".into()));
    }
    Ok(())
}

pub(crate) fn one_step_unchecked(cod: &FiniteSpace, f: &MultiMap, g: &MultiMap) -> bool {
    f.values()
        .iter()
        .zip(g.values())
        .all(|(&s, &t)| step(cod, s, t))
}

/// One step apart in either direction.
pub(crate) fn adjacent(cod: &FiniteSpace, f: &MultiMap, g: &MultiMap) -> bool {
    one_step_unchecked(cod, f, g) || one_step_unchecked(cod, g, f)
}

/// Whether `g` is one deformation step from `f`: `hyper_step(f(x), g(x))` at
/// every point.
pub fn one_step(f: &MultiMap, g: &MultiMap) -> Result<bool> {
    check_pair(f, g)?;
    Ok(one_step_unchecked(f.cod(), f, g))
}

/// Builds `H` on the literal product `dom × Sierpiński` with `H(·,0) = f`,
/// `H(·,1) = g` and checks its semicontinuity against every open set.
pub fn direct_step_oracle(f: &MultiMap, g: &MultiMap) -> Result<bool> {
    check_pair(f, g)?;
    let product = Arc::new(FiniteSpace::product(f.dom(), &models::sierpinski())?);
    let h = MultiMap::new(
        product,
        f.cod().clone(),
        (0..f.dom().len())
            .flat_map(|x| [f.value(x), g.value(x)])
            .collect(),
    )?;
    Ok(h.semicontinuity()?.m_continuous)
}

pub fn are_m_homotopic(f: &MultiMap, g: &MultiMap, budget: usize) -> Result<HomotopyVerdict> {
    HomotopySearch::new(budget).homotopic(f, g)
}

pub fn is_null_m_homotopic(f: &MultiMap, budget: usize) -> Result<HomotopyVerdict> {
    HomotopySearch::new(budget).null_homotopic(f)
}

pub fn is_m_contractible(x: &Arc<FiniteSpace>, budget: usize) -> Result<HomotopyVerdict> {
    HomotopySearch::new(budget).contractible(x)
}

/// Checks a chain: starts at `from`, consecutive entries one step apart in
/// some direction, every entry m-continuous, and the last entry accepted by
/// `is_end`.
pub fn is_valid_chain(
    certificate: &[MultiMap],
    from: &MultiMap,
    is_end: impl Fn(&MultiMap) -> bool,
) -> bool {
    let (Some(first), Some(last)) = (certificate.first(), certificate.last()) else {
        return false;
    };
    first == from
        && is_end(last)
        && certificate
            .iter()
            .all(|m| m.dom() == from.dom() && m.cod() == from.cod() && m.is_m_continuous())
        && certificate
            .windows(2)
            .all(|w| adjacent(from.cod(), &w[0], &w[1]))
}

pub fn is_valid_certificate(certificate: &[MultiMap], f: &MultiMap, g: &MultiMap) -> bool {
    is_valid_chain(certificate, f, |last| last == g)
}

pub fn is_valid_null_certificate(certificate: &[MultiMap], f: &MultiMap) -> bool {
    is_valid_chain(certificate, f, MultiMap::is_constant)
}

/// Whether `a1` can be reached from `a0` in the hyper-step graph on the
/// nonempty subsets of `x` (an m-path from `a0` to `a1`).
pub fn m_path_exists(x: &Arc<FiniteSpace>, a0: PointSet, a1: PointSet) -> Result<bool> {
    if a0.is_empty() || a1.is_empty() {
        return Err(Error::EmptySubset);
    }
    for a in [a0, a1] {
        if !a.within(x.len()) {
            return Err(Error::OutOfUniverse {
                index: a.iter().last().unwrap_or(0),
                universe: x.len(),
            });
        }
    }
    let table = HyperStepTable::new(x.clone())?;
    let comp = table.components();
    Ok(comp[table.rank_of(a0)] == comp[table.rank_of(a1)])
}

/// The first pair of nonempty closed sets (canonical order) that no m-path
/// joins, or `None` when `x` is m-pathwise connected.
pub fn path_disconnection(x: &Arc<FiniteSpace>) -> Result<Option<(PointSet, PointSet)>> {
    let table = HyperStepTable::new(x.clone())?;
    let comp = table.components();
    let closed: Vec<PointSet> = x
        .closed_sets()?
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let first = closed[0];
    Ok(closed
        .iter()
        .find(|&&c| comp[table.rank_of(c)] != comp[table.rank_of(first)])
        .map(|&c| (first, c)))
}

pub fn is_m_pathwise_connected(x: &Arc<FiniteSpace>) -> Result<bool> {
    Ok(path_disconnection(x)?.is_none())
}

#[cfg(test)]
mod tests;
