//! Covering invariants: D^m, catm, tmc and msecat.
//!
//! Each invariant is the least number of open sets covering a space such
//! that a predicate ("admissibility") holds on every set of the cover. The
//! predicates here are all closed under passing to smaller open sets, so the
//! search only needs the maximal admissible opens and then an exact minimum
//! set cover over them.
//!
//! Admissibility tests are three-valued. The upper bound comes from opens
//! known to be admissible, the lower bound from treating undecided opens as
//! admissible; the value is decided when the two meet.

mod cover;
pub mod oracle;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fibration::{
    fibration_certificate, section_exists, FibrationCertificate, SectionAssignment, SectionOutcome,
};
use crate::homotopy::{
    path_disconnection, HomotopySearch, HomotopyStatus, Hyperspace, Strategy, DEFAULT_BUDGET,
};
use crate::hyperspace::HyperStepTable;
use crate::multimap::MultiMap;
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

pub use cover::min_cover_indices;

/// An upper or lower bound on an invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Finite(usize),
    Infinite,
    Unknown,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => f.write_str("infinity"),
            Bound::Unknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(n) => s.serialize_u64(*n as u64),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    Dm,
    Catm,
    CatmMap,
    Tmc,
    TmcMap,
    Msecat,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Dm => "dm",
            Invariant::Catm => "catm",
            Invariant::CatmMap => "catm-map",
            Invariant::Tmc => "tmc",
            Invariant::TmcMap => "tmc-map",
            Invariant::Msecat => "msecat",
        }
    }
}

/// Why a cover element is admissible.
#[derive(Debug, Clone)]
pub enum Admission {
    /// Chain of deformation steps between the two restricted maps, or from
    /// the restricted map to a constant.
    Homotopy(Vec<MultiMap>),
    Section(SectionAssignment),
}

#[derive(Debug, Clone)]
pub struct CoverEntry {
    pub open: PointSet,
    pub certificate: Admission,
}

/// Counts from the maximal-open enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    /// Nonempty open sets of the covered space.
    pub opens: usize,
    /// Opens on which admissibility was actually tested.
    pub tested: usize,
    pub admissible: usize,
    pub inadmissible: usize,
    pub unknown: usize,
    /// Search nodes spent across all tests.
    pub explored: usize,
}

#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub invariant: Invariant,
    /// The space being covered.
    pub space: Arc<FiniteSpace>,
    pub lower: Bound,
    pub upper: Bound,
    pub decided: bool,
    /// A minimum cover by admissible opens when `upper` is finite.
    pub cover: Vec<CoverEntry>,
    /// When the value is infinite: a point lying in no admissible open.
    pub uncovered: Option<usize>,
    pub stats: CoverStats,
}

impl InvariantResult {
    /// The decided value, if any.
    pub fn value(&self) -> Option<Bound> {
        self.decided.then_some(self.upper)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InvariantOptions {
    /// Per-test search budget.
    pub budget: usize,
    /// Test the candidates of each layer concurrently.
    pub parallel: bool,
    pub singleton_constants: bool,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            budget: DEFAULT_BUDGET,
            parallel: false,
            singleton_constants: false,
        }
    }
}

impl InvariantOptions {
    pub fn new(budget: usize) -> Self {
        InvariantOptions {
            budget,
            ..Default::default()
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn singleton_constants(mut self, yes: bool) -> Self {
        self.singleton_constants = yes;
        self
    }

    fn search(&self) -> HomotopySearch {
        HomotopySearch::new(self.budget)
            .strategy(Strategy::Reduced)
            .singleton_constants(self.singleton_constants)
    }
}

/// Outcome of one admissibility test.
#[derive(Debug, Clone)]
pub enum Verdict {
    Yes(Admission),
    No,
    Unknown,
}

impl Verdict {
    fn from_homotopy(status: HomotopyStatus, certificate: Vec<MultiMap>) -> Self {
        match status {
            HomotopyStatus::Homotopic => Verdict::Yes(Admission::Homotopy(certificate)),
            HomotopyStatus::NotHomotopic => Verdict::No,
            HomotopyStatus::Unknown => Verdict::Unknown,
        }
    }
}

/// Minimum cover of `space` by admissible opens, assuming admissibility is
/// inherited by smaller opens.
///
/// Opens are visited from largest to smallest. An open inside a known
/// admissible open is skipped; every other one is tested, so each admissible
/// open found is maximal.
pub fn cover_search(
    invariant: Invariant,
    space: &Arc<FiniteSpace>,
    parallel: bool,
    test: impl Fn(PointSet) -> (Verdict, usize) + Sync,
) -> Result<InvariantResult> {
    let opens: Vec<PointSet> = space
        .open_sets()?
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let mut stats = CoverStats {
        opens: opens.len(),
        ..Default::default()
    };
    let mut admissible: Vec<(PointSet, Admission)> = Vec::new();
    let mut unknown: Vec<PointSet> = Vec::new();
    let largest = opens.iter().map(|c| c.len()).max().unwrap_or(0);
    for size in (1..=largest).rev() {
        let layer: Vec<PointSet> = opens
            .iter()
            .copied()
            .filter(|c| c.len() == size && !admissible.iter().any(|(a, _)| c.is_subset(*a)))
            .collect();
        let verdicts: Vec<(Verdict, usize)> = if parallel {
            layer.par_iter().map(|&c| test(c)).collect()
        } else {
            layer.iter().map(|&c| test(c)).collect()
        };
        for (c, (verdict, explored)) in layer.into_iter().zip(verdicts) {
            stats.tested += 1;
            stats.explored += explored;
            match verdict {
                Verdict::Yes(a) => {
                    stats.admissible += 1;
                    admissible.push((c, a));
                }
                Verdict::No => stats.inadmissible += 1,
                Verdict::Unknown => {
                    stats.unknown += 1;
                    unknown.push(c);
                }
            }
        }
    }

    let universe = space.points();
    let strict: Vec<PointSet> = admissible.iter().map(|(c, _)| *c).collect();
    let mut relaxed: Vec<PointSet> = strict.iter().chain(&unknown).copied().collect();
    relaxed.sort();
    let relaxed: Vec<PointSet> = relaxed
        .iter()
        .copied()
        .filter(|c| !relaxed.iter().any(|d| d != c && c.is_subset(*d)))
        .collect();

    let mut result = InvariantResult {
        invariant,
        space: space.clone(),
        lower: Bound::Infinite,
        upper: Bound::Infinite,
        decided: true,
        cover: vec![],
        uncovered: None,
        stats,
    };
    let Some(relaxed_cover) = min_cover_indices(universe, &relaxed) else {
        let covered = relaxed.iter().fold(PointSet::EMPTY, |acc, &c| acc | c);
        result.uncovered = universe.difference(covered).first();
        return Ok(result);
    };
    result.lower = Bound::Finite(relaxed_cover.len());
    // Canonical order of the admissible family keeps the chosen cover stable.
    let mut order: Vec<usize> = (0..strict.len()).collect();
    order.sort_by_key(|&i| strict[i]);
    let sorted: Vec<PointSet> = order.iter().map(|&i| strict[i]).collect();
    match min_cover_indices(universe, &sorted) {
        Some(chosen) => {
            result.upper = Bound::Finite(chosen.len());
            result.decided = chosen.len() == relaxed_cover.len();
            result.cover = chosen
                .into_iter()
                .map(|j| {
                    let (open, certificate) = admissible[order[j]].clone();
                    CoverEntry { open, certificate }
                })
                .collect();
        }
        None => {
            result.upper = Bound::Unknown;
            result.decided = false;
        }
    }
    Ok(result)
}

fn check_continuous(name: &str, f: &MultiMap) -> Result<()> {
    if f.is_m_continuous() {
        Ok(())
    } else {
        Err(Error::NotContinuous(name.into()))
    }
}

fn hyperspace(cod: &Arc<FiniteSpace>) -> Result<Hyperspace> {
    Ok(Hyperspace::new(HyperStepTable::new(cod.clone())?))
}

fn dm_as(
    invariant: Invariant,
    alpha: &MultiMap,
    beta: &MultiMap,
    opts: &InvariantOptions,
) -> Result<InvariantResult> {
    if **alpha.dom() != **beta.dom() || **alpha.cod() != **beta.cod() {
        return Err(Error::DomainMismatch(
            "α and β must share domain and codomain".into(),
        ));
    }
    check_continuous("α", alpha)?;
    check_continuous("β", beta)?;
    let hs = hyperspace(alpha.cod())?;
    let search = opts.search();
    cover_search(invariant, alpha.dom(), opts.parallel, |c| {
        let (f, g) = (
            alpha.restrict(c).expect("nonempty"),
            beta.restrict(c).expect("nonempty"),
        );
        let v = search.homotopic_in(&hs, &f, &g);
        (Verdict::from_homotopy(v.status, v.certificate), v.explored)
    })
}

/// `D^m(α, β)`: admissible opens are those on which `α` and `β` restrict to
/// m-homotopic maps.
pub fn homotopic_distance(
    alpha: &MultiMap,
    beta: &MultiMap,
    opts: &InvariantOptions,
) -> Result<InvariantResult> {
    dm_as(Invariant::Dm, alpha, beta, opts)
}

fn null_cover(
    invariant: Invariant,
    f: &MultiMap,
    opts: &InvariantOptions,
) -> Result<InvariantResult> {
    check_continuous("α", f)?;
    let hs = hyperspace(f.cod())?;
    let search = opts.search();
    cover_search(invariant, f.dom(), opts.parallel, |c| {
        let v = search.null_in(&hs, &f.restrict(c).expect("nonempty"));
        (Verdict::from_homotopy(v.status, v.certificate), v.explored)
    })
}

/// `catm(X)`: admissible opens are those whose inclusion is null-homotopic.
pub fn catm_space(x: &Arc<FiniteSpace>, opts: &InvariantOptions) -> Result<InvariantResult> {
    null_cover(Invariant::Catm, &MultiMap::identity(x), opts)
}

/// `catm(α) = D^m(α, ζ)`: admissible opens are those on which `α` restricts
/// to a null-homotopic map.
pub fn catm_map(alpha: &MultiMap, opts: &InvariantOptions) -> Result<InvariantResult> {
    null_cover(Invariant::CatmMap, alpha, opts)
}

fn require_path_connected(x: &Arc<FiniteSpace>) -> Result<()> {
    match path_disconnection(x)? {
        None => Ok(()),
        Some((a, b)) => Err(Error::NotPathConnected {
            from: x.describe(a),
            to: x.describe(b),
        }),
    }
}

fn projections(x: &Arc<FiniteSpace>) -> Result<(MultiMap, MultiMap)> {
    let xx = Arc::new(FiniteSpace::product(x, x)?);
    Ok((MultiMap::projection(&xx, 0)?, MultiMap::projection(&xx, 1)?))
}

/// `tmc(X) = D^m(ρ₁, ρ₂)` on `X × X`.
pub fn tmc_space(x: &Arc<FiniteSpace>, opts: &InvariantOptions) -> Result<InvariantResult> {
    require_path_connected(x)?;
    let (p1, p2) = projections(x)?;
    dm_as(Invariant::Tmc, &p1, &p2, opts)
}

/// Which pair of maps `X × X ⇉ ·` the map version of tmc compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TmcMode {
    /// `α∘ρ₁` against `α∘ρ₂`, both into `Y`.
    #[default]
    Repaired,
    /// `α∘ρ₁` against `ρ₂`; only meaningful when `Y = X`.
    Literal,
}

#[derive(Debug, Clone)]
pub struct TmcMapResult {
    pub result: InvariantResult,
    pub mode: TmcMode,
    pub fibration: FibrationCertificate,
    pub injective: bool,
}

/// Topological multi-complexity of a surjective map `α: X ⇉ Y`.
///
/// The value is computed whether or not `α` carries a fibration
/// certificate; the certificate status is returned alongside.
pub fn tmc_map(alpha: &MultiMap, mode: TmcMode, opts: &InvariantOptions) -> Result<TmcMapResult> {
    check_continuous("α", alpha)?;
    let class = alpha.classify();
    if !class.surjective {
        return Err(Error::NotSurjective);
    }
    require_path_connected(alpha.dom())?;
    require_path_connected(alpha.cod())?;
    let (p1, p2) = projections(alpha.dom())?;
    let left = MultiMap::compose(alpha, &p1)?;
    let right = match mode {
        TmcMode::Repaired => MultiMap::compose(alpha, &p2)?,
        TmcMode::Literal => {
            if **alpha.cod() != **alpha.dom() {
                return Err(Error::CodomainMismatch(
                    "the literal mode compares α∘ρ₁ with ρ₂ and needs Y = X".into(),
                ));
            }
            p2
        }
    };
    Ok(TmcMapResult {
        result: dm_as(Invariant::TmcMap, &left, &right, opts)?,
        mode,
        fibration: fibration_certificate(alpha),
        injective: class.injective,
    })
}

/// `msecat(ρ)`: opens of `B` carrying an m-section of `ρ`.
pub fn msecat(rho: &MultiMap, opts: &InvariantOptions) -> Result<InvariantResult> {
    check_continuous("ρ", rho)?;
    let budget = opts.budget;
    cover_search(
        Invariant::Msecat,
        rho.cod(),
        opts.parallel,
        |c| match section_exists(rho, c, budget).expect("c is a nonempty open") {
            SectionOutcome::Found(s) => (Verdict::Yes(Admission::Section(s)), 1),
            SectionOutcome::NotFound => (Verdict::No, 1),
            SectionOutcome::Unknown => (Verdict::Unknown, 1),
        },
    )
}

/// Re-checks a finite result independently: the cover has `upper` open
/// sets, covers the space, and `check` accepts every certificate.
pub fn verify_cover(
    result: &InvariantResult,
    check: impl Fn(PointSet, &Admission) -> bool,
) -> bool {
    let Bound::Finite(n) = result.upper else {
        return result.cover.is_empty();
    };
    let space = &result.space;
    let union = result
        .cover
        .iter()
        .fold(PointSet::EMPTY, |acc, e| acc | e.open);
    result.cover.len() == n
        && union == space.points()
        && result
            .cover
            .iter()
            .all(|e| space.is_open(e.open) && check(e.open, &e.certificate))
}

/// Checker for D^m-style results: each certificate joins `α|C` to `β|C`.
pub fn dm_checker<'a>(
    alpha: &'a MultiMap,
    beta: &'a MultiMap,
) -> impl Fn(PointSet, &Admission) -> bool + 'a {
    move |c, cert| match (cert, alpha.restrict(c), beta.restrict(c)) {
        (Admission::Homotopy(chain), Ok(f), Ok(g)) => {
            crate::homotopy::is_valid_certificate(chain, &f, &g)
        }
        _ => false,
    }
}

/// Checker for catm-style results: each certificate takes `α|C` to a constant.
pub fn null_checker(alpha: &MultiMap) -> impl Fn(PointSet, &Admission) -> bool + '_ {
    move |c, cert| match (cert, alpha.restrict(c)) {
        (Admission::Homotopy(chain), Ok(f)) => {
            crate::homotopy::is_valid_null_certificate(chain, &f)
        }
        _ => false,
    }
}

/// Checker for msecat results.
pub fn section_checker(rho: &MultiMap) -> impl Fn(PointSet, &Admission) -> bool + '_ {
    move |c, cert| match cert {
        Admission::Section(s) => s.c == c && crate::fibration::verify_section(rho, s),
        _ => false,
    }
}
