//! The m-homotopy lifting property on finite squares.
//!
//! A square is `α: W ⇉ A`, `ρ: A ⇉ B` and `β: W × J_k ⇉ B` with
//! `ρ∘α = β(·, 0)`. A filler is an m-continuous `η: W × J_k ⇉ A` with
//! `η(·, 0) = α` and `ρ∘η = β`, equalities read pointwise as set equalities.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hyperspace::{step, HyperStepTable};
use crate::models;
use crate::multimap::MultiMap;
use crate::pointset::{nonempty_subsets, PointSet};
use crate::space::FiniteSpace;

/// Largest source space whose subsets are enumerated as candidate values.
pub const SUBSET_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct CommutingSquare {
    pub w: Arc<FiniteSpace>,
    pub rho: MultiMap,
    pub alpha: MultiMap,
    pub k: usize,
    /// Defined on `W × fence(k)`; point `(w, t)` has index `w·(k+1) + t`.
    pub beta: MultiMap,
}

impl CommutingSquare {
    pub fn new(rho: MultiMap, alpha: MultiMap, k: usize, beta: MultiMap) -> Result<Self> {
        let w = alpha.dom().clone();
        if **alpha.cod() != **rho.dom() {
            return Err(Error::DomainMismatch(
                "α must land in the domain of ρ".into(),
            ));
        }
        if **beta.cod() != **rho.cod() {
            return Err(Error::CodomainMismatch(
                "β must land in the codomain of ρ".into(),
            ));
        }
        let product = FiniteSpace::product(&w, &models::fence(k))?;
        if !beta.dom().same_topology(&product) {
            return Err(Error::DomainMismatch(format!(
                "β must be defined on W × fence({k})"
            )));
        }
        for (name, m) in [("ρ", &rho), ("α", &alpha), ("β", &beta)] {
            if !m.is_m_continuous() {
                return Err(Error::NotContinuous(name.into()));
            }
        }
        for x in 0..w.len() {
            if rho.image(alpha.value(x)) != beta.value(x * (k + 1)) {
                return Err(Error::NotCommuting(format!(
                    "ρ∘α ≠ β at ({}, 0)",
                    w.label(x)
                )));
            }
        }
        Ok(CommutingSquare {
            w,
            rho,
            alpha,
            k,
            beta,
        })
    }

    /// Index of `(w, t)` in `W × fence(k)`.
    pub fn point(&self, w: usize, t: usize) -> usize {
        w * (self.k + 1) + t
    }
}

#[derive(Debug, Clone)]
pub enum FillerOutcome {
    Found(MultiMap),
    NotFound,
    Unknown,
}

impl FillerOutcome {
    pub fn filler(&self) -> Option<&MultiMap> {
        match self {
            FillerOutcome::Found(eta) => Some(eta),
            _ => None,
        }
    }
}

/// Backtracking search for a filler, visiting at most `budget` assignments.
///
/// Points are filled in index order. For `t > 0` the value already chosen at
/// `(w, t−1)` is tried first, so stationary lifts are preferred; the other
/// candidates follow in canonical order.
pub fn find_filler(square: &CommutingSquare, budget: usize) -> Result<FillerOutcome> {
    let a = square.rho.dom();
    let by_image = subsets_by(a.len(), |s| square.rho.image(s))?;
    let dom = square.beta.dom().clone();
    let fixed: Vec<Option<PointSet>> = (0..dom.len())
        .map(|p| (p % (square.k + 1) == 0).then(|| square.alpha.value(p / (square.k + 1))))
        .collect();
    let candidates: Vec<&[PointSet]> = (0..dom.len())
        .map(|p| lookup(&by_image, square.beta.value(p)))
        .collect();
    let mut search = Backtrack {
        dom: &dom,
        cod: a,
        budget,
        steps: 0,
    };
    let mut values = vec![PointSet::EMPTY; dom.len()];
    let hint =
        |p: usize, values: &[PointSet]| (!p.is_multiple_of(square.k + 1)).then(|| values[p - 1]);
    Ok(
        match search.run(&mut values, 0, &fixed, &candidates, &hint) {
            Some(true) => FillerOutcome::Found(MultiMap::new(dom.clone(), a.clone(), values)?),
            Some(false) => FillerOutcome::NotFound,
            None => FillerOutcome::Unknown,
        },
    )
}

/// Independent check of a filler against the square.
pub fn verify_filler(square: &CommutingSquare, eta: &MultiMap) -> bool {
    **eta.dom() == **square.beta.dom()
        && **eta.cod() == **square.rho.dom()
        && eta.semicontinuity().is_ok_and(|s| s.m_continuous)
        && (0..square.w.len()).all(|w| eta.value(square.point(w, 0)) == square.alpha.value(w))
        && (0..eta.dom().len()).all(|p| square.rho.image(eta.value(p)) == square.beta.value(p))
}

/// Structural reasons for a map to be an m-fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FibrationCertificate {
    /// Constant with a value that no deformation step can leave, so every
    /// square has `β` constant and `η(w, t) = α(w)` fills it.
    Constant,
    /// Projection of a product onto the given factor.
    Projection { factor: usize },
    /// Single-valued m-homeomorphism; `η = ρ⁻¹∘β`.
    Homeomorphism,
    /// No certificate; this does not mean `ρ` fails to be an m-fibration.
    None,
}

/// Recognizes the certified classes. `ρ` is expected to be m-continuous;
/// maps that are not get `None`.
pub fn fibration_certificate(rho: &MultiMap) -> FibrationCertificate {
    if !rho.is_m_continuous() {
        return FibrationCertificate::None;
    }
    if rho.is_constant() && isolated_value(rho.cod(), rho.value(0)) {
        return FibrationCertificate::Constant;
    }
    for factor in 0..2 {
        if let Ok(p) = MultiMap::projection(rho.dom(), factor) {
            if **p.cod() == **rho.cod() && p.values() == rho.values() {
                return FibrationCertificate::Projection { factor };
            }
        }
    }
    if rho.values().iter().all(|v| v.len() == 1) && rho.classify().m_homeomorphism {
        return FibrationCertificate::Homeomorphism;
    }
    FibrationCertificate::None
}

/// Whether `s` is alone in its component of the hyper-step graph.
fn isolated_value(b: &Arc<FiniteSpace>, s: PointSet) -> bool {
    let n = b.len();
    if n > crate::hyperspace::HYPERSPACE_LIMIT {
        // Fall back to scanning all subsets directly.
        return n <= SUBSET_LIMIT
            && nonempty_subsets(n)
                .into_iter()
                .all(|t| t == s || (!step(b, s, t) && !step(b, t, s)));
    }
    let table = HyperStepTable::new(b.clone()).expect("size checked");
    table.successors(s).all(|t| t == s) && table.predecessors(s).all(|t| t == s)
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub space: Arc<FiniteSpace>,
    /// `γ*A ⇉ B′`
    pub pi1: MultiMap,
    /// `γ*A ⇉ A`
    pub pi2: MultiMap,
    /// `(b′, a)` for every point.
    pub pairs: Vec<(usize, usize)>,
}

/// `γ*A = {(b′, a) : γ(b′) = ρ(a)}` as a subspace of `B′ × A`.
pub fn pullback(rho: &MultiMap, gamma: &MultiMap) -> Result<Pullback> {
    if **rho.cod() != **gamma.cod() {
        return Err(Error::DomainMismatch(
            "ρ and γ must share a codomain".into(),
        ));
    }
    for (name, m) in [("ρ", rho), ("γ", gamma)] {
        if !m.is_m_continuous() {
            return Err(Error::NotContinuous(name.into()));
        }
    }
    let (a, bp) = (rho.dom(), gamma.dom());
    let mut members = PointSet::EMPTY;
    let mut pairs = Vec::new();
    let product = FiniteSpace::product(bp, a)?;
    for x in 0..bp.len() {
        for y in 0..a.len() {
            if gamma.value(x) == rho.value(y) {
                members.insert(x * a.len() + y);
                pairs.push((x, y));
            }
        }
    }
    if members.is_empty() {
        return Err(Error::EmptyPullback);
    }
    let (space, _) = product.subspace(members)?;
    let space = Arc::new(space);
    let pi1 = MultiMap::from_fn(space.clone(), bp.clone(), |p| {
        PointSet::singleton(pairs[p].0)
    });
    let pi2 = MultiMap::from_fn(space.clone(), a.clone(), |p| {
        PointSet::singleton(pairs[p].1)
    });
    Ok(Pullback {
        space,
        pi1,
        pi2,
        pairs,
    })
}

/// An m-section of `ρ` over an open `C ⊆ B`.
#[derive(Debug, Clone)]
pub struct SectionAssignment {
    pub c: PointSet,
    /// Defined on the subspace `C`, points in increasing order of `B`.
    pub delta: MultiMap,
}

#[derive(Debug, Clone)]
pub enum SectionOutcome {
    Found(SectionAssignment),
    NotFound,
    Unknown,
}

impl SectionOutcome {
    pub fn section(&self) -> Option<&SectionAssignment> {
        match self {
            SectionOutcome::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// Searches for m-continuous `δ: C ⇉ A` with `⋂_{a ∈ δ(b)} ρ(a) = {b}`.
/// The first section in canonical order is returned.
pub fn section_exists(rho: &MultiMap, c: PointSet, budget: usize) -> Result<SectionOutcome> {
    let b = rho.cod();
    if c.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !c.within(b.len()) {
        return Err(Error::OutOfUniverse {
            index: c.iter().last().unwrap_or(0),
            universe: b.len(),
        });
    }
    if !b.is_open(c) {
        return Err(Error::NotOpen(format!("{c:?}")));
    }
    let a = rho.dom();
    let by_meet = subsets_by(a.len(), |s| {
        s.iter().fold(b.points(), |acc, x| acc & rho.value(x))
    })?;
    let (sub, embed) = b.subspace(c)?;
    let sub = Arc::new(sub);
    let candidates: Vec<&[PointSet]> = embed
        .iter()
        .map(|&y| lookup(&by_meet, PointSet::singleton(y)))
        .collect();
    let fixed = vec![None; sub.len()];
    let mut search = Backtrack {
        dom: &sub,
        cod: a,
        budget,
        steps: 0,
    };
    let mut values = vec![PointSet::EMPTY; sub.len()];
    Ok(
        match search.run(&mut values, 0, &fixed, &candidates, &|_, _| None) {
            Some(true) => SectionOutcome::Found(SectionAssignment {
                c,
                delta: MultiMap::new(sub, a.clone(), values)?,
            }),
            Some(false) => SectionOutcome::NotFound,
            None => SectionOutcome::Unknown,
        },
    )
}

/// Independent check of a section assignment.
pub fn verify_section(rho: &MultiMap, section: &SectionAssignment) -> bool {
    let b = rho.cod();
    let Ok((sub, embed)) = b.subspace(section.c) else {
        return false;
    };
    b.is_open(section.c)
        && section.delta.dom().same_topology(&sub)
        && **section.delta.cod() == **rho.dom()
        && section.delta.semicontinuity().is_ok_and(|s| s.m_continuous)
        && embed.iter().enumerate().all(|(i, &y)| {
            let meet = section
                .delta
                .value(i)
                .iter()
                .fold(b.points(), |acc, a| acc & rho.value(a));
            meet == PointSet::singleton(y)
        })
}

/// Random commuting square over `ρ` with the given `W` and fence length.
///
/// `α` is a random m-continuous map and `β` a random m-continuous extension
/// of `ρ∘α` from the 0-slice; if no extension turns up within the step
/// allowance, `β` is the stationary homotopy `β(w, t) = ρ(α(w))`.
pub fn random_square<R: Rng>(
    rho: &MultiMap,
    w: &Arc<FiniteSpace>,
    k: usize,
    rng: &mut R,
) -> Result<CommutingSquare> {
    let alpha = models::random_map(w, rho.dom(), rng);
    let dom = Arc::new(FiniteSpace::product(w, &models::fence(k))?);
    let base: Vec<PointSet> = (0..w.len()).map(|x| rho.image(alpha.value(x))).collect();
    let fixed: Vec<Option<PointSet>> = (0..dom.len())
        .map(|p| (p % (k + 1) == 0).then(|| base[p / (k + 1)]))
        .collect();
    let beta = models::random_map_with(&dom, rho.cod(), &fixed, rng, 20_000).unwrap_or_else(|| {
        MultiMap::from_fn(dom.clone(), rho.cod().clone(), |p| base[p / (k + 1)])
    });
    CommutingSquare::new(rho.clone(), alpha, k, beta)
}

/// Nonempty subsets of an `n`-point set grouped by a key, each group in
/// canonical order.
fn subsets_by(
    n: usize,
    key: impl Fn(PointSet) -> PointSet,
) -> Result<Vec<(PointSet, Vec<PointSet>)>> {
    if n > SUBSET_LIMIT {
        return Err(Error::SizeLimit {
            what: "candidate value enumeration",
            limit: SUBSET_LIMIT,
            got: n,
        });
    }
    let mut groups: Vec<(PointSet, Vec<PointSet>)> = Vec::new();
    for s in nonempty_subsets(n) {
        let k = key(s);
        match groups.binary_search_by(|(g, _)| g.bits().cmp(&k.bits())) {
            Ok(i) => groups[i].1.push(s),
            Err(i) => groups.insert(i, (k, vec![s])),
        }
    }
    Ok(groups)
}

fn lookup(groups: &[(PointSet, Vec<PointSet>)], k: PointSet) -> &[PointSet] {
    groups
        .binary_search_by(|(g, _)| g.bits().cmp(&k.bits()))
        .map_or(&[], |i| groups[i].1.as_slice())
}

/// Assigns values point by point, keeping the map m-continuous on the
/// assigned prefix.
struct Backtrack<'a> {
    dom: &'a FiniteSpace,
    cod: &'a FiniteSpace,
    budget: usize,
    steps: usize,
}

impl Backtrack<'_> {
    /// `Some(found)`, or `None` once the budget is spent.
    fn run(
        &mut self,
        values: &mut [PointSet],
        x: usize,
        fixed: &[Option<PointSet>],
        candidates: &[&[PointSet]],
        hint: &dyn Fn(usize, &[PointSet]) -> Option<PointSet>,
    ) -> Option<bool> {
        if x == values.len() {
            return Some(true);
        }
        let preferred = hint(x, values).filter(|h| candidates[x].contains(h));
        let options: Vec<PointSet> = match fixed[x] {
            Some(v) => vec![v],
            None => preferred
                .into_iter()
                .chain(
                    candidates[x]
                        .iter()
                        .copied()
                        .filter(|&v| Some(v) != preferred),
                )
                .collect(),
        };
        for v in options {
            self.steps += 1;
            if self.steps > self.budget {
                return None;
            }
            let fits = self
                .dom
                .min_open(x)
                .iter()
                .filter(|&y| y < x)
                .all(|y| step(self.cod, v, values[y]))
                && self
                    .dom
                    .up_set(x)
                    .iter()
                    .filter(|&y| y < x)
                    .all(|y| step(self.cod, values[y], v));
            if fits {
                values[x] = v;
                if self.run(values, x + 1, fixed, candidates, hint)? {
                    return Some(true);
                }
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests;
