//! Exhaustive homotopy decisions on core-reduced problems.
//!
//! m-continuous maps `C ⇉ Y` are order-preserving maps `C → H(Y)` into the
//! hyper-step preorder, and one deformation step is pointwise comparability.
//! Removing beat points (and identifying equivalent points) from either side
//! gives retractions `r` with `i∘r` one step away from the identity, so
//! `f ≃ g` iff `r_H∘f∘i_C ≃ r_H∘g∘i_C` as maps from the domain core into the
//! hyperspace core. On T0 cores a component of the map poset is also
//! connected through single-point moves, which keeps neighbor generation
//! linear. Chains found there lift back to full certificates.

use std::collections::HashMap;
use std::mem;

use crate::hyperspace::HyperStepTable;
use crate::multimap::MultiMap;
use crate::pointset::PointSet;

use super::{adjacent, HomotopyStatus};

/// Hyperspace cores are only computed up to this codomain size; larger
/// codomains are searched unreduced.
pub(crate) const CORE_LIMIT: usize = 8;

/// A sequence of retraction steps on a finite preorder.
#[derive(Debug, Clone)]
pub(crate) struct Retraction {
    /// Each batch moves every listed point onto its target; all moves in a
    /// batch are comparable in the same direction (or equivalences).
    pub batches: Vec<Vec<(usize, usize)>>,
    /// Surviving points, ascending.
    pub alive: Vec<usize>,
    /// Final image of every point.
    pub image: Vec<usize>,
}

impl Retraction {
    fn identity(n: usize) -> Self {
        Retraction {
            batches: vec![],
            alive: (0..n).collect(),
            image: (0..n).collect(),
        }
    }

    /// Kolmogorov quotient followed by beat-point removal; `le(a, b)` is
    /// `a <= b`.
    pub fn core(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let mut batches = Vec::new();
        let mut alive = vec![true; n];
        let mut merge = Vec::new();
        for x in 0..n {
            if let Some(rep) = (0..x).find(|&y| alive[y] && le(x, y) && le(y, x)) {
                alive[x] = false;
                merge.push((x, rep));
            }
        }
        if !merge.is_empty() {
            batches.push(merge);
        }
        'scan: loop {
            for x in 0..n {
                if !alive[x] {
                    continue;
                }
                let below: Vec<usize> =
                    (0..n).filter(|&y| y != x && alive[y] && le(y, x)).collect();
                if let Some(&m) = below.iter().find(|&&m| below.iter().all(|&z| le(z, m))) {
                    alive[x] = false;
                    batches.push(vec![(x, m)]);
                    continue 'scan;
                }
                let above: Vec<usize> =
                    (0..n).filter(|&y| y != x && alive[y] && le(x, y)).collect();
                if let Some(&m) = above.iter().find(|&&m| above.iter().all(|&z| le(m, z))) {
                    alive[x] = false;
                    batches.push(vec![(x, m)]);
                    continue 'scan;
                }
            }
            break;
        }
        let mut image: Vec<usize> = (0..n).collect();
        for batch in &batches {
            for &(from, to) in batch {
                for v in image.iter_mut() {
                    if *v == from {
                        *v = to;
                    }
                }
            }
        }
        Retraction {
            batches,
            alive: (0..n).filter(|&x| alive[x]).collect(),
            image,
        }
    }
}

/// The hyper-step preorder of a codomain together with its core.
pub(crate) struct Hyperspace {
    pub table: HyperStepTable,
    pub core: Retraction,
    /// rank ↦ position in `core.alive` (for alive ranks).
    position: Vec<usize>,
    /// `le[a][b]` over core positions: `a <= b`, i.e. `step(b, a)`.
    le: Vec<Vec<bool>>,
    /// Positions comparable to each position, ascending, excluding itself.
    comparable: Vec<Vec<u16>>,
}

impl Hyperspace {
    pub fn new(table: HyperStepTable) -> Self {
        let n = table.len();
        let core = if table.cod().len() <= CORE_LIMIT {
            Retraction::core(n, |a, b| table.step_ranked(b, a))
        } else {
            Retraction::identity(n)
        };
        let mut position = vec![usize::MAX; n];
        for (p, &r) in core.alive.iter().enumerate() {
            position[r] = p;
        }
        let k = core.alive.len();
        let le: Vec<Vec<bool>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| table.step_ranked(core.alive[b], core.alive[a]))
                    .collect()
            })
            .collect();
        let comparable = (0..k)
            .map(|a| {
                (0..k)
                    .filter(|&b| b != a && (le[a][b] || le[b][a]))
                    .map(|b| b as u16)
                    .collect()
            })
            .collect();
        Hyperspace {
            table,
            core,
            position,
            le,
            comparable,
        }
    }

    fn reduce_value(&self, v: PointSet) -> u16 {
        self.position[self.core.image[self.table.rank_of(v)]] as u16
    }

    fn core_value(&self, p: u16) -> PointSet {
        self.table.subset(self.core.alive[p as usize])
    }
}

/// What the reduced search is looking for.
pub(crate) enum Goal<'a> {
    Map(&'a MultiMap),
    /// Any constant map; `singletons` restricts to constant values `{y}`.
    Constant {
        singletons: bool,
    },
}

pub(crate) struct ReducedOutcome {
    pub status: HomotopyStatus,
    pub certificate: Vec<MultiMap>,
    pub explored: usize,
}

type State = Vec<u16>;

/// Decides whether `f` reaches the goal; on success returns a lifted,
/// shortcut-compressed certificate in the full map space.
pub(crate) fn decide(
    hs: &Hyperspace,
    f: &MultiMap,
    goal: Goal<'_>,
    budget: usize,
) -> ReducedOutcome {
    let dom = f.dom();
    let n = dom.len();
    let dom_core = Retraction::core(n, |a, b| dom.leq(a, b));
    let pts = &dom_core.alive;
    let m = pts.len();
    let mut dpos = vec![usize::MAX; n];
    for (i, &x) in pts.iter().enumerate() {
        dpos[x] = i;
    }
    // strict neighbors within the domain core
    let below: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && dom.leq(pts[j], pts[i]))
                .collect()
        })
        .collect();
    let above: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && dom.leq(pts[i], pts[j]))
                .collect()
        })
        .collect();

    let reduce =
        |map: &MultiMap| -> State { pts.iter().map(|&x| hs.reduce_value(map.value(x))).collect() };
    let start = reduce(f);
    let targets: Vec<State> = match goal {
        Goal::Map(g) => vec![reduce(g)],
        Goal::Constant { singletons } => {
            let mut values: Vec<u16> = if singletons {
                (0..hs.table.cod().len())
                    .map(|y| hs.reduce_value(PointSet::singleton(y)))
                    .collect()
            } else {
                (0..hs.core.alive.len() as u16).collect()
            };
            values.sort_unstable();
            values.dedup();
            values.into_iter().map(|v| vec![v; m]).collect()
        }
    };

    let neighbors = |cur: &State| -> Vec<State> {
        let mut out = Vec::new();
        for i in 0..m {
            for &v in &hs.comparable[cur[i] as usize] {
                let ok = below[i].iter().all(|&j| hs.le[cur[j] as usize][v as usize])
                    && above[i].iter().all(|&j| hs.le[v as usize][cur[j] as usize]);
                if ok {
                    let mut next = cur.clone();
                    next[i] = v;
                    out.push(next);
                }
            }
        }
        out
    };

    // Bidirectional search: the smaller frontier is expanded one layer at a
    // time. If either side runs out the two components differ.
    let mut sides = [Side::new(vec![start]), Side::new(targets)];
    let mut meeting = sides[1].index.get(&sides[0].states[0]).map(|&j| (0, j));
    while meeting.is_none() {
        let s = if sides[0].frontier.len() <= sides[1].frontier.len() {
            0
        } else {
            1
        };
        if sides[s].frontier.is_empty() {
            return ReducedOutcome {
                status: HomotopyStatus::NotHomotopic,
                certificate: vec![],
                explored: sides[0].states.len() + sides[1].states.len(),
            };
        }
        let [a, b] = &mut sides;
        let (this, other) = if s == 0 { (a, b) } else { (b, a) };
        let frontier = mem::take(&mut this.frontier);
        'layer: for head in frontier {
            for next in neighbors(&this.states[head]) {
                if this.index.contains_key(&next) {
                    continue;
                }
                let at = this.push(next, head);
                if let Some(&j) = other.index.get(&this.states[at]) {
                    meeting = Some(if s == 0 { (at, j) } else { (j, at) });
                    break 'layer;
                }
            }
        }
        if meeting.is_none() && sides[0].states.len() + sides[1].states.len() > budget {
            return ReducedOutcome {
                status: HomotopyStatus::Unknown,
                certificate: vec![],
                explored: sides[0].states.len() + sides[1].states.len(),
            };
        }
    }
    let explored = sides[0].states.len() + sides[1].states.len();
    let (i, j) = meeting.expect("loop exits on a meeting");
    let mut chain: Vec<State> = sides[0].path_to_root(i);
    chain.reverse();
    chain.extend(sides[1].path_to_root(j).into_iter().skip(1));

    // Lift: f ~ f∘r_C ~ r_H∘f∘r_C = lift(start), reduced chain, then back to g.
    let lift = |s: &State| -> MultiMap {
        f.with_values(
            (0..n)
                .map(|z| hs.core_value(s[dpos[dom_core.image[z]]]))
                .collect(),
        )
    };
    let mut certificate = retraction_chain(hs, &dom_core, f);
    certificate.extend(chain.iter().map(lift));
    if let Goal::Map(g) = goal {
        let mut back = retraction_chain(hs, &dom_core, g);
        back.reverse();
        certificate.extend(back);
    }
    certificate.dedup_by(|a, b| a.values() == b.values());
    ReducedOutcome {
        status: HomotopyStatus::Homotopic,
        certificate: shortcut(certificate),
        explored,
    }
}

/// One direction of the bidirectional search.
struct Side {
    states: Vec<State>,
    parent: Vec<usize>,
    index: HashMap<State, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(roots: Vec<State>) -> Self {
        let mut side = Side {
            states: vec![],
            parent: vec![],
            index: HashMap::new(),
            frontier: vec![],
        };
        for r in roots {
            if !side.index.contains_key(&r) {
                side.push(r, usize::MAX);
            }
        }
        side
    }

    fn push(&mut self, s: State, parent: usize) -> usize {
        let at = self.states.len();
        self.index.insert(s.clone(), at);
        self.states.push(s);
        self.parent.push(parent);
        self.frontier.push(at);
        at
    }

    /// States from `i` back to a root.
    fn path_to_root(&self, mut i: usize) -> Vec<State> {
        let mut out = vec![self.states[i].clone()];
        while self.parent[i] != usize::MAX {
            i = self.parent[i];
            out.push(self.states[i].clone());
        }
        out
    }
}

/// `f, f∘ψ₁, .., f∘r_C, φ₁∘f∘r_C, .., r_H∘f∘r_C`: consecutive entries are
/// one deformation step apart.
fn retraction_chain(hs: &Hyperspace, dom_core: &Retraction, f: &MultiMap) -> Vec<MultiMap> {
    let n = f.dom().len();
    let mut chain = vec![f.clone()];
    let mut along: Vec<usize> = (0..n).collect();
    for batch in &dom_core.batches {
        for v in along.iter_mut() {
            if let Some(&(_, to)) = batch.iter().find(|(from, _)| from == v) {
                *v = to;
            }
        }
        chain.push(f.with_values(along.iter().map(|&x| f.value(x)).collect()));
    }
    let mut ranks: Vec<usize> = along
        .iter()
        .map(|&x| hs.table.rank_of(f.value(x)))
        .collect();
    for batch in &hs.core.batches {
        let mut changed = false;
        for r in ranks.iter_mut() {
            if let Some(&(_, to)) = batch.iter().find(|(from, _)| from == r) {
                *r = to;
                changed = true;
            }
        }
        if changed {
            chain.push(f.with_values(ranks.iter().map(|&r| hs.table.subset(r)).collect()));
        }
    }
    chain
}

/// Greedily jumps to the furthest entry still one step away.
pub(crate) fn shortcut(chain: Vec<MultiMap>) -> Vec<MultiMap> {
    if chain.len() <= 2 {
        return chain;
    }
    let cod = chain[0].cod().clone();
    let mut out = vec![chain[0].clone()];
    let mut i = 0;
    while i + 1 < chain.len() {
        let j = (i + 1..chain.len())
            .rev()
            .find(|&j| adjacent(&cod, &chain[i], &chain[j]))
            .unwrap_or(i + 1);
        out.push(chain[j].clone());
        i = j;
    }
    out
}

/// Domain core of a space, exposed for tests.
#[cfg(test)]
pub(crate) fn domain_core(x: &crate::space::FiniteSpace) -> Vec<usize> {
    Retraction::core(x.len(), |a, b| x.leq(a, b)).alive
}
