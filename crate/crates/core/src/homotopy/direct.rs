//! Breadth-first search over the full space of m-continuous maps.
//!
//! Vertices are maps, edges join `p` and `q` when one is a single deformation
//! step from the other. Layers are expanded in canonical order and the
//! certificate is the lexicographically least among the shortest chains, so
//! results do not depend on worker count.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::hyperspace::HyperStepTable;
use crate::multimap::MultiMap;
use crate::space::FiniteSpace;

use super::HomotopyStatus;

/// Values stored as hyperspace ranks; lexicographic order on these vectors
/// is the canonical map order.
type State = Vec<u16>;

/// States expanded together before the budget is rechecked.
const CHUNK: usize = 64;

pub(crate) struct DirectOutcome {
    pub status: HomotopyStatus,
    pub certificate: Vec<MultiMap>,
    pub explored: usize,
}

pub(crate) struct MapGraph<'a> {
    dom: &'a FiniteSpace,
    table: &'a HyperStepTable,
    /// strict lower / upper neighbors with smaller index
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

impl<'a> MapGraph<'a> {
    pub fn new(dom: &'a FiniteSpace, table: &'a HyperStepTable) -> Self {
        let n = dom.len();
        let below = (0..n)
            .map(|x| dom.min_open(x).iter().filter(|&y| y < x).collect())
            .collect();
        let above = (0..n)
            .map(|x| dom.up_set(x).iter().filter(|&y| y < x).collect())
            .collect();
        MapGraph {
            dom,
            table,
            below,
            above,
        }
    }

    fn state_of(&self, f: &MultiMap) -> State {
        f.values()
            .iter()
            .map(|&v| self.table.rank_of(v) as u16)
            .collect()
    }

    fn adjacent(&self, p: &State, q: &State) -> bool {
        let fwd = p
            .iter()
            .zip(q)
            .all(|(&a, &b)| self.table.step_ranked(a as usize, b as usize));
        fwd || p
            .iter()
            .zip(q)
            .all(|(&a, &b)| self.table.step_ranked(b as usize, a as usize))
    }

    /// All m-continuous `q ≠ p` one step away from `p`, sorted.
    fn neighbors(&self, p: &State, cap: usize) -> Option<Vec<State>> {
        let n = p.len();
        let mut out = Vec::new();
        for forward in [true, false] {
            let candidates: Vec<Vec<u16>> = (0..n)
                .map(|x| {
                    let s = self.table.subset(p[x] as usize);
                    let it: Box<dyn Iterator<Item = _>> = if forward {
                        Box::new(self.table.successors(s))
                    } else {
                        Box::new(self.table.predecessors(s))
                    };
                    it.map(|t| self.table.rank_of(t) as u16).collect()
                })
                .collect();
            let mut q = vec![0u16; n];
            if !self.fill(&candidates, &mut q, 0, &mut out, cap) {
                return None;
            }
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|q| q != p);
        Some(out)
    }

    fn fill(
        &self,
        candidates: &[Vec<u16>],
        q: &mut State,
        x: usize,
        out: &mut Vec<State>,
        cap: usize,
    ) -> bool {
        if x == q.len() {
            out.push(q.clone());
            return out.len() <= cap;
        }
        for &v in &candidates[x] {
            let ok = self.below[x]
                .iter()
                .all(|&y| self.table.step_ranked(v as usize, q[y] as usize))
                && self.above[x]
                    .iter()
                    .all(|&y| self.table.step_ranked(q[y] as usize, v as usize));
            if ok {
                q[x] = v;
                if !self.fill(candidates, q, x + 1, out, cap) {
                    return false;
                }
            }
        }
        true
    }

    fn to_map(&self, template: &MultiMap, s: &State) -> MultiMap {
        template.with_values(s.iter().map(|&r| self.table.subset(r as usize)).collect())
    }
}

/// BFS from `f` until a state satisfying `is_target` appears.
pub(crate) fn search(
    f: &MultiMap,
    table: &HyperStepTable,
    is_target: impl Fn(&[u16]) -> bool + Sync,
    budget: usize,
    parallel: bool,
) -> DirectOutcome {
    let graph = MapGraph::new(f.dom(), table);
    debug_assert_eq!(graph.dom.len(), f.dom().len());
    let start = graph.state_of(f);
    if is_target(&start) {
        return DirectOutcome {
            status: HomotopyStatus::Homotopic,
            certificate: vec![f.clone()],
            explored: 1,
        };
    }
    let mut visited: HashSet<State> = HashSet::from([start.clone()]);
    let mut layers: Vec<Vec<State>> = vec![vec![start]];
    // Every generated neighbor counts against the budget, so dense map
    // spaces give up before their edge lists outgrow memory.
    let mut work = 1usize;
    let unknown = |explored| DirectOutcome {
        status: HomotopyStatus::Unknown,
        certificate: vec![],
        explored,
    };
    loop {
        let layer = layers.last().unwrap();
        let mut next: HashSet<State> = HashSet::new();
        for chunk in layer.chunks(CHUNK) {
            let cap = budget.saturating_sub(work);
            let expand = |p: &State| graph.neighbors(p, cap);
            let expanded: Vec<Option<Vec<State>>> = if parallel {
                chunk.par_iter().map(expand).collect()
            } else {
                chunk.iter().map(expand).collect()
            };
            for nbrs in expanded {
                let Some(nbrs) = nbrs else {
                    return unknown(budget + 1);
                };
                work += nbrs.len();
                next.extend(nbrs.into_iter().filter(|q| !visited.contains(q)));
            }
            if work > budget {
                return unknown(work);
            }
        }
        let mut next: Vec<State> = next.into_iter().collect();
        next.sort_unstable();
        if next.is_empty() {
            return DirectOutcome {
                status: HomotopyStatus::NotHomotopic,
                certificate: vec![],
                explored: work,
            };
        }
        visited.extend(next.iter().cloned());
        let targets: Vec<State> = next.iter().filter(|s| is_target(s)).cloned().collect();
        layers.push(next);
        if !targets.is_empty() {
            let path = canonical_path(&graph, &layers, targets);
            return DirectOutcome {
                status: HomotopyStatus::Homotopic,
                certificate: path.iter().map(|s| graph.to_map(f, s)).collect(),
                explored: work,
            };
        }
    }
}

/// Lexicographically least shortest chain from the start to any target in
/// the last layer.
fn canonical_path(graph: &MapGraph<'_>, layers: &[Vec<State>], targets: Vec<State>) -> Vec<State> {
    let d = layers.len() - 1;
    let mut on_path: Vec<Vec<State>> = vec![Vec::new(); d + 1];
    on_path[d] = targets;
    for i in (0..d).rev() {
        let later = on_path[i + 1].clone();
        on_path[i] = layers[i]
            .iter()
            .filter(|v| later.iter().any(|w| graph.adjacent(v, w)))
            .cloned()
            .collect();
    }
    let mut path = vec![layers[0][0].clone()];
    for layer in on_path.iter().skip(1) {
        let cur = path.last().unwrap();
        let next = layer
            .iter()
            .find(|w| graph.adjacent(cur, w))
            .expect("every layer on a shortest path has a successor")
            .clone();
        path.push(next);
    }
    path
}
