//! Exact minimum set cover by branch and bound.

use crate::pointset::PointSet;

/// A minimum subfamily of `family` covering `universe`, or `None` if the
/// whole family does not cover it.
///
/// Among all minimum covers the returned one is lexicographically least as a
/// sorted list of indices into `family`; the indices are returned.
pub fn min_cover_indices(universe: PointSet, family: &[PointSet]) -> Option<Vec<usize>> {
    let union = family.iter().fold(PointSet::EMPTY, |acc, &s| acc | s);
    if !universe.is_subset(union) {
        return None;
    }
    if universe.is_empty() {
        return Some(vec![]);
    }
    let opt = minimum_size(universe, family);
    // Fix the cover one index at a time, always taking the smallest index
    // that still leaves a completion of the optimal size.
    let mut chosen = Vec::with_capacity(opt);
    let mut uncovered = universe;
    let mut from = 0;
    for remaining in (0..opt).rev() {
        let j = (from..family.len())
            .find(|&j| {
                let rest = uncovered.difference(family[j]);
                Solver::new(rest, family, j + 1).feasible(rest, remaining)
            })
            .expect("an optimal completion exists");
        chosen.push(j);
        uncovered = uncovered.difference(family[j]);
        from = j + 1;
    }
    debug_assert!(uncovered.is_empty());
    Some(chosen)
}

fn minimum_size(universe: PointSet, family: &[PointSet]) -> usize {
    let mut solver = Solver::new(universe, family, 0);
    let greedy = solver.greedy(universe);
    solver.best = greedy;
    solver.search(universe, 0);
    solver.best
}

struct Solver<'a> {
    family: &'a [PointSet],
    /// Indices usable by this solver.
    allowed: Vec<usize>,
    best: usize,
}

impl<'a> Solver<'a> {
    fn new(universe: PointSet, family: &'a [PointSet], from: usize) -> Self {
        let allowed = (from..family.len())
            .filter(|&i| family[i].intersects(universe))
            .collect();
        Solver {
            family,
            allowed,
            best: usize::MAX,
        }
    }

    fn greedy(&self, mut uncovered: PointSet) -> usize {
        let mut used = 0;
        while !uncovered.is_empty() {
            let Some(&i) = self
                .allowed
                .iter()
                .max_by_key(|&&i| (self.family[i] & uncovered).len())
            else {
                return usize::MAX;
            };
            if !self.family[i].intersects(uncovered) {
                return usize::MAX;
            }
            uncovered = uncovered.difference(self.family[i]);
            used += 1;
        }
        used
    }

    /// Lower bound on the sets still needed.
    fn bound(&self, uncovered: PointSet) -> usize {
        let widest = self
            .allowed
            .iter()
            .map(|&i| (self.family[i] & uncovered).len())
            .max()
            .unwrap_or(0);
        if widest == 0 {
            usize::MAX
        } else {
            uncovered.len().div_ceil(widest)
        }
    }

    /// The uncovered point with the fewest covering sets, and those sets in
    /// decreasing order of new coverage.
    fn branch(&self, uncovered: PointSet) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for p in uncovered.iter() {
            let sets: Vec<usize> = self
                .allowed
                .iter()
                .copied()
                .filter(|&i| self.family[i].contains(p))
                .collect();
            if best.as_ref().is_none_or(|b| sets.len() < b.len()) {
                let empty = sets.is_empty();
                best = Some(sets);
                if empty {
                    break;
                }
            }
        }
        let mut sets = best.unwrap_or_default();
        sets.sort_by_key(|&i| std::cmp::Reverse((self.family[i] & uncovered).len()));
        sets
    }

    fn search(&mut self, uncovered: PointSet, used: usize) {
        if uncovered.is_empty() {
            self.best = self.best.min(used);
            return;
        }
        if used.saturating_add(self.bound(uncovered)) >= self.best {
            return;
        }
        for i in self.branch(uncovered) {
            self.search(uncovered.difference(self.family[i]), used + 1);
        }
    }

    /// Whether `uncovered` can be covered with at most `k` allowed sets.
    fn feasible(&self, uncovered: PointSet, k: usize) -> bool {
        if uncovered.is_empty() {
            return true;
        }
        if k == 0 || self.bound(uncovered) > k {
            return false;
        }
        self.branch(uncovered)
            .into_iter()
            .any(|i| self.feasible(uncovered.difference(self.family[i]), k - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> PointSet {
        v.iter().copied().collect()
    }

    /// Smallest lexicographic index list among minimum covers, by brute force.
    fn brute(universe: PointSet, family: &[PointSet]) -> Option<Vec<usize>> {
        let n = family.len();
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let union = idx.iter().fold(PointSet::EMPTY, |acc, &i| acc | family[i]);
            if !universe.is_subset(union) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => idx.len() < b.len() || (idx.len() == b.len() && idx < *b),
            };
            if better {
                best = Some(idx);
            }
        }
        best
    }

    #[test]
    fn examples() {
        let all = set(&[0, 1, 2, 3]);
        assert_eq!(min_cover_indices(all, &[all]), Some(vec![0]));
        let family = [set(&[0, 1]), set(&[1, 2]), set(&[2, 3]), set(&[0, 3])];
        assert_eq!(min_cover_indices(all, &family), Some(vec![0, 2]));
        assert_eq!(min_cover_indices(all, &[set(&[0, 1]), set(&[1, 2])]), None);
        assert_eq!(min_cover_indices(PointSet::EMPTY, &[]), Some(vec![]));
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..8, raw in prop::collection::vec(1u64..256, 0..11)) {
            let universe = PointSet::full(n);
            let family: Vec<PointSet> = raw.iter().map(|&b| PointSet::from_bits(b) & universe).collect();
            prop_assert_eq!(min_cover_indices(universe, &family), brute(universe, &family));
        }
    }
}
