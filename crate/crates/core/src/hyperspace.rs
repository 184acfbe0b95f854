//! The hyper-step relation on nonempty subsets of a space.
//!
//! `hyper_step(S, T)` holds when the two-slice map `{S at the closed end, T
//! at the open end}` over the Sierpiński space is m-continuous, i.e. for every
//! open `W`: `S ⊆ W ⇒ T ⊆ W` and `S ∩ W ≠ ∅ ⇒ T ∩ W ≠ ∅`. Since the smallest
//! open set containing a point `b` is `U_b`, this reduces to
//! `T ⊆ hull(S)` and `T ∩ U_b ≠ ∅` for every `b ∈ S`.
//!
//! Read as "T lies below S", the relation is a preorder, and m-continuous maps
//! `X ⇉ Y` are exactly the order-preserving maps from `X` into this preorder
//! on the nonempty subsets of `Y`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::{nonempty_subsets, PointSet};
use crate::space::FiniteSpace;

/// Largest codomain for which the full relation table is built.
pub const HYPERSPACE_LIMIT: usize = 12;

/// One deformation step from value `s` to value `t` inside `y`.
pub fn hyper_step(y: &FiniteSpace, s: PointSet, t: PointSet) -> Result<bool> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptyValue("hyper-step argument".into()));
    }
    Ok(step(y, s, t))
}

#[inline]
pub(crate) fn step(y: &FiniteSpace, s: PointSet, t: PointSet) -> bool {
    t.is_subset(y.open_hull(s)) && s.iter().all(|b| t.intersects(y.min_open(b)))
}

/// The relation evaluated literally against every open set of `y`.
pub fn hyper_step_by_opens(y: &FiniteSpace, s: PointSet, t: PointSet) -> Result<bool> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptyValue("hyper-step argument".into()));
    }
    Ok(y.open_sets()?
        .into_iter()
        .all(|w| (!s.is_subset(w) || t.is_subset(w)) && (!s.intersects(w) || t.intersects(w))))
}

/// The precomputed hyper-step relation over all nonempty subsets of a space.
///
/// Subsets are addressed by their rank in canonical order, so iterating a
/// row yields neighbors in canonical order.
pub struct HyperStepTable {
    cod: Arc<FiniteSpace>,
    subsets: Vec<PointSet>,
    rank: Vec<u32>,
    words: usize,
    forward: Vec<u64>,
    backward: Vec<u64>,
}

impl HyperStepTable {
    pub fn new(cod: Arc<FiniteSpace>) -> Result<Self> {
        let m = cod.len();
        if m > HYPERSPACE_LIMIT {
            return Err(Error::SizeLimit {
                what: "hyperspace codomain",
                limit: HYPERSPACE_LIMIT,
                got: m,
            });
        }
        let subsets = nonempty_subsets(m);
        let n = subsets.len();
        let mut rank = vec![u32::MAX; 1 << m];
        for (r, s) in subsets.iter().enumerate() {
            rank[s.bits() as usize] = r as u32;
        }
        let words = n.div_ceil(64);
        let mut forward = vec![0u64; n * words];
        let mut backward = vec![0u64; n * words];
        for (i, &s) in subsets.iter().enumerate() {
            let hull = cod.open_hull(s);
            for (j, &t) in subsets.iter().enumerate() {
                if t.is_subset(hull) && s.iter().all(|b| t.intersects(cod.min_open(b))) {
                    forward[i * words + j / 64] |= 1 << (j % 64);
                    backward[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(HyperStepTable {
            cod,
            subsets,
            rank,
            words,
            forward,
            backward,
        })
    }

    pub fn cod(&self) -> &Arc<FiniteSpace> {
        &self.cod
    }

    /// Number of nonempty subsets.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[PointSet] {
        &self.subsets
    }

    pub fn subset(&self, rank: usize) -> PointSet {
        self.subsets[rank]
    }

    pub fn rank_of(&self, s: PointSet) -> usize {
        self.rank[s.bits() as usize] as usize
    }

    pub fn step_ranked(&self, i: usize, j: usize) -> bool {
        self.forward[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    pub fn step(&self, s: PointSet, t: PointSet) -> bool {
        self.step_ranked(self.rank_of(s), self.rank_of(t))
    }

    fn row(&self, table: &[u64], i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = table[i * self.words..(i + 1) * self.words].to_vec();
        row.into_iter().enumerate().flat_map(|(w, mut bits)| {
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Ranks `t` with `step(s, t)`, ascending.
    pub fn successors(&self, s: PointSet) -> impl Iterator<Item = PointSet> + '_ {
        self.row(&self.forward, self.rank_of(s))
            .map(|j| self.subsets[j])
    }

    /// Ranks `t` with `step(t, s)`, ascending.
    pub fn predecessors(&self, s: PointSet) -> impl Iterator<Item = PointSet> + '_ {
        self.row(&self.backward, self.rank_of(s))
            .map(|j| self.subsets[j])
    }

    /// Connected component id of every subset rank in the undirected
    /// hyper-step graph. Ids are the smallest rank in each component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = start;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let neighbors: Vec<usize> = self
                    .row(&self.forward, i)
                    .chain(self.row(&self.backward, i))
                    .collect();
                for j in neighbors {
                    if comp[j] == usize::MAX {
                        comp[j] = start;
                        stack.push(j);
                    }
                }
            }
        }
        comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> PointSet {
        v.iter().copied().collect()
    }

    #[test]
    fn examples() {
        let s = models::sierpinski();
        assert!(hyper_step(&s, set(&[0]), set(&[0])).unwrap());
        assert!(hyper_step(&s, set(&[0]), set(&[0, 1])).unwrap());
        let d = models::discrete(2);
        assert!(!hyper_step(&d, set(&[0]), set(&[1])).unwrap());
        assert!(hyper_step(&d, PointSet::EMPTY, set(&[1])).is_err());
    }

    #[test]
    fn table_matches_function() {
        let x = Arc::new(models::circle4());
        let table = HyperStepTable::new(x.clone()).unwrap();
        for &s in table.subsets() {
            for &t in table.subsets() {
                assert_eq!(table.step(s, t), step(&x, s, t));
            }
            let succ: Vec<PointSet> = table.successors(s).collect();
            let mut sorted = succ.clone();
            sorted.sort();
            assert_eq!(succ, sorted);
        }
    }

    #[test]
    fn discrete_hyperspace_is_disconnected() {
        let table = HyperStepTable::new(Arc::new(models::discrete(2))).unwrap();
        let comp = table.components();
        assert_eq!(comp, vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn local_form_matches_definition(n in 1usize..=5, seed in any::<u64>(), a in any::<u8>(), b in any::<u8>()) {
            let y = models::random_space(n, seed).unwrap();
            let s = PointSet::from_bits(a as u64) & y.points();
            let t = PointSet::from_bits(b as u64) & y.points();
            prop_assume!(!s.is_empty() && !t.is_empty());
            prop_assert_eq!(hyper_step(&y, s, t).unwrap(), hyper_step_by_opens(&y, s, t).unwrap());
        }

        #[test]
        fn relation_is_a_preorder(n in 1usize..=4, seed in any::<u64>()) {
            let y = Arc::new(models::random_space(n, seed).unwrap());
            let table = HyperStepTable::new(y).unwrap();
            let k = table.len();
            for i in 0..k {
                prop_assert!(table.step_ranked(i, i));
                for j in 0..k {
                    if !table.step_ranked(i, j) { continue; }
                    for l in 0..k {
                        if table.step_ranked(j, l) {
                            prop_assert!(table.step_ranked(i, l));
                        }
                    }
                }
            }
        }
    }
}
