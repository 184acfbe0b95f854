//! Finite topological spaces given by minimal open neighborhoods.
//!
//! Point `y` lies in `U_x` exactly when `y <= x` in the specialization
//! preorder, so the open sets are the down-sets of that preorder.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

/// Largest space for which [`FiniteSpace::open_sets`] will enumerate.
pub const OPEN_SET_LIMIT: usize = 20;

#[derive(Clone)]
pub struct FiniteSpace {
    labels: Vec<String>,
    min_open: Vec<PointSet>,
    /// `up[x]` = points whose minimal open set contains `x`.
    up: Vec<PointSet>,
    factors: Option<Arc<(FiniteSpace, FiniteSpace)>>,
}

impl FiniteSpace {
    /// Validates a neighborhood table given by index.
    ///
    /// Reflexivity is checked for every point before transitivity so the
    /// reported error is always the first violated axiom.
    pub fn new(labels: Vec<String>, min_open: Vec<PointSet>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if n > MAX_POINTS {
            return Err(Error::SizeLimit {
                what: "points in a space",
                limit: MAX_POINTS,
                got: n,
            });
        }
        assert_eq!(min_open.len(), n, "one neighborhood per point");
        let mut seen = HashMap::with_capacity(n);
        for label in &labels {
            if seen.insert(label.as_str(), ()).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        for u in &min_open {
            if !u.within(n) {
                let index = u.iter().find(|&i| i >= n).unwrap_or(n);
                return Err(Error::OutOfUniverse { index, universe: n });
            }
        }
        for (x, u) in min_open.iter().enumerate() {
            if !u.contains(x) {
                return Err(Error::MissingSelf(labels[x].clone()));
            }
        }
        for (x, u) in min_open.iter().enumerate() {
            for y in u.iter() {
                if !min_open[y].is_subset(*u) {
                    return Err(Error::NotTransitive {
                        outer: labels[x].clone(),
                        inner: labels[y].clone(),
                    });
                }
            }
        }
        Ok(Self::from_parts(labels, min_open))
    }

    /// Validates a neighborhood table keyed by label.
    pub fn from_table<S: AsRef<str>>(labels: &[S], table: &[(S, Vec<S>)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
        };
        let mut min_open = vec![PointSet::EMPTY; labels.len()];
        for (key, members) in table {
            let x = lookup(key.as_ref())?;
            for m in members {
                min_open[x].insert(lookup(m.as_ref())?);
            }
        }
        Self::new(labels, min_open)
    }

    fn from_parts(labels: Vec<String>, min_open: Vec<PointSet>) -> Self {
        let n = labels.len();
        let mut up = vec![PointSet::EMPTY; n];
        for (x, u) in min_open.iter().enumerate() {
            for y in u.iter() {
                up[y].insert(x);
            }
        }
        FiniteSpace {
            labels,
            min_open,
            up,
            factors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `{a,b}` style rendering of a subset by labels.
    pub fn describe(&self, s: PointSet) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// `U_x`.
    pub fn min_open(&self, x: usize) -> PointSet {
        self.min_open[x]
    }

    pub fn min_opens(&self) -> &[PointSet] {
        &self.min_open
    }

    /// Points `y` with `x ∈ U_y`.
    pub fn up_set(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// `y <= x` in the specialization preorder, i.e. `y ∈ U_x`.
    pub fn leq(&self, y: usize, x: usize) -> bool {
        self.min_open[x].contains(y)
    }

    /// Smallest open set containing `a`.
    pub fn open_hull(&self, a: PointSet) -> PointSet {
        a.iter()
            .fold(PointSet::EMPTY, |acc, x| acc | self.min_open[x])
    }

    pub fn is_open(&self, a: PointSet) -> bool {
        a.iter().all(|x| self.min_open[x].is_subset(a))
    }

    pub fn is_closed(&self, a: PointSet) -> bool {
        self.is_open(a.complement(self.len()))
    }

    /// `{y : U_y ∩ A ≠ ∅}`, the smallest closed superset of `a`.
    pub fn closure(&self, a: PointSet) -> PointSet {
        a.iter().fold(PointSet::EMPTY, |acc, x| acc | self.up[x])
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|x| self.min_open[x].iter().all(|y| y == x || !self.leq(x, y)))
    }

    /// Every open set, ascending by cardinality then lexicographically.
    ///
    /// DFS over points: including `x` forces `U_x` in, excluding it forces
    /// every point above `x` out, so each leaf is a distinct down-set.
    pub fn open_sets(&self) -> Result<Vec<PointSet>> {
        let n = self.len();
        if n > OPEN_SET_LIMIT {
            return Err(Error::SizeLimit {
                what: "open-set enumeration",
                limit: OPEN_SET_LIMIT,
                got: n,
            });
        }
        let mut out = Vec::new();
        self.open_sets_dfs(0, PointSet::EMPTY, PointSet::EMPTY, &mut out);
        out.sort();
        Ok(out)
    }

    fn open_sets_dfs(&self, x: usize, inc: PointSet, exc: PointSet, out: &mut Vec<PointSet>) {
        if x == self.len() {
            out.push(inc);
            return;
        }
        if inc.contains(x) || exc.contains(x) {
            return self.open_sets_dfs(x + 1, inc, exc, out);
        }
        let with = inc | self.min_open[x];
        if !with.intersects(exc) {
            self.open_sets_dfs(x + 1, with, exc, out);
        }
        let without = exc | self.up[x];
        if !without.intersects(inc) {
            self.open_sets_dfs(x + 1, inc, without, out);
        }
    }

    /// Every closed set, in the same canonical order.
    pub fn closed_sets(&self) -> Result<Vec<PointSet>> {
        let n = self.len();
        let mut out: Vec<PointSet> = self
            .open_sets()?
            .into_iter()
            .map(|u| u.complement(n))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Product space with row-major indexing `(x, y) ↦ x·|Y| + y`.
    pub fn product(x: &FiniteSpace, y: &FiniteSpace) -> Result<FiniteSpace> {
        let (nx, ny) = (x.len(), y.len());
        let n = nx * ny;
        if n > MAX_POINTS {
            return Err(Error::SizeLimit {
                what: "points in a product",
                limit: MAX_POINTS,
                got: n,
            });
        }
        let mut labels = Vec::with_capacity(n);
        let mut min_open = Vec::with_capacity(n);
        for i in 0..nx {
            for j in 0..ny {
                labels.push(format!("{},{}", x.labels[i], y.labels[j]));
                min_open.push(set_product(x.min_open[i], y.min_open[j], ny));
            }
        }
        let mut space = Self::from_parts(labels, min_open);
        space.factors = Some(Arc::new((x.clone(), y.clone())));
        Ok(space)
    }

    /// The two factors, when this space was built by [`FiniteSpace::product`].
    pub fn factors(&self) -> Option<(&FiniteSpace, &FiniteSpace)> {
        self.factors.as_deref().map(|(a, b)| (a, b))
    }

    /// Subspace on `c` with `U'_x = U_x ∩ C`; also returns the embedding
    /// (new index ↦ old index).
    pub fn subspace(&self, c: PointSet) -> Result<(FiniteSpace, Vec<usize>)> {
        if c.is_empty() {
            return Err(Error::EmptySubspace);
        }
        if !c.within(self.len()) {
            let index = c.iter().find(|&i| i >= self.len()).unwrap_or(0);
            return Err(Error::OutOfUniverse {
                index,
                universe: self.len(),
            });
        }
        let embed: Vec<usize> = c.to_vec();
        let mut position = vec![usize::MAX; self.len()];
        for (new, &old) in embed.iter().enumerate() {
            position[old] = new;
        }
        let labels = embed.iter().map(|&x| self.labels[x].clone()).collect();
        let min_open = embed
            .iter()
            .map(|&x| (self.min_open[x] & c).iter().map(|y| position[y]).collect())
            .collect();
        Ok((Self::from_parts(labels, min_open), embed))
    }

    /// Same neighborhood structure with points renamed.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<FiniteSpace> {
        assert_eq!(labels.len(), self.len());
        FiniteSpace::new(labels, self.min_open.clone())
    }

    /// True when both spaces have identical neighborhood tables (labels ignored).
    pub fn same_topology(&self, other: &FiniteSpace) -> bool {
        self.min_open == other.min_open
    }
}

/// `A × B` inside a product whose second factor has `n_second` points.
pub fn set_product(a: PointSet, b: PointSet, n_second: usize) -> PointSet {
    let mut out = PointSet::EMPTY;
    for i in a.iter() {
        for j in b.iter() {
            out.insert(i * n_second + j);
        }
    }
    out
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.min_open == other.min_open
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, u) in self.min_open.iter().enumerate() {
            let members: Vec<&str> = u.iter().map(|y| self.labels[y].as_str()).collect();
            m.entry(&self.labels[x], &members);
        }
        m.finish()
    }
}
