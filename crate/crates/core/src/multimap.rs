//! Multi-valued maps `X ⇉ Y` between finite spaces and their calculus.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{set_product, FiniteSpace};

/// A total assignment of a nonempty subset of `cod` to every point of `dom`.
#[derive(Clone)]
pub struct MultiMap {
    dom: Arc<FiniteSpace>,
    cod: Arc<FiniteSpace>,
    values: Vec<PointSet>,
}

/// Outcome of the semicontinuity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Semicontinuity {
    pub usc: bool,
    pub lsc: bool,
    pub m_continuous: bool,
}

impl Semicontinuity {
    fn new(usc: bool, lsc: bool) -> Self {
        Semicontinuity {
            usc,
            lsc,
            m_continuous: usc && lsc,
        }
    }
}

/// Injectivity, surjectivity and homeomorphism status of a map.
#[derive(Debug, Clone)]
pub struct Classification {
    pub injective: bool,
    pub surjective: bool,
    pub m_homeomorphism: bool,
    /// Pointwise inverse `b ↦ {a : b ∈ f(a)}`, present iff `m_homeomorphism`.
    pub inverse: Option<MultiMap>,
}

impl MultiMap {
    pub fn new(
        dom: Arc<FiniteSpace>,
        cod: Arc<FiniteSpace>,
        values: Vec<PointSet>,
    ) -> Result<Self> {
        if values.len() != dom.len() {
            return Err(Error::DomainMismatch(format!(
                "{} values for a domain of {} points",
                values.len(),
                dom.len()
            )));
        }
        for (x, v) in values.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::EmptyValue(dom.label(x).to_owned()));
            }
            if !v.within(cod.len()) {
                let index = v.iter().find(|&i| i >= cod.len()).unwrap_or(0);
                return Err(Error::OutOfUniverse {
                    index,
                    universe: cod.len(),
                });
            }
        }
        Ok(MultiMap { dom, cod, values })
    }

    /// Builds a map from per-point closures; panics on empty values.
    pub(crate) fn from_fn(
        dom: Arc<FiniteSpace>,
        cod: Arc<FiniteSpace>,
        f: impl FnMut(usize) -> PointSet,
    ) -> Self {
        let values: Vec<PointSet> = (0..dom.len()).map(f).collect();
        debug_assert!(values.iter().all(|v| !v.is_empty() && v.within(cod.len())));
        MultiMap { dom, cod, values }
    }

    /// Same spaces, new values (unchecked beyond debug assertions).
    pub(crate) fn with_values(&self, values: Vec<PointSet>) -> Self {
        debug_assert_eq!(values.len(), self.dom.len());
        MultiMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            values,
        }
    }

    pub fn dom(&self) -> &Arc<FiniteSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteSpace> {
        &self.cod
    }

    pub fn value(&self, x: usize) -> PointSet {
        self.values[x]
    }

    pub fn values(&self) -> &[PointSet] {
        &self.values
    }

    /// `f(S) = ⋃_{x ∈ S} f(x)`.
    pub fn image(&self, s: PointSet) -> PointSet {
        s.iter()
            .fold(PointSet::EMPTY, |acc, x| acc | self.values[x])
    }

    /// `{x : f(x) ⊆ V}`.
    pub fn upper_inverse(&self, v: PointSet) -> PointSet {
        (0..self.dom.len())
            .filter(|&x| self.values[x].is_subset(v))
            .collect()
    }

    /// `{x : f(x) ∩ V ≠ ∅}`.
    pub fn lower_inverse(&self, v: PointSet) -> PointSet {
        (0..self.dom.len())
            .filter(|&x| self.values[x].intersects(v))
            .collect()
    }

    /// Inverse of an m-function on subsets: `{x : f(x) ⊆ D}` for nonempty `D`.
    pub fn subset_inverse(&self, d: PointSet) -> Result<PointSet> {
        if d.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(self.upper_inverse(d))
    }

    /// Semicontinuity tested against every open set of the codomain.
    pub fn semicontinuity(&self) -> Result<Semicontinuity> {
        let opens = self.cod.open_sets()?;
        let usc = opens
            .iter()
            .all(|&w| self.dom.is_open(self.upper_inverse(w)));
        let lsc = opens
            .iter()
            .all(|&w| self.dom.is_open(self.lower_inverse(w)));
        Ok(Semicontinuity::new(usc, lsc))
    }

    /// Semicontinuity from minimal neighborhoods alone.
    ///
    /// For `y ∈ U_x`: upper semicontinuity needs `f(y)` inside the open hull
    /// of `f(x)`, lower semicontinuity needs `f(y)` to meet `U_b` for every
    /// `b ∈ f(x)`. Agrees with [`MultiMap::semicontinuity`] on every input and
    /// has no size limit.
    pub fn local_semicontinuity(&self) -> Semicontinuity {
        let (mut usc, mut lsc) = (true, true);
        for x in 0..self.dom.len() {
            let fx = self.values[x];
            let hull = self.cod.open_hull(fx);
            for y in self.dom.min_open(x).iter() {
                let fy = self.values[y];
                usc &= fy.is_subset(hull);
                lsc &= fx.iter().all(|b| fy.intersects(self.cod.min_open(b)));
            }
        }
        Semicontinuity::new(usc, lsc)
    }

    pub fn is_m_continuous(&self) -> bool {
        self.local_semicontinuity().m_continuous
    }

    /// `(g ∘ f)(x) = ⋃_{y ∈ f(x)} g(y)`.
    pub fn compose(g: &MultiMap, f: &MultiMap) -> Result<MultiMap> {
        if *f.cod != *g.dom {
            return Err(Error::DomainMismatch(
                "codomain of f differs from domain of g".into(),
            ));
        }
        Ok(MultiMap::from_fn(f.dom.clone(), g.cod.clone(), |x| {
            g.image(f.values[x])
        }))
    }

    /// `1_X(x) = {x}`.
    pub fn identity(x: &Arc<FiniteSpace>) -> MultiMap {
        MultiMap::from_fn(x.clone(), x.clone(), PointSet::singleton)
    }

    /// `x ↦ B₀` for every `x`.
    pub fn constant(
        dom: &Arc<FiniteSpace>,
        cod: &Arc<FiniteSpace>,
        value: PointSet,
    ) -> Result<MultiMap> {
        if value.is_empty() {
            return Err(Error::EmptyConstantValue);
        }
        if !value.within(cod.len()) {
            let index = value.iter().find(|&i| i >= cod.len()).unwrap_or(0);
            return Err(Error::OutOfUniverse {
                index,
                universe: cod.len(),
            });
        }
        Ok(MultiMap::from_fn(dom.clone(), cod.clone(), |_| value))
    }

    /// Inclusion of the subspace on `c` into `x`.
    pub fn inclusion(x: &Arc<FiniteSpace>, c: PointSet) -> Result<MultiMap> {
        let (sub, embed) = x.subspace(c)?;
        Ok(MultiMap::from_fn(Arc::new(sub), x.clone(), |i| {
            PointSet::singleton(embed[i])
        }))
    }

    /// The `factor`-th projection (0 or 1) out of a product space.
    pub fn projection(product: &Arc<FiniteSpace>, factor: usize) -> Result<MultiMap> {
        let (a, b) = product.factors().ok_or(Error::NotAProduct)?;
        let nb = b.len();
        let target = match factor {
            0 => Arc::new(a.clone()),
            1 => Arc::new(b.clone()),
            _ => return Err(Error::NotAProduct),
        };
        Ok(MultiMap::from_fn(product.clone(), target, |p| {
            PointSet::singleton(if factor == 0 { p / nb } else { p % nb })
        }))
    }

    /// `(α, β)(x) = α(x) × β(x)` into `cod α × cod β`.
    pub fn pairing(alpha: &MultiMap, beta: &MultiMap) -> Result<MultiMap> {
        if *alpha.dom != *beta.dom {
            return Err(Error::DomainMismatch(
                "pairing needs a common domain".into(),
            ));
        }
        let cod = Arc::new(FiniteSpace::product(&alpha.cod, &beta.cod)?);
        let nb = beta.cod.len();
        Ok(MultiMap::from_fn(alpha.dom.clone(), cod, |x| {
            set_product(alpha.values[x], beta.values[x], nb)
        }))
    }

    /// Restriction to the subspace on `c`, values unchanged.
    pub fn restrict(&self, c: PointSet) -> Result<MultiMap> {
        if c.is_empty() {
            return Err(Error::EmptySubset);
        }
        let (sub, embed) = self.dom.subspace(c)?;
        Ok(MultiMap::from_fn(Arc::new(sub), self.cod.clone(), |i| {
            self.values[embed[i]]
        }))
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn classify(&self) -> Classification {
        let mut injective = true;
        let mut seen = PointSet::EMPTY;
        for v in &self.values {
            if seen.intersects(*v) {
                injective = false;
            }
            seen |= *v;
        }
        let surjective = seen == self.cod.points();
        let mut inverse = None;
        if injective && surjective && self.is_m_continuous() {
            let mut inv = vec![PointSet::EMPTY; self.cod.len()];
            for (a, v) in self.values.iter().enumerate() {
                for b in v.iter() {
                    inv[b].insert(a);
                }
            }
            let g = MultiMap {
                dom: self.cod.clone(),
                cod: self.dom.clone(),
                values: inv,
            };
            if g.is_m_continuous() {
                inverse = Some(g);
            }
        }
        Classification {
            injective,
            surjective,
            m_homeomorphism: inverse.is_some(),
            inverse,
        }
    }

    /// Whether `β: B ⇉ A` is an m-section of `α: A ⇉ B`:
    /// `⋂_{b ∈ α(a)} β(b) = {a}` for every `a`.
    pub fn is_m_section_pair(alpha: &MultiMap, beta: &MultiMap) -> Result<bool> {
        if *alpha.cod != *beta.dom || *alpha.dom != *beta.cod {
            return Err(Error::DomainMismatch(
                "m-section pair needs α: A ⇉ B and β: B ⇉ A".into(),
            ));
        }
        let all = alpha.dom.points();
        Ok((0..alpha.dom.len()).all(|a| {
            let meet = alpha.values[a]
                .iter()
                .fold(all, |acc, b| acc & beta.values[b]);
            meet == PointSet::singleton(a)
        }))
    }

    /// Values as a label table, in domain order.
    pub fn value_table(&self) -> Vec<(String, Vec<String>)> {
        (0..self.dom.len())
            .map(|x| {
                let members = self.values[x]
                    .iter()
                    .map(|b| self.cod.label(b).to_owned())
                    .collect();
                (self.dom.label(x).to_owned(), members)
            })
            .collect()
    }
}

impl PartialEq for MultiMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

impl Eq for MultiMap {}

impl Hash for MultiMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, v) in self.values.iter().enumerate() {
            let members: Vec<&str> = v.iter().map(|b| self.cod.label(b)).collect();
            m.entry(&self.dom.label(x), &members);
        }
        m.finish()
    }
}
