//! Standard spaces and maps: Sierpiński, discrete/indiscrete, fences, cones,
//! the minimal finite circle and sphere, antipodal pairings, and seeded
//! random generators.
//!
//! `circle4` and `sphere6` are the minimal finite models of S¹ and S². Any
//! invariant value computed on them is a value for the finite model.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hyperspace::step;
use crate::multimap::MultiMap;
use crate::pointset::{nonempty_subsets, PointSet};
use crate::space::FiniteSpace;

/// Largest point count accepted by [`random_space`].
pub const RANDOM_SPACE_LIMIT: usize = 7;

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn build(labels: Vec<String>, min_open: Vec<PointSet>) -> FiniteSpace {
    FiniteSpace::new(labels, min_open).expect("catalog spaces are valid")
}

/// Points `0` (closed) and `1` (open): `U_0 = {0,1}`, `U_1 = {1}`.
pub fn sierpinski() -> FiniteSpace {
    build(
        numbered(2),
        vec![PointSet::from_bits(0b11), PointSet::from_bits(0b10)],
    )
}

pub fn point() -> FiniteSpace {
    discrete(1)
}

pub fn discrete(n: usize) -> FiniteSpace {
    build(numbered(n), (0..n).map(PointSet::singleton).collect())
}

pub fn indiscrete(n: usize) -> FiniteSpace {
    build(numbered(n), vec![PointSet::full(n); n])
}

/// The fence `J_k` on points `0..=k`: odd points are open, an even point's
/// minimal open set adds its neighbors.
pub fn fence(k: usize) -> FiniteSpace {
    let n = k + 1;
    let min_open = (0..n)
        .map(|i| {
            if i % 2 == 1 {
                PointSet::singleton(i)
            } else {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(k);
                (lo..=hi).collect()
            }
        })
        .collect();
    build(numbered(n), min_open)
}

/// Minimal circle on `a, b, c, d`: `a`, `c` open; `U_b = {a,b,c}`, `U_d = {a,c,d}`.
pub fn circle4() -> FiniteSpace {
    let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
    let s = |v: &[usize]| v.iter().copied().collect::<PointSet>();
    build(labels, vec![s(&[0]), s(&[0, 1, 2]), s(&[2]), s(&[0, 2, 3])])
}

/// Minimal sphere: `circle4` plus `e`, `f` with `U_e = {a,b,c,d,e}`,
/// `U_f = {a,b,c,d,f}`.
pub fn sphere6() -> FiniteSpace {
    let labels = ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec();
    let s = |v: &[usize]| v.iter().copied().collect::<PointSet>();
    build(
        labels,
        vec![
            s(&[0]),
            s(&[0, 1, 2]),
            s(&[2]),
            s(&[0, 2, 3]),
            s(&[0, 1, 2, 3, 4]),
            s(&[0, 1, 2, 3, 5]),
        ],
    )
}

/// `X` plus a top point whose minimal open set is everything.
pub fn cone(x: &FiniteSpace) -> Result<FiniteSpace> {
    let n = x.len();
    let mut labels = x.labels().to_vec();
    let mut top = String::from("top");
    while labels.contains(&top) {
        top.push('\'');
    }
    labels.push(top);
    let mut min_open = x.min_opens().to_vec();
    min_open.push(PointSet::full(n + 1));
    FiniteSpace::new(labels, min_open)
}

/// Which side of an existing point a collapsible new point is attached on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeatSide {
    /// New point `p` with `U_p = U_x ∪ {p}` and nothing above it.
    Above,
    /// New open point `p` lying below exactly the points above `x`.
    Below,
}

/// Adds a beat point next to `x`. The result deformation-retracts onto the
/// original space (the new point is sent to `x`), so both are m-homotopy
/// equivalent.
pub fn beat_expansion(x: &FiniteSpace, at: usize, side: BeatSide) -> Result<FiniteSpace> {
    let n = x.len();
    let mut labels = x.labels().to_vec();
    let mut name = format!("{}*", x.label(at));
    while labels.contains(&name) {
        name.push('*');
    }
    labels.push(name);
    let mut min_open = x.min_opens().to_vec();
    match side {
        BeatSide::Above => min_open.push(x.min_open(at) | PointSet::singleton(n)),
        BeatSide::Below => {
            for y in x.up_set(at).iter() {
                min_open[y].insert(n);
            }
            min_open.push(PointSet::singleton(n));
        }
    }
    FiniteSpace::new(labels, min_open)
}

/// Same space with point `x` moved to index `perm[x]`.
pub fn permute(x: &FiniteSpace, perm: &[usize]) -> Result<FiniteSpace> {
    let n = x.len();
    assert_eq!(perm.len(), n);
    let mut labels = vec![String::new(); n];
    let mut min_open = vec![PointSet::EMPTY; n];
    for i in 0..n {
        labels[perm[i]] = x.label(i).to_owned();
        min_open[perm[i]] = x.min_open(i).iter().map(|j| perm[j]).collect();
    }
    FiniteSpace::new(labels, min_open)
}

/// A random permutation of `x` together with the m-homeomorphism `x ↦ {π(x)}`.
pub fn random_relabeling(x: &FiniteSpace, seed: u64) -> (Arc<FiniteSpace>, MultiMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm.shuffle(&mut rng);
    let y = Arc::new(permute(x, &perm).expect("permutation of a valid space"));
    let dom = Arc::new(x.clone());
    let h = MultiMap::from_fn(dom, y.clone(), |i| PointSet::singleton(perm[i]));
    (y, h)
}

/// Seeded random space: a random DAG over a shuffled point order, closed
/// reflexively and transitively.
pub fn random_space(n: usize, seed: u64) -> Result<FiniteSpace> {
    if n == 0 || n > RANDOM_SPACE_LIMIT {
        return Err(Error::BadParams(format!(
            "random space size {n} outside 1..={RANDOM_SPACE_LIMIT}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let density: f64 = rng.gen_range(0.2..0.8);
    let mut below = (0..n).map(PointSet::singleton).collect::<Vec<_>>();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                below[order[j]].insert(order[i]);
            }
        }
    }
    // transitive closure
    for k in 0..n {
        for x in 0..n {
            if below[x].contains(k) {
                below[x] = below[x] | below[k];
            }
        }
    }
    FiniteSpace::new(numbered(n), below)
}

/// Arbitrary (not necessarily continuous) nonempty values.
pub fn random_values<R: Rng>(
    dom: &Arc<FiniteSpace>,
    cod: &Arc<FiniteSpace>,
    rng: &mut R,
) -> MultiMap {
    let top = (1u64 << cod.len()) - 1;
    MultiMap::from_fn(dom.clone(), cod.clone(), |_| {
        PointSet::from_bits(rng.gen_range(1..=top))
    })
}

/// Random m-continuous map; falls back to a random constant map when the
/// randomized backtracking runs out of steps.
pub fn random_map<R: Rng>(dom: &Arc<FiniteSpace>, cod: &Arc<FiniteSpace>, rng: &mut R) -> MultiMap {
    let fixed = vec![None; dom.len()];
    random_map_with(dom, cod, &fixed, rng, 10_000).unwrap_or_else(|| {
        let top = (1u64 << cod.len()) - 1;
        let v = PointSet::from_bits(rng.gen_range(1..=top));
        MultiMap::from_fn(dom.clone(), cod.clone(), |_| v)
    })
}

/// Random m-continuous map agreeing with `fixed` wherever it is `Some`.
/// Returns `None` if no extension was found within `max_steps` assignments.
pub fn random_map_with<R: Rng>(
    dom: &Arc<FiniteSpace>,
    cod: &Arc<FiniteSpace>,
    fixed: &[Option<PointSet>],
    rng: &mut R,
    max_steps: usize,
) -> Option<MultiMap> {
    let n = dom.len();
    let all = nonempty_subsets(cod.len());
    let candidates: Vec<Vec<PointSet>> = (0..n)
        .map(|x| match fixed[x] {
            Some(v) => vec![v],
            None => {
                let mut c = all.clone();
                c.shuffle(rng);
                c
            }
        })
        .collect();
    let mut values = vec![PointSet::EMPTY; n];
    let mut steps = 0;
    if fill(dom, cod, &candidates, &mut values, 0, &mut steps, max_steps) {
        Some(MultiMap::from_fn(dom.clone(), cod.clone(), |x| values[x]))
    } else {
        None
    }
}

fn fill(
    dom: &FiniteSpace,
    cod: &FiniteSpace,
    candidates: &[Vec<PointSet>],
    values: &mut [PointSet],
    x: usize,
    steps: &mut usize,
    max_steps: usize,
) -> bool {
    if x == values.len() {
        return true;
    }
    for &v in &candidates[x] {
        *steps += 1;
        if *steps > max_steps {
            return false;
        }
        let below_ok = dom
            .min_open(x)
            .iter()
            .filter(|&y| y < x)
            .all(|y| step(cod, v, values[y]));
        let above_ok = dom
            .up_set(x)
            .iter()
            .filter(|&y| y < x)
            .all(|y| step(cod, values[y], v));
        if below_ok && above_ok {
            values[x] = v;
            if fill(dom, cod, candidates, values, x + 1, steps, max_steps) {
                return true;
            }
        }
    }
    values[x] = PointSet::EMPTY;
    false
}

/// `x ↦ {x, −x}` on `circle4` with `a ↔ c`, `b ↔ d`.
pub fn antipodal_pairing() -> MultiMap {
    pairing_on(Arc::new(circle4()), &[2, 3, 0, 1])
}

/// `x ↦ {x, −x}` on `sphere6` with `a ↔ c`, `b ↔ d`, `e ↔ f`.
pub fn sphere_antipodal_pairing() -> MultiMap {
    pairing_on(Arc::new(sphere6()), &[2, 3, 0, 1, 5, 4])
}

/// Single-valued antipode `x ↦ {−x}` on `circle4`.
pub fn antipode() -> MultiMap {
    let x = Arc::new(circle4());
    let opp = [2, 3, 0, 1];
    MultiMap::from_fn(x.clone(), x, |i| PointSet::singleton(opp[i]))
}

fn pairing_on(x: Arc<FiniteSpace>, opposite: &[usize]) -> MultiMap {
    MultiMap::from_fn(x.clone(), x, |i| {
        PointSet::singleton(i) | PointSet::singleton(opposite[i])
    })
}

/// Every finite space on `n` points (n ≤ 4) up to isomorphism, each in its
/// canonical (lexicographically least) labeling.
pub fn spaces_up_to_iso(n: usize) -> Vec<FiniteSpace> {
    assert!(
        (1..=4).contains(&n),
        "isomorphism classes enumerated for 1..=4 points"
    );
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let perms = permutations(n);
    let mut canon: Vec<Vec<u64>> = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut min_open: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (bit, &(x, y)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                min_open[x].insert(y);
            }
        }
        let transitive = (0..n).all(|x| {
            min_open[x]
                .iter()
                .all(|y| min_open[y].is_subset(min_open[x]))
        });
        if !transitive {
            continue;
        }
        let key = perms
            .iter()
            .map(|p| {
                let mut m = vec![0u64; n];
                for x in 0..n {
                    m[p[x]] = min_open[x]
                        .iter()
                        .map(|y| p[y])
                        .collect::<PointSet>()
                        .bits();
                }
                m
            })
            .min()
            .unwrap();
        if !canon.contains(&key) {
            canon.push(key);
        }
    }
    canon.sort();
    canon
        .into_iter()
        .map(|m| {
            build(
                numbered(n),
                m.into_iter().map(PointSet::from_bits).collect(),
            )
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A named, parameterized catalog entry, e.g. `fence:3` or `cone:discrete:2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRecipe {
    pub name: String,
    pub params: Vec<u64>,
    pub inner: Option<Box<ModelRecipe>>,
}

/// Catalog entries: name, parameter syntax, description.
pub const CATALOG: &[(&str, &str, &str)] = &[
    (
        "sierpinski",
        "sierpinski",
        "two points, 1 open and 0 closed",
    ),
    ("point", "point", "one-point space"),
    ("discrete", "discrete:N", "N isolated points (1..=20)"),
    (
        "indiscrete",
        "indiscrete:N",
        "N points, only trivial opens (1..=20)",
    ),
    (
        "fence",
        "fence:K",
        "fence J_K on K+1 points, odd points open (0..=19)",
    ),
    ("circle4", "circle4", "minimal finite circle a,b,c,d"),
    ("sphere6", "sphere6", "minimal finite sphere a..f"),
    ("cone", "cone:<model>", "model plus a top point"),
    (
        "random",
        "random:N:SEED",
        "seeded random space on N points (1..=7)",
    ),
];

/// Catalog map names.
pub const MAP_CATALOG: &[(&str, &str)] = &[
    ("antipodal_pairing", "x ↦ {x, -x} on circle4"),
    ("sphere_antipodal_pairing", "x ↦ {x, -x} on sphere6"),
    ("antipode", "x ↦ {-x} on circle4"),
];

impl ModelRecipe {
    pub fn parse(text: &str) -> Result<ModelRecipe> {
        let text = text.trim();
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        if !CATALOG.iter().any(|(n, _, _)| *n == name) {
            return Err(Error::UnknownModel(text.to_owned()));
        }
        if name == "cone" {
            let inner = rest.ok_or_else(|| Error::BadParams("cone needs an inner model".into()))?;
            return Ok(ModelRecipe {
                name: name.into(),
                params: vec![],
                inner: Some(Box::new(ModelRecipe::parse(inner)?)),
            });
        }
        let params = match rest {
            None => vec![],
            Some(r) => r
                .split(':')
                .map(|p| {
                    p.parse::<u64>()
                        .map_err(|_| Error::BadParams(format!("`{p}` is not an integer")))
                })
                .collect::<Result<_>>()?,
        };
        Ok(ModelRecipe {
            name: name.into(),
            params,
            inner: None,
        })
    }

    pub fn build(&self) -> Result<FiniteSpace> {
        let arity = |k: usize| -> Result<()> {
            if self.params.len() == k {
                Ok(())
            } else {
                Err(Error::BadParams(format!(
                    "{} takes {k} parameter(s)",
                    self.name
                )))
            }
        };
        let size = |lo: u64, hi: u64| -> Result<usize> {
            let v = self.params[0];
            if (lo..=hi).contains(&v) {
                Ok(v as usize)
            } else {
                Err(Error::BadParams(format!(
                    "{} parameter {v} outside {lo}..={hi}",
                    self.name
                )))
            }
        };
        match self.name.as_str() {
            "sierpinski" => arity(0).map(|_| sierpinski()),
            "point" => arity(0).map(|_| point()),
            "circle4" => arity(0).map(|_| circle4()),
            "sphere6" => arity(0).map(|_| sphere6()),
            "discrete" => {
                arity(1)?;
                Ok(discrete(size(1, 20)?))
            }
            "indiscrete" => {
                arity(1)?;
                Ok(indiscrete(size(1, 20)?))
            }
            "fence" => {
                arity(1)?;
                Ok(fence(size(0, 19)?))
            }
            "random" => {
                arity(2)?;
                random_space(size(1, RANDOM_SPACE_LIMIT as u64)?, self.params[1])
            }
            "cone" => {
                let inner = self
                    .inner
                    .as_ref()
                    .ok_or_else(|| Error::BadParams("cone needs an inner model".into()))?;
                cone(&inner.build()?)
            }
            other => Err(Error::UnknownModel(other.to_owned())),
        }
    }
}

impl fmt::Display for ModelRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for p in &self.params {
            write!(f, ":{p}")?;
        }
        if let Some(inner) = &self.inner {
            write!(f, ":{inner}")?;
        }
        Ok(())
    }
}

/// Parses and builds a catalog space.
pub fn build_space(text: &str) -> Result<FiniteSpace> {
    ModelRecipe::parse(text)?.build()
}

/// Builds a catalog map by name.
pub fn build_map(name: &str) -> Result<MultiMap> {
    match name {
        "antipodal_pairing" => Ok(antipodal_pairing()),
        "sphere_antipodal_pairing" => Ok(sphere_antipodal_pairing()),
        "antipode" => Ok(antipode()),
        other => Err(Error::UnknownModel(other.to_owned())),
    }
}
