//! JSON documents for spaces, maps, certificates and square suites.
//!
//! A space is `{"points": [...], "min_open": {"a": ["a", "b"], ...}}`; the
//! order of `points` fixes the point indices. Wherever a space is expected a
//! catalog recipe string such as `"circle4"` or `"fence:3"` is accepted too,
//! and a catalog map name can stand in for a map.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fibration::{random_square, CommutingSquare};
use crate::invariants::{Admission, InvariantResult};
use crate::models;
use crate::multimap::MultiMap;
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

/// Label ↦ labels, kept in document order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table(pub Vec<(String, Vec<String>)>);

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct TableVisitor;

        impl<'de> Visitor<'de> for TableVisitor {
            type Value = Table;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping point labels to lists of labels")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Table, A::Error> {
                let mut seen = HashSet::new();
                let mut rows = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, Vec<String>>()? {
                    if !seen.insert(k.clone()) {
                        return Err(serde::de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    rows.push((k, v));
                }
                Ok(Table(rows))
            }
        }

        d.deserialize_map(TableVisitor)
    }
}

impl Table {
    fn of_values(dom: &FiniteSpace, cod: &FiniteSpace, values: &[PointSet]) -> Table {
        Table(
            values
                .iter()
                .enumerate()
                .map(|(x, v)| (dom.label(x).to_owned(), labels(cod, *v)))
                .collect(),
        )
    }

    /// Values indexed by the points of `dom`; every point needs exactly one row.
    pub fn values(&self, dom: &FiniteSpace, cod: &FiniteSpace) -> Result<Vec<PointSet>> {
        let mut out = vec![None; dom.len()];
        for (key, members) in &self.0 {
            let x = index(dom, key)?;
            let mut v = PointSet::EMPTY;
            for m in members {
                v.insert(index(cod, m)?);
            }
            out[x] = Some(v);
        }
        out.into_iter()
            .enumerate()
            .map(|(x, v)| v.ok_or_else(|| Error::EmptyValue(dom.label(x).to_owned())))
            .collect()
    }
}

fn index(x: &FiniteSpace, label: &str) -> Result<usize> {
    x.index_of(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
}

pub fn labels(x: &FiniteSpace, s: PointSet) -> Vec<String> {
    s.iter().map(|p| x.label(p).to_owned()).collect()
}

pub fn parse_set(x: &FiniteSpace, names: &[String]) -> Result<PointSet> {
    names.iter().map(|n| index(x, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub min_open: Table,
}

impl SpaceDoc {
    pub fn of(x: &FiniteSpace) -> SpaceDoc {
        SpaceDoc {
            points: x.labels().to_vec(),
            min_open: Table(
                (0..x.len())
                    .map(|p| (x.label(p).to_owned(), labels(x, x.min_open(p))))
                    .collect(),
            ),
        }
    }

    pub fn build(&self) -> Result<FiniteSpace> {
        FiniteSpace::from_table(&self.points, &self.min_open.0)
    }
}

/// A space given inline or by catalog recipe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Model(String),
    Inline(SpaceDoc),
}

impl SpaceRef {
    pub fn build(&self) -> Result<FiniteSpace> {
        match self {
            SpaceRef::Model(name) => models::build_space(name),
            SpaceRef::Inline(doc) => doc.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub dom: SpaceRef,
    pub cod: SpaceRef,
    pub values: Table,
}

impl MapDoc {
    pub fn of(f: &MultiMap) -> MapDoc {
        MapDoc {
            dom: SpaceRef::Inline(SpaceDoc::of(f.dom())),
            cod: SpaceRef::Inline(SpaceDoc::of(f.cod())),
            values: Table::of_values(f.dom(), f.cod(), f.values()),
        }
    }

    pub fn build(&self) -> Result<MultiMap> {
        let dom = Arc::new(self.dom.build()?);
        let cod = Arc::new(self.cod.build()?);
        let values = self.values.values(&dom, &cod)?;
        MultiMap::new(dom, cod, values)
    }
}

/// A map given inline or by catalog name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MapRef {
    Model(String),
    Inline(MapDoc),
}

impl MapRef {
    pub fn build(&self) -> Result<MultiMap> {
        match self {
            MapRef::Model(name) => models::build_map(name),
            MapRef::Inline(doc) => doc.build(),
        }
    }
}

/// Deserializes a string as a catalog name and an object as an inline
/// document, keeping the inline document's own error positions.
macro_rules! named_or_inline {
    ($ty:ident, $doc:ident, $what:literal) => {
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                struct RefVisitor;

                impl<'de> Visitor<'de> for RefVisitor {
                    type Value = $ty;

                    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                        f.write_str($what)
                    }

                    fn visit_str<E: serde::de::Error>(
                        self,
                        v: &str,
                    ) -> std::result::Result<$ty, E> {
                        Ok($ty::Model(v.to_owned()))
                    }

                    fn visit_map<A: MapAccess<'de>>(
                        self,
                        access: A,
                    ) -> std::result::Result<$ty, A::Error> {
                        $doc::deserialize(serde::de::value::MapAccessDeserializer::new(access))
                            .map($ty::Inline)
                    }
                }

                d.deserialize_any(RefVisitor)
            }
        }
    };
}

named_or_inline!(SpaceRef, SpaceDoc, "a catalog space name or a space object");
named_or_inline!(MapRef, MapDoc, "a catalog map name or a map object");

/// A chain of maps sharing domain and codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub dom: SpaceDoc,
    pub cod: SpaceDoc,
    pub steps: Vec<Table>,
}

impl ChainDoc {
    /// `None` for an empty chain.
    pub fn of(chain: &[MultiMap]) -> Option<ChainDoc> {
        let first = chain.first()?;
        Some(ChainDoc {
            dom: SpaceDoc::of(first.dom()),
            cod: SpaceDoc::of(first.cod()),
            steps: chain
                .iter()
                .map(|f| Table::of_values(f.dom(), f.cod(), f.values()))
                .collect(),
        })
    }

    pub fn build(&self) -> Result<Vec<MultiMap>> {
        let dom = Arc::new(self.dom.build()?);
        let cod = Arc::new(self.cod.build()?);
        self.steps
            .iter()
            .map(|t| MultiMap::new(dom.clone(), cod.clone(), t.values(&dom, &cod)?))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDoc {
    pub over: Vec<String>,
    pub delta: Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdmissionDoc {
    Homotopy { steps: Vec<Table> },
    Section(SectionDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub open: Vec<String>,
    pub certificate: AdmissionDoc,
}

/// Certificates for every element of an invariant's minimum cover.
pub fn cover_certificates(result: &InvariantResult) -> Vec<CoverDoc> {
    result
        .cover
        .iter()
        .map(|e| CoverDoc {
            open: labels(&result.space, e.open),
            certificate: match &e.certificate {
                Admission::Homotopy(chain) => AdmissionDoc::Homotopy {
                    steps: chain
                        .iter()
                        .map(|f| Table::of_values(f.dom(), f.cod(), f.values()))
                        .collect(),
                },
                Admission::Section(s) => AdmissionDoc::Section(SectionDoc {
                    over: labels(&result.space, s.c),
                    delta: Table::of_values(s.delta.dom(), s.delta.cod(), s.delta.values()),
                }),
            },
        })
        .collect()
}

/// One lifting problem: `alpha: W ⇉ E` and `beta: W × fence(k) ⇉ B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDoc {
    pub w: SpaceRef,
    pub k: usize,
    pub alpha: Table,
    pub beta: Table,
}

impl SquareDoc {
    pub fn of(square: &CommutingSquare) -> SquareDoc {
        SquareDoc {
            w: SpaceRef::Inline(SpaceDoc::of(&square.w)),
            k: square.k,
            alpha: Table::of_values(
                square.alpha.dom(),
                square.alpha.cod(),
                square.alpha.values(),
            ),
            beta: Table::of_values(square.beta.dom(), square.beta.cod(), square.beta.values()),
        }
    }

    pub fn build(&self, rho: &MultiMap) -> Result<CommutingSquare> {
        let w = Arc::new(self.w.build()?);
        let cylinder = Arc::new(FiniteSpace::product(&w, &models::fence(self.k))?);
        let alpha = MultiMap::new(
            w.clone(),
            rho.dom().clone(),
            self.alpha.values(&w, rho.dom())?,
        )?;
        let beta = MultiMap::new(
            cylinder.clone(),
            rho.cod().clone(),
            self.beta.values(&cylinder, rho.cod())?,
        )?;
        CommutingSquare::new(rho.clone(), alpha, self.k, beta)
    }
}

/// Seeded random squares over random domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateDoc {
    pub count: usize,
    /// Largest domain W, in points.
    pub max_points: usize,
    /// Largest fence length.
    pub max_k: usize,
    pub seed: u64,
}

impl GenerateDoc {
    /// Domains have 1..=`max_points` points and fences 1..=`max_k` steps.
    pub fn squares(&self, rho: &MultiMap) -> Result<Vec<CommutingSquare>> {
        if self.max_points == 0 || self.max_points > models::RANDOM_SPACE_LIMIT || self.max_k == 0 {
            return Err(Error::BadParams(format!(
                "generate needs 1 <= max_points <= {} and max_k >= 1",
                models::RANDOM_SPACE_LIMIT
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|_| {
                let w = Arc::new(models::random_space(
                    rng.gen_range(1..=self.max_points),
                    rng.gen(),
                )?);
                let k = rng.gen_range(1..=self.max_k);
                random_square(rho, &w, k, &mut rng)
            })
            .collect()
    }
}

/// A map `rho` and lifting problems for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteDoc {
    pub rho: MapRef,
    #[serde(default)]
    pub squares: Vec<SquareDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GenerateDoc>,
}
