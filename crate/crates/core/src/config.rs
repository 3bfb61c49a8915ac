//! JSON descriptions of spaces, windows and discrete maps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::*;
use crate::error::{Error, Result};
use crate::group::{BallSpec, CoordBox, GroupDescriptor, GroupModel};
use crate::scalar::Scalar;
use crate::space::{restrict_to_open_subgroup, LocalSpace, SoficWindow, WindowSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Circle { circumference: f64 },
    Torus { dim: usize, side: f64 },
    Coset { group: GroupDescriptor, periods: Vec<f64> },
    FolnerBox { dim: usize, side: f64 },
    OpenSubset {
        group: GroupDescriptor,
        #[serde(rename = "box")]
        region: CoordBox<f64>,
    },
    BranchedCover,
    Mutated { mutation: Mutation },
    Discrete { map: MapSpec },
    Induced {
        map: MapSpec,
        #[serde(default)]
        offset: Option<Vec<f64>>,
    },
    Restricted { inner: Box<SpaceSpec>, keep: Vec<bool> },
}

/// Where a discrete sofic map comes from, plus optional corruption and
/// normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: MapSource,
    #[serde(default)]
    pub corrupt: Option<Corruption>,
    /// Normalize with the integer window `{|n| ≤ r}` (sup norm).
    #[serde(default)]
    pub normalize: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSource {
    ExactCyclic { m: usize, radius: i64 },
    ExactTorus { dim: usize, m: usize, radius: i64 },
    /// Path to a serialized map.
    File(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corruption {
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowSpec {
    Ball {
        radius: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Finite(Vec<Vec<f64>>),
    Translate { by: Vec<f64>, window: Box<WindowSpec> },
    Union(Vec<WindowSpec>),
    Intersection(Vec<WindowSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoficSpec {
    pub window: WindowSpec,
    pub epsilon: f64,
}

fn cfg<E: std::fmt::Display>(e: E) -> Error {
    Error::Config(e.to_string())
}

/// Integer cube `{−r..r}ⁿ` as keys.
pub fn integer_cube(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let side = 2 * r + 1;
    (0..side.pow(dim as u32))
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let c = k % side - r;
                    k /= side;
                    c
                })
                .collect()
        })
        .collect()
}

impl MapSpec {
    pub fn build(&self) -> Result<DiscreteSoficMap> {
        let mut map = match &self.source {
            MapSource::ExactCyclic { m, radius } => DiscreteSoficMap::exact_cyclic(*m, *radius)?,
            MapSource::ExactTorus { dim, m, radius } => DiscreteSoficMap::exact_torus(*dim, *m, *radius)?,
            MapSource::File(path) => DiscreteSoficMap::from_json(&std::fs::read_to_string(path).map_err(|e| cfg(format!("{path}: {e}")))?)?,
        };
        if let Some(c) = self.corrupt {
            map = map.corrupt(c.delta, c.seed)?;
        }
        if let Some(r) = self.normalize {
            let dim = map.group().n_ints();
            map = normalize_discrete(&map, &integer_cube(dim, r))?.map;
        }
        Ok(map)
    }
}

impl WindowSpec {
    pub fn build<T: Scalar>(&self, group: &GroupModel<T>) -> Result<WindowSet<T>> {
        let el = |c: &[f64]| group.from_coords(c);
        let w = match self {
            WindowSpec::Ball { radius, center } => {
                let center = center.as_deref().map(el).transpose()?;
                WindowSet::Ball(BallSpec { radius: T::lit(*radius), center })
            }
            WindowSpec::Finite(v) => WindowSet::Finite(v.iter().map(|c| el(c)).collect::<Result<_>>()?),
            WindowSpec::Translate { by, window } => WindowSet::LeftTranslate(el(by)?, Box::new(window.build(group)?)),
            WindowSpec::Union(ws) => WindowSet::Union(ws.iter().map(|w| w.build(group)).collect::<Result<_>>()?),
            WindowSpec::Intersection(ws) => WindowSet::Intersection(ws.iter().map(|w| w.build(group)).collect::<Result<_>>()?),
        };
        w.validate()?;
        Ok(w)
    }
}

impl SoficSpec {
    pub fn build<T: Scalar>(&self, group: &GroupModel<T>) -> Result<SoficWindow<T>> {
        SoficWindow::new(self.window.build(group)?, T::lit(self.epsilon))
    }
}

impl SpaceSpec {
    pub fn build<T: Scalar>(&self) -> Result<Arc<dyn LocalSpace<T>>> {
        Ok(match self {
            SpaceSpec::Circle { circumference } => Arc::new(CosetSpace::circle(T::lit(*circumference))?),
            SpaceSpec::Torus { dim, side } => Arc::new(CosetSpace::torus(*dim, T::lit(*side))?),
            SpaceSpec::Coset { group, periods } => {
                let p: Vec<T> = periods.iter().map(|&x| T::lit(x)).collect();
                Arc::new(coset_space(&group.build()?, &p)?)
            }
            SpaceSpec::FolnerBox { dim, side } => Arc::new(folner_box_space(*dim, T::lit(*side))?),
            SpaceSpec::OpenSubset { group, region } => {
                let b = CoordBox { ints: region.ints.clone(), reals: region.reals.iter().map(|&(a, b)| (T::lit(a), T::lit(b))).collect() };
                Arc::new(open_subset_space(&group.build()?, b)?)
            }
            SpaceSpec::BranchedCover => Arc::new(branched_double_cover::<T>()),
            SpaceSpec::Mutated { mutation } => Arc::new(mutated_circle::<T>(*mutation)),
            SpaceSpec::Discrete { map } => Arc::new(discrete_to_local::<T>(&map.build()?)?),
            SpaceSpec::Induced { map, offset } => {
                let v = map.build()?;
                let n = v.group().n_ints();
                let domain = match offset {
                    Some(s) => FundamentalDomain::shifted(&s.iter().map(|&x| T::lit(x)).collect::<Vec<_>>())?,
                    None => FundamentalDomain::unit(n),
                };
                Arc::new(induce_from_lattice(&v, &domain, &GroupModel::real_vector(n)?)?)
            }
            SpaceSpec::Restricted { inner, keep } => Arc::new(restrict_to_open_subgroup(inner.build()?, keep.clone())?),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    #[test]
    fn parse_and_build() {
        let specs = [
            r#"{"kind":"circle","circumference":10}"#,
            r#"{"kind":"torus","dim":2,"side":8}"#,
            r#"{"kind":"folner_box","dim":2,"side":100}"#,
            r#"{"kind":"open_subset","group":{"name":"affine_line"},"box":{"reals":[[1,2],[0,1]]}}"#,
            r#"{"kind":"branched_cover"}"#,
            r#"{"kind":"mutated","mutation":"cubic"}"#,
            r#"{"kind":"discrete","map":{"source":{"exact_cyclic":{"m":64,"radius":62}}}}"#,
            r#"{"kind":"induced","map":{"source":{"exact_cyclic":{"m":64,"radius":62}},"corrupt":{"delta":0.2},"normalize":5}}"#,
            r#"{"kind":"restricted","inner":{"kind":"open_subset","group":{"name":"product","params":{"factors":[{"name":"real_vector","params":{"n":1}},{"name":"cyclic","params":{"m":2}}]}},"box":{"ints":[[0,1]],"reals":[[0,10]]}},"keep":[true,false]}"#,
        ];
        for s in specs {
            let spec = SpaceSpec::from_json(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            spec.build::<f64>().unwrap_or_else(|e| panic!("{s}: {e}"));
        }
        assert!(matches!(SpaceSpec::from_json(r#"{"kind":"sphere"}"#), Err(Error::Config(_))));
    }

    #[test]
    fn windows() {
        let g = GroupModel::<f64>::real_vector(1).unwrap();
        let w: SoficSpec = serde_json::from_str(r#"{"window":{"union":[{"ball":{"radius":1}},{"translate":{"by":[3],"window":{"ball":{"radius":1}}}}]},"epsilon":0.1}"#).unwrap();
        let w = w.build(&g).unwrap();
        assert!(w.set.contains(&g, &GroupElement::real(3.5)));
        assert!(!w.set.contains(&g, &GroupElement::real(2.0)));
    }
}
