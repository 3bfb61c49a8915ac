use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{GroupKind, GroupModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// JSON form `{"name": ..., "params": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

fn positive(params: &Value, key: &str, name: &str) -> Result<i64> {
    let v = params
        .get(key)
        .ok_or_else(|| Error::InvalidParams(format!("{name} needs parameter '{key}'")))?;
    let n = v
        .as_i64()
        .ok_or_else(|| Error::InvalidParams(format!("{name}: '{key}' must be an integer, got {v}")))?;
    if n <= 0 {
        return Err(Error::InvalidParams(format!("{name}: '{key}' must be positive, got {n}")));
    }
    Ok(n)
}

fn parse_kind(name: &str, params: &Value) -> Result<GroupKind> {
    Ok(match name {
        "real_vector" => GroupKind::RealVector(positive(params, "n", name)? as usize),
        "integer_lattice" => GroupKind::IntegerLattice(positive(params, "n", name)? as usize),
        "cyclic" => GroupKind::Cyclic(positive(params, "m", name)?),
        "complex_plane" => GroupKind::ComplexPlane,
        "affine_line" => GroupKind::AffineLine,
        "product" => {
            let fs = params
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidParams("product needs a 'factors' array".into()))?;
            let kinds = fs
                .iter()
                .map(|f| {
                    let d: GroupDescriptor = serde_json::from_value(f.clone())?;
                    parse_kind(&d.name, &d.params)
                })
                .collect::<Result<Vec<_>>>()?;
            GroupKind::Product(kinds)
        }
        other => return Err(Error::UnknownGroup(other.to_string())),
    })
}

/// Instantiates a registered group by name.
pub fn make_group<T: Scalar>(name: &str, params: &Value) -> Result<GroupModel<T>> {
    GroupModel::new(parse_kind(name, params)?)
}

impl GroupDescriptor {
    pub fn build<T: Scalar>(&self) -> Result<GroupModel<T>> {
        make_group(&self.name, &self.params)
    }
}

impl From<&GroupKind> for GroupDescriptor {
    fn from(kind: &GroupKind) -> Self {
        let (name, params) = match kind {
            GroupKind::RealVector(n) => ("real_vector", json!({ "n": n })),
            GroupKind::IntegerLattice(n) => ("integer_lattice", json!({ "n": n })),
            GroupKind::Cyclic(m) => ("cyclic", json!({ "m": m })),
            GroupKind::ComplexPlane => ("complex_plane", json!({})),
            GroupKind::AffineLine => ("affine_line", json!({})),
            GroupKind::Product(fs) => {
                let factors: Vec<GroupDescriptor> = fs.iter().map(GroupDescriptor::from).collect();
                ("product", json!({ "factors": factors }))
            }
        };
        Self { name: name.into(), params }
    }
}

impl<T: Scalar> GroupModel<T> {
    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor::from(self.kind())
    }
}
