//! The structured-text (JSON) groupoid description format.
//!
//! A description is either explicit tables or a recipe with a `kind` field.
//! Recipes are canonicalized to explicit form by building and validating the
//! groupoid.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Arrow, FiniteGroup, RawGroupoid, RealGroup, RealGroupoid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectsSpec {
    Count(usize),
    Labels(Vec<String>),
}

impl ObjectsSpec {
    pub fn count(&self) -> usize {
        match self {
            ObjectsSpec::Count(n) => *n,
            ObjectsSpec::Labels(l) => l.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitArrow {
    pub id: usize,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitInvolution {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDescription {
    pub objects: ObjectsSpec,
    pub arrows: Vec<ExplicitArrow>,
    pub compose: Vec<[usize; 3]>,
    pub inverse: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Vec<usize>>,
    pub involution: ExplicitInvolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone()),
            GroupSpec::Product(parts) => {
                let mut acc = FiniteGroup::cyclic(1)?;
                for p in parts {
                    acc = acc.product(&p.build()?)?;
                }
                Ok(acc)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionSpec {
    #[default]
    Trivial,
    Inverse,
    ConjugateBy(usize),
    Permutation(Vec<usize>),
}

impl InvolutionSpec {
    pub fn build(&self, group: FiniteGroup) -> Result<RealGroup> {
        match self {
            InvolutionSpec::Trivial => Ok(RealGroup::trivial(group)),
            InvolutionSpec::Inverse => RealGroup::inversion(group),
            InvolutionSpec::ConjugateBy(k) => RealGroup::conjugation(group, *k),
            InvolutionSpec::Permutation(p) => RealGroup::new(group, p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub points: usize,
    /// Defaults to the identity.
    #[serde(default)]
    pub involution: Option<Vec<usize>>,
}

impl SpaceSpec {
    fn involution(&self) -> Vec<usize> {
        self.involution.clone().unwrap_or_else(|| (0..self.points).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Recipe {
    Group {
        group: GroupSpec,
        #[serde(default)]
        involution: InvolutionSpec,
    },
    Pair {
        points: usize,
        #[serde(default)]
        involution: Option<Vec<usize>>,
    },
    RealSpace {
        points: usize,
        #[serde(default)]
        involution: Option<Vec<usize>>,
    },
    Orientifold {
        space: SpaceSpec,
        group: GroupSpec,
        #[serde(default)]
        group_involution: InvolutionSpec,
        /// `action[x][g] = x·g`.
        action: Vec<Vec<usize>>,
        /// Permit non-free actions. Such groupoids are outside the
        /// orientifold setting and no theorem is assumed for them.
        #[serde(default)]
        allow_non_free: bool,
    },
    SwapDouble {
        of: Box<Value>,
    },
}

/// A parsed groupoid description.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupoidDescription {
    Explicit(ExplicitDescription),
    Recipe(Recipe),
}

impl GroupoidDescription {
    pub fn from_json_value(v: &Value) -> Result<Self> {
        if v.get("kind").is_some() {
            Ok(GroupoidDescription::Recipe(serde_json::from_value(v.clone())?))
        } else {
            Ok(GroupoidDescription::Explicit(serde_json::from_value(v.clone())?))
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }

    pub fn build(&self) -> Result<RealGroupoid> {
        match self {
            GroupoidDescription::Explicit(e) => e.build(),
            GroupoidDescription::Recipe(r) => r.build(),
        }
    }

    /// Whether the description was produced by the swap-double recipe.
    pub fn is_swap_double_recipe(&self) -> bool {
        matches!(self, GroupoidDescription::Recipe(Recipe::SwapDouble { .. }))
    }
}

impl ExplicitDescription {
    pub fn build(&self) -> Result<RealGroupoid> {
        let mut arrows = vec![None; self.arrows.len()];
        for a in &self.arrows {
            let slot = arrows
                .get_mut(a.id)
                .ok_or_else(|| Error::InvalidGroupoid(format!("arrow id {} out of range", a.id)))?;
            if slot.is_some() {
                return Err(Error::InvalidGroupoid(format!("arrow id {} listed twice", a.id)));
            }
            *slot = Some(Arrow { src: a.src, tgt: a.tgt });
        }
        RealGroupoid::validate(RawGroupoid {
            objects: self.objects.count(),
            arrows: arrows.into_iter().map(|a| a.expect("all ids filled")).collect(),
            compose: self.compose.iter().map(|c| (c[0], c[1], c[2])).collect(),
            inverse: self.inverse.clone(),
            units: self.units.clone(),
            involution_objects: self.involution.objects.clone(),
            involution_arrows: self.involution.arrows.clone(),
        })
    }
}

impl Recipe {
    pub fn build(&self) -> Result<RealGroupoid> {
        match self {
            Recipe::Group { group, involution } => RealGroupoid::from_group(&involution.build(group.build()?)?),
            Recipe::Pair { points, involution } => {
                RealGroupoid::pair(involution.clone().unwrap_or_else(|| (0..*points).collect()))
                    .and_then(|g| check_len(g, *points))
            }
            Recipe::RealSpace { points, involution } => {
                RealGroupoid::real_space(involution.clone().unwrap_or_else(|| (0..*points).collect()))
                    .and_then(|g| check_len(g, *points))
            }
            Recipe::Orientifold {
                space,
                group,
                group_involution,
                action,
                allow_non_free,
            } => {
                let rg = group_involution.build(group.build()?)?;
                RealGroupoid::orientifold(space.involution(), &rg, action, *allow_non_free)
            }
            Recipe::SwapDouble { of } => {
                let inner = GroupoidDescription::from_json_value(of)?.build()?;
                RealGroupoid::swap_double(&inner)
            }
        }
    }
}

fn check_len(g: RealGroupoid, points: usize) -> Result<RealGroupoid> {
    if g.object_count() != points {
        return Err(Error::InvalidGroupoid(format!(
            "involution has length {} but {points} points were declared",
            g.object_count()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_parse_and_build() {
        let cases = [
            (r#"{"kind":"group","group":{"cyclic":4},"involution":"inverse"}"#, 1, 4),
            (r#"{"kind":"pair","points":2,"involution":[1,0]}"#, 2, 4),
            (r#"{"kind":"real_space","points":2,"involution":[1,0]}"#, 2, 2),
            (
                r#"{"kind":"group","group":{"product":[{"cyclic":2},{"cyclic":2}]}}"#,
                1,
                4,
            ),
            (
                r#"{"kind":"group","group":{"dihedral":4},"involution":{"conjugate_by":4}}"#,
                1,
                8,
            ),
            (
                r#"{"kind":"orientifold","space":{"points":2,"involution":[1,0]},"group":{"cyclic":2},"action":[[0,1],[1,0]]}"#,
                2,
                4,
            ),
            (
                r#"{"kind":"swap_double","of":{"kind":"group","group":{"cyclic":2}}}"#,
                2,
                4,
            ),
        ];
        for (src, objs, arrs) in cases {
            let g = GroupoidDescription::from_json_str(src).unwrap().build().unwrap();
            assert_eq!((g.object_count(), g.arrow_count()), (objs, arrs), "{src}");
        }
    }

    #[test]
    fn explicit_round_trip() {
        let g = GroupoidDescription::from_json_str(r#"{"kind":"pair","points":3,"involution":[1,0,2]}"#)
            .unwrap()
            .build()
            .unwrap();
        let text = serde_json::to_string(&g.to_explicit()).unwrap();
        let back = GroupoidDescription::from_json_str(&text).unwrap().build().unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn explicit_without_units() {
        let src = r#"{"objects":1,"arrows":[{"id":0,"src":0,"tgt":0},{"id":1,"src":0,"tgt":0}],
            "compose":[[0,0,0],[0,1,1],[1,0,1],[1,1,0]],"inverse":[0,1],
            "involution":{"objects":[0],"arrows":[0,1]}}"#;
        let g = GroupoidDescription::from_json_str(src).unwrap().build().unwrap();
        assert_eq!(g.unit(0), 0);
    }

    #[test]
    fn bad_recipe_reports_parse_error() {
        let e = GroupoidDescription::from_json_str(r#"{"kind":"torus"}"#).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
    }
}
