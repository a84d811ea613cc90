//! JSON input documents.

use serde::{Deserialize, Serialize};

use crate::fincat::FiniteCategory;
use crate::finset::{OrdinaryCategory, OrdinaryFunctor};
use crate::lattice::{build_lattice, corpus_lattice, FiniteLattice};

/// `{"size": n, "leq": [[...]]}`, `{"kind": "chain", "param": k}`, or a
/// corpus name such as `"M3"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeDoc {
    Name(String),
    Explicit { size: usize, leq: Vec<Vec<bool>> },
    Builtin { kind: BuiltinKind, #[serde(default)] param: Option<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinKind {
    #[serde(rename = "chain")]
    Chain,
    #[serde(rename = "boolean")]
    Boolean,
    M3,
    N5,
}

impl LatticeDoc {
    pub fn build(&self) -> Result<FiniteLattice, String> {
        match self {
            LatticeDoc::Name(name) => corpus_lattice(name).map_err(|e| e.to_string()),
            LatticeDoc::Explicit { size, leq } => {
                if leq.len() != *size {
                    return Err(format!("size is {size} but leq has {} rows", leq.len()));
                }
                build_lattice(leq.clone()).map_err(|e| e.to_string())
            }
            LatticeDoc::Builtin { kind, param } => {
                let need = || param.ok_or_else(|| format!("{kind:?} needs a param"));
                match kind {
                    BuiltinKind::Chain => FiniteLattice::chain(need()? as usize).map_err(|e| e.to_string()),
                    BuiltinKind::Boolean => {
                        let k = need()?;
                        if k > 6 {
                            return Err(format!("boolean algebras are limited to 6 generators, got {k}"));
                        }
                        FiniteLattice::boolean(k).map_err(|e| e.to_string())
                    }
                    BuiltinKind::M3 => Ok(FiniteLattice::m3()),
                    BuiltinKind::N5 => Ok(FiniteLattice::n5()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default)]
    pub lattice: Option<LatticeDoc>,
    pub codomain: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    #[serde(default)]
    pub lattice: Option<LatticeDoc>,
    pub source_hom: Vec<Vec<usize>>,
    pub target_hom: Vec<Vec<usize>>,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub src: usize,
    pub tgt: usize,
}

/// `compose[g][f]` is `g∘f`, or null when not composable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: usize,
    pub morphisms: Vec<MorphismDoc>,
    pub identity: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl CategoryDoc {
    pub fn build(&self) -> Result<FiniteCategory, String> {
        let morphisms: Vec<_> = self.morphisms.iter().map(|m| (m.src, m.tgt)).collect();
        FiniteCategory::new(self.objects, &morphisms, self.identity.clone(), self.compose.clone()).map_err(|e| e.to_string())
    }

    pub fn from_category(cat: &FiniteCategory) -> Self {
        Self {
            objects: cat.object_count(),
            morphisms: (0..cat.morphism_count()).map(|m| MorphismDoc { src: cat.source(m), tgt: cat.target(m) }).collect(),
            identity: cat.identities().to_vec(),
            compose: cat.compose_table().to_vec(),
        }
    }
}

/// A family of morphisms into `codomain`, in an explicit category (`legs`
/// are morphism indices) or in a lattice viewed as a category (`members` are
/// elements below `codomain`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FincatDoc {
    #[serde(default)]
    pub category: Option<CategoryDoc>,
    #[serde(default)]
    pub lattice: Option<LatticeDoc>,
    pub codomain: usize,
    #[serde(default)]
    pub legs: Option<Vec<usize>>,
    #[serde(default)]
    pub members: Option<Vec<usize>>,
}

/// `compose[x][y][z][g][f]` is `g∘f` for `f ∈ C(x,y)`, `g ∈ C(y,z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrdinaryCategoryDoc {
    pub objects: usize,
    pub hom: Vec<Vec<usize>>,
    pub compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
    pub ids: Vec<usize>,
}

impl OrdinaryCategoryDoc {
    pub fn build(&self) -> Result<OrdinaryCategory, String> {
        if self.hom.len() != self.objects {
            return Err(format!("objects is {} but hom has {} rows", self.objects, self.hom.len()));
        }
        OrdinaryCategory::new(self.hom.clone(), self.compose.clone(), self.ids.clone()).map_err(|e| e.to_string())
    }

    pub fn from_category(cat: &OrdinaryCategory) -> Self {
        Self {
            objects: cat.object_count(),
            hom: cat.hom_sizes().to_vec(),
            compose: cat.compose_tables().to_vec(),
            ids: cat.ids().to_vec(),
        }
    }
}

/// `hom_maps[x0][x1]` is the table of `C(x0,x1) → D(Fx0,Fx1)`. When the
/// target, object map and hom maps are all omitted the functor is the
/// identity on `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrdinaryFunctorDoc {
    pub source: OrdinaryCategoryDoc,
    #[serde(default)]
    pub target: Option<OrdinaryCategoryDoc>,
    #[serde(default)]
    pub object_map: Option<Vec<usize>>,
    #[serde(default)]
    pub hom_maps: Option<Vec<Vec<Vec<usize>>>>,
}

impl OrdinaryFunctorDoc {
    pub fn build(&self) -> Result<OrdinaryFunctor, String> {
        let source = self.source.build()?;
        match (&self.target, &self.object_map, &self.hom_maps) {
            (None, None, None) => Ok(OrdinaryFunctor::identity(source)),
            (Some(target), Some(map), Some(homs)) => {
                OrdinaryFunctor::new(source, target.build()?, map.clone(), homs.clone()).map_err(|e| e.to_string())
            }
            _ => Err("target, object_map and hom_maps must be given together".into()),
        }
    }
}
