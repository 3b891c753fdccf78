use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DegeneracyWord, FiniteSimplicialSet, NdSimplex, Simplex, SimplicialMap};
use crate::error::FormatError;

pub const SSET_SCHEMA: &str = "sset.v1";
pub const SMAP_SCHEMA: &str = "smap.v1";

/// A simplex written as the id of its nondegenerate base plus its degeneracy
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexRef {
    pub base: String,
    #[serde(default)]
    pub deg: Vec<u32>,
}

/// On-disk form of a [`FiniteSimplicialSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsetDocument {
    pub schema: String,
    pub simplices: Vec<NdSimplex>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<SimplexRef>>,
}

/// On-disk form of a [`SimplicialMap`]; both endpoints are embedded so a map
/// file is self-contained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub schema: String,
    pub source: SsetDocument,
    pub target: SsetDocument,
    pub images: BTreeMap<String, SimplexRef>,
}

pub(crate) fn check_schema(found: &str, expected: &str) -> Result<(), FormatError> {
    if found != expected {
        return Err(FormatError::Schema {
            expected: expected.into(),
            found: found.into(),
        });
    }
    Ok(())
}

fn to_ref(x: &FiniteSimplicialSet, s: &Simplex) -> SimplexRef {
    SimplexRef {
        base: x.name(s.base).to_string(),
        deg: s.deg.indices().to_vec(),
    }
}

fn from_ref(x: &FiniteSimplicialSet, r: &SimplexRef) -> Result<Simplex, FormatError> {
    let base = x
        .lookup(&r.base)
        .ok_or_else(|| FormatError::UnknownGenerator(r.base.clone()))?;
    let s = Simplex::new(base, DegeneracyWord::new(r.deg.clone())?);
    x.check_simplex(&s)?;
    Ok(s)
}

impl SsetDocument {
    pub fn from_set(x: &FiniteSimplicialSet) -> Self {
        let faces = x
            .ids()
            .filter(|&id| x.dim_of(id) > 0)
            .map(|id| {
                let fs = x.faces_of(id).iter().map(|f| to_ref(x, f)).collect();
                (x.name(id).to_string(), fs)
            })
            .collect();
        Self {
            schema: SSET_SCHEMA.into(),
            simplices: x.simplices().to_vec(),
            faces,
        }
    }

    pub fn to_set(&self) -> Result<FiniteSimplicialSet, FormatError> {
        check_schema(&self.schema, SSET_SCHEMA)?;
        // a skeleton with no faces gives id lookup for the face references
        let names = FiniteSimplicialSet::new(
            self.simplices
                .iter()
                .map(|s| NdSimplex {
                    id: s.id.clone(),
                    dim: 0,
                })
                .collect(),
            vec![Vec::new(); self.simplices.len()],
        )?;
        for key in self.faces.keys() {
            if names.lookup(key).is_none() {
                return Err(FormatError::UnknownGenerator(key.clone()));
            }
        }
        let mut faces = Vec::with_capacity(self.simplices.len());
        for s in &self.simplices {
            let list = self.faces.get(&s.id).map(Vec::as_slice).unwrap_or(&[]);
            let mut out = Vec::with_capacity(list.len());
            for r in list {
                let base = names
                    .lookup(&r.base)
                    .ok_or_else(|| FormatError::UnknownGenerator(r.base.clone()))?;
                out.push(Simplex::new(base, DegeneracyWord::new(r.deg.clone())?));
            }
            faces.push(out);
        }
        Ok(FiniteSimplicialSet::new(self.simplices.clone(), faces)?)
    }
}

impl MapDocument {
    pub fn from_map(f: &SimplicialMap) -> Self {
        let src = f.source();
        let images = src
            .ids()
            .map(|id| (src.name(id).to_string(), to_ref(f.target(), f.image(id))))
            .collect();
        Self {
            schema: SMAP_SCHEMA.into(),
            source: SsetDocument::from_set(src),
            target: SsetDocument::from_set(f.target()),
            images,
        }
    }

    pub fn to_map(&self) -> Result<SimplicialMap, FormatError> {
        check_schema(&self.schema, SMAP_SCHEMA)?;
        let source = Arc::new(self.source.to_set()?);
        let target = Arc::new(self.target.to_set()?);
        map_from_images(source, target, &self.images)
    }
}

/// A map between known sets from its `images` table.
pub(crate) fn map_from_images(
    source: Arc<FiniteSimplicialSet>,
    target: Arc<FiniteSimplicialSet>,
    table: &BTreeMap<String, SimplexRef>,
) -> Result<SimplicialMap, FormatError> {
    let mut images = Vec::with_capacity(source.len());
    for id in source.ids() {
        let name = source.name(id);
        let r = table
            .get(name)
            .ok_or_else(|| FormatError::Invalid(format!("no image for `{name}`")))?;
        images.push(from_ref(&target, r)?);
    }
    if table.len() != source.len() {
        return Err(FormatError::Invalid("images name unknown simplices".into()));
    }
    Ok(SimplicialMap::checked(source, target, images)?)
}

pub(crate) fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

impl FiniteSimplicialSet {
    pub fn to_json(&self) -> String {
        to_pretty(&SsetDocument::from_set(self))
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: SsetDocument = serde_json::from_str(text)?;
        doc.to_set()
    }
}

impl SimplicialMap {
    pub fn to_json(&self) -> String {
        to_pretty(&MapDocument::from_map(self))
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: MapDocument = serde_json::from_str(text)?;
        doc.to_map()
    }
}
