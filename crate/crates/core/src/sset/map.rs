use std::sync::Arc;

use super::{DegeneracyWord, FiniteSimplicialSet, NdId, Simplex};
use crate::error::SsetError;

/// A simplicial map, determined by the images of the nondegenerate simplices
/// of its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<FiniteSimplicialSet>,
    target: Arc<FiniteSimplicialSet>,
    images: Vec<Simplex>,
}

/// Failures of `f ∘ d_i = d_i ∘ f` on nondegenerate simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapReport {
    pub violations: Vec<(String, u32)>,
}

impl MapReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SimplicialMap {
    /// Checks arity, that every image lives in the target, and that
    /// dimensions are preserved. Compatibility with faces is checked by
    /// [`Self::validate`].
    pub fn new(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        images: Vec<Simplex>,
    ) -> Result<Self, SsetError> {
        if images.len() != source.len() {
            return Err(SsetError::MapArity {
                expected: source.len(),
                found: images.len(),
            });
        }
        for (k, img) in images.iter().enumerate() {
            target.check_simplex(img)?;
            let want = source.dim_of(NdId(k as u32));
            let got = target.dim(img);
            if want != got {
                return Err(SsetError::MapDimension {
                    id: source.name(NdId(k as u32)).to_string(),
                    expected: want,
                    found: got,
                });
            }
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    /// Like [`Self::new`] followed by [`Self::validate`].
    pub fn checked(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        images: Vec<Simplex>,
    ) -> Result<Self, SsetError> {
        let map = Self::new(source, target, images)?;
        let report = map.validate();
        if let Some((id, i)) = report.violations.first() {
            return Err(SsetError::Invalid(format!(
                "map does not commute with d{i} on `{id}`"
            )));
        }
        Ok(map)
    }

    pub fn identity(x: Arc<FiniteSimplicialSet>) -> Self {
        let images = x.ids().map(Simplex::nondegenerate).collect();
        Self {
            source: x.clone(),
            target: x,
            images,
        }
    }

    /// The unique map to a set with a single vertex `point` (such as `Δ⁰`).
    pub fn to_point(
        x: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        point: NdId,
    ) -> Result<Self, SsetError> {
        let images = x
            .ids()
            .map(|id| {
                let n = x.dim_of(id) as u32;
                Simplex::new(point, DegeneracyWord((0..n).rev().collect()))
            })
            .collect();
        Self::checked(x, target, images)
    }

    /// The map between standard simplices `Δᵐ -> Δⁿ` induced by a monotone
    /// map `[m] -> [n]`.
    pub fn between_standard(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        theta: &[u32],
    ) -> Result<Self, SsetError> {
        let n = target.max_dim().unwrap_or(0);
        let top = target
            .ids()
            .find(|&id| target.dim_of(id) == n)
            .ok_or_else(|| SsetError::Invalid("empty target".into()))?;
        let top = Simplex::nondegenerate(top);
        let mut images = Vec::with_capacity(source.len());
        for id in source.ids() {
            // vertex list of a standard-simplex face, recovered from its 0-faces
            let s = Simplex::nondegenerate(id);
            let d = source.dim_of(id) as u32;
            let mut verts = Vec::new();
            for k in 0..=d {
                let v = source.apply_monotone(&s, &[k])?;
                let name = source.name(v.base);
                let idx: u32 = name.parse().map_err(|_| {
                    SsetError::Invalid(format!("`{name}` is not a standard vertex"))
                })?;
                verts.push(
                    theta.get(idx as usize).copied().ok_or_else(|| {
                        SsetError::InvalidMonotone(format!("{theta:?} too short"))
                    })?,
                );
            }
            images.push(target.apply_monotone(&top, &verts)?);
        }
        Self::checked(source, target, images)
    }

    pub fn source(&self) -> &Arc<FiniteSimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSimplicialSet> {
        &self.target
    }

    pub fn images(&self) -> &[Simplex] {
        &self.images
    }

    pub fn image(&self, id: NdId) -> &Simplex {
        &self.images[id.index()]
    }

    /// Image of an arbitrary (possibly degenerate) simplex of the source.
    pub fn evaluate(&self, s: &Simplex) -> Result<Simplex, SsetError> {
        self.source.check_simplex(s)?;
        let eta = s.deg.to_surjection(self.source.dim_of(s.base));
        Ok(self
            .target
            .apply_unchecked(&self.images[s.base.index()], &eta))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap, SsetError> {
        if *self.target != *g.source {
            return Err(SsetError::NotComposable);
        }
        let images = self
            .images
            .iter()
            .map(|img| g.evaluate(img))
            .collect::<Result<_, _>>()?;
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: g.target.clone(),
            images,
        })
    }

    pub fn validate(&self) -> MapReport {
        let mut report = MapReport::default();
        for id in self.source.ids() {
            let n = self.source.dim_of(id) as u32;
            if n == 0 {
                continue;
            }
            let s = Simplex::nondegenerate(id);
            for i in 0..=n {
                let lhs = self.evaluate(&self.source.face(&s, i).unwrap()).unwrap();
                let rhs = self.target.face(&self.images[id.index()], i).unwrap();
                if lhs != rhs {
                    report
                        .violations
                        .push((self.source.name(id).to_string(), i));
                }
            }
        }
        report
    }

    /// Size of the largest fibre of the induced map on nondegenerate simplices.
    pub fn max_nd_preimage(&self) -> usize {
        let mut counts = vec![0usize; self.target.len()];
        for img in &self.images {
            counts[img.base.index()] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }
}
