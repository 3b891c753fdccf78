//! Small standard simplicial sets and maps between them.

use std::sync::Arc;

use crate::sset::{
    disjoint_union, minimal_circle, standard_simplex, FiniteSimplicialSet, NdId, Simplex,
    SimplicialMap,
};
use crate::subdivision::subdivide;

/// The sets of the corpus, each behind a single shared pointer.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub point: Arc<FiniteSimplicialSet>,
    pub interval: Arc<FiniteSimplicialSet>,
    pub triangle: Arc<FiniteSimplicialSet>,
    pub two_points: Arc<FiniteSimplicialSet>,
    pub circle: Arc<FiniteSimplicialSet>,
    pub sd_circle: Arc<FiniteSimplicialSet>,
}

#[derive(Clone, Debug)]
pub struct NamedMap {
    pub name: String,
    pub map: SimplicialMap,
}

impl Corpus {
    pub fn new() -> Self {
        let point = Arc::new(standard_simplex(0));
        let circle = Arc::new(minimal_circle());
        Self {
            two_points: disjoint_union(&point, &point).set,
            interval: Arc::new(standard_simplex(1)),
            triangle: Arc::new(standard_simplex(2)),
            sd_circle: subdivide(&circle).expect("circle subdivides").sd,
            point,
            circle,
        }
    }

    pub fn sets(&self) -> Vec<(&'static str, Arc<FiniteSimplicialSet>)> {
        vec![
            ("delta0", self.point.clone()),
            ("delta1", self.interval.clone()),
            ("delta2", self.triangle.clone()),
            ("two_points", self.two_points.clone()),
            ("circle", self.circle.clone()),
            ("sd_circle", self.sd_circle.clone()),
        ]
    }

    /// Identities, collapses to the point, the fold and two automorphisms:
    /// the maps whose induced generator maps preserve every relation.
    pub fn maps(&self) -> Vec<NamedMap> {
        let mut out = Vec::new();
        let mut push = |name: String, map: SimplicialMap| out.push(NamedMap { name, map });
        for (name, x) in self.sets() {
            push(format!("id_{name}"), SimplicialMap::identity(x));
        }
        for (name, x) in self.sets().into_iter().skip(1) {
            let f = SimplicialMap::to_point(x, self.point.clone(), NdId(0)).expect("collapse");
            push(format!("collapse_{name}"), f);
        }
        push("swap_two_points".into(), self.swap_points());
        push("swap_sd_circle".into(), self.swap_edges());
        out
    }

    /// Face inclusions, a degeneracy, the quotient `Δ¹ -> circle` and the
    /// covering `Sd(circle) -> circle`. Their induced maps break the
    /// partial isometry relations.
    pub fn extra_maps(&self) -> Vec<NamedMap> {
        let std = |name: &str, s: &Arc<_>, t: &Arc<_>, theta: &[u32]| NamedMap {
            name: name.into(),
            map: SimplicialMap::between_standard(Arc::clone(s), Arc::clone(t), theta)
                .expect("monotone"),
        };
        let quotient = SimplicialMap::checked(
            self.interval.clone(),
            self.circle.clone(),
            self.interval
                .ids()
                .map(|id| Simplex::nondegenerate(NdId(self.interval.dim_of(id) as u32)))
                .collect(),
        )
        .expect("quotient is simplicial");
        vec![
            std("vertex0_delta1", &self.point, &self.interval, &[0]),
            std("vertex1_delta1", &self.point, &self.interval, &[1]),
            std("edge01_delta2", &self.interval, &self.triangle, &[0, 1]),
            std("edge12_delta2", &self.interval, &self.triangle, &[1, 2]),
            std(
                "degeneracy_delta2",
                &self.triangle,
                &self.interval,
                &[0, 0, 1],
            ),
            NamedMap {
                name: "quotient_circle".into(),
                map: quotient,
            },
            NamedMap {
                name: "covering_sd_circle".into(),
                map: self.covering(),
            },
        ]
    }

    /// Pairs `(f, g)` with `g ∘ f` defined, over all maps.
    pub fn composable_pairs(&self) -> Vec<(NamedMap, NamedMap)> {
        let mut maps = self.maps();
        maps.extend(self.extra_maps());
        let mut out = Vec::new();
        for f in &maps {
            for g in &maps {
                if Arc::ptr_eq(f.map.target(), g.map.source()) {
                    out.push((f.clone(), g.clone()));
                }
            }
        }
        out
    }

    /// Every vertex of `Sd(circle)` to the vertex, every edge to the loop.
    pub fn covering(&self) -> SimplicialMap {
        let images = self
            .sd_circle
            .ids()
            .map(|id| Simplex::nondegenerate(NdId(self.sd_circle.dim_of(id) as u32)))
            .collect();
        SimplicialMap::checked(self.sd_circle.clone(), self.circle.clone(), images)
            .expect("covering is simplicial")
    }

    pub fn swap_points(&self) -> SimplicialMap {
        let images = vec![
            Simplex::nondegenerate(NdId(1)),
            Simplex::nondegenerate(NdId(0)),
        ];
        SimplicialMap::checked(self.two_points.clone(), self.two_points.clone(), images)
            .expect("swap is simplicial")
    }

    /// Exchanges the two edges of `Sd(circle)`, fixing the vertices.
    pub fn swap_edges(&self) -> SimplicialMap {
        let x = &self.sd_circle;
        let edges: Vec<NdId> = x.ids().filter(|&id| x.dim_of(id) == 1).collect();
        let images = x
            .ids()
            .map(|id| match edges.iter().position(|&e| e == id) {
                Some(k) => Simplex::nondegenerate(edges[1 - k]),
                None => Simplex::nondegenerate(id),
            })
            .collect();
        SimplicialMap::checked(x.clone(), x.clone(), images).expect("edge swap is simplicial")
    }
}

impl Default for Corpus {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_maps_are_simplicial() {
        let c = Corpus::new();
        let maps = c.maps();
        assert_eq!(maps.len(), 13);
        for m in maps.iter().chain(&c.extra_maps()) {
            assert!(m.map.validate().is_valid(), "{}", m.name);
        }
        assert_eq!(c.sd_circle.counts_by_dim(), vec![2, 2]);
    }
}
