use std::collections::HashMap;
use std::sync::Arc;

use super::{
    subsets_of_size, DegeneracyWord, FiniteSimplicialSet, NdId, NdSimplex, Simplex, SimplicialMap,
};

/// `X × Y` together with the pair of simplices behind each nondegenerate
/// simplex of the product.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: Arc<FiniteSimplicialSet>,
    pub left: Arc<FiniteSimplicialSet>,
    pub right: Arc<FiniteSimplicialSet>,
    pairs: Vec<(Simplex, Simplex)>,
    index: HashMap<(Simplex, Simplex), NdId>,
}

impl Product {
    pub fn pair(&self, id: NdId) -> &(Simplex, Simplex) {
        &self.pairs[id.index()]
    }

    /// Normal form in the product of a pair of equal-dimensional simplices.
    pub fn lookup_pair(&self, x: &Simplex, y: &Simplex) -> Option<Simplex> {
        let m = self.left.dim(x);
        if m != self.right.dim(y) {
            return None;
        }
        let common: Vec<u32> = x
            .deg
            .indices()
            .iter()
            .copied()
            .filter(|j| y.deg.indices().contains(j))
            .collect();
        if common.is_empty() {
            return self
                .index
                .get(&(x.clone(), y.clone()))
                .map(|&id| Simplex::nondegenerate(id));
        }
        let collapse = DegeneracyWord(common.clone()).to_surjection(m - common.len());
        let reduce = |s: &Simplex, dim_base: usize| {
            let eta = s.deg.to_surjection(dim_base);
            let mut reduced = vec![0u32; m - common.len() + 1];
            for (j, &k) in collapse.iter().enumerate() {
                reduced[k as usize] = eta[j];
            }
            Simplex::new(s.base, DegeneracyWord::from_surjection(&reduced))
        };
        let xr = reduce(x, self.left.dim_of(x.base));
        let yr = reduce(y, self.right.dim_of(y.base));
        let id = *self.index.get(&(xr, yr))?;
        Some(Simplex::new(id, DegeneracyWord(common)))
    }

    pub fn projection_left(&self) -> SimplicialMap {
        let images = self.pairs.iter().map(|(x, _)| x.clone()).collect();
        SimplicialMap::new(self.set.clone(), self.left.clone(), images).expect("projection")
    }

    pub fn projection_right(&self) -> SimplicialMap {
        let images = self.pairs.iter().map(|(_, y)| y.clone()).collect();
        SimplicialMap::new(self.set.clone(), self.right.clone(), images).expect("projection")
    }

    /// The section `y ↦ (s_{n-1}⋯s_0 vertex, y)` for a vertex of the left factor.
    pub fn slice_right(&self, vertex: NdId) -> SimplicialMap {
        let images = self
            .right
            .ids()
            .map(|id| {
                let n = self.right.dim_of(id) as u32;
                let v = Simplex::new(vertex, DegeneracyWord((0..n).rev().collect()));
                self.lookup_pair(&v, &Simplex::nondegenerate(id))
                    .expect("slice lands in the product")
            })
            .collect();
        SimplicialMap::new(self.right.clone(), self.set.clone(), images).expect("slice")
    }
}

/// The product with coordinatewise faces and degeneracies. A pair of normal
/// forms is nondegenerate exactly when the two degeneracy words share no
/// index.
pub fn product(x: &Arc<FiniteSimplicialSet>, y: &Arc<FiniteSimplicialSet>) -> Product {
    let mut pairs: Vec<(usize, Simplex, Simplex)> = Vec::new();
    for a in x.ids() {
        let p = x.dim_of(a);
        for b in y.ids() {
            let q = y.dim_of(b);
            for m in p.max(q)..=p + q {
                for r1 in subsets_of_size(m as u32, m - p) {
                    for r2 in subsets_of_size(m as u32, m - q) {
                        if r1.iter().any(|j| r2.contains(j)) {
                            continue;
                        }
                        let mut w1 = r1.clone();
                        w1.reverse();
                        let mut w2 = r2;
                        w2.reverse();
                        pairs.push((
                            m,
                            Simplex::new(a, DegeneracyWord(w1)),
                            Simplex::new(b, DegeneracyWord(w2)),
                        ));
                    }
                }
            }
        }
    }
    pairs.sort();
    let index: HashMap<(Simplex, Simplex), NdId> = pairs
        .iter()
        .enumerate()
        .map(|(k, (_, s, t))| ((s.clone(), t.clone()), NdId(k as u32)))
        .collect();
    let simplices: Vec<NdSimplex> = pairs
        .iter()
        .map(|(m, s, t)| NdSimplex {
            id: format!("({},{})", x.render(s), y.render(t)),
            dim: *m,
        })
        .collect();
    let mut prod = Product {
        set: Arc::new(FiniteSimplicialSet::empty()),
        left: x.clone(),
        right: y.clone(),
        pairs: pairs
            .iter()
            .map(|(_, s, t)| (s.clone(), t.clone()))
            .collect(),
        index,
    };
    let faces = pairs
        .iter()
        .map(|(m, s, t)| {
            if *m == 0 {
                return Vec::new();
            }
            (0..=*m as u32)
                .map(|i| {
                    let fs = x.face(s, i).unwrap();
                    let ft = y.face(t, i).unwrap();
                    prod.lookup_pair(&fs, &ft).expect("faces of a product pair")
                })
                .collect()
        })
        .collect();
    prod.set =
        Arc::new(FiniteSimplicialSet::new(simplices, faces).expect("product is well formed"));
    prod
}

/// `X ⊔ Y` with its two inclusions.
#[derive(Clone, Debug)]
pub struct DisjointUnion {
    pub set: Arc<FiniteSimplicialSet>,
    pub left: SimplicialMap,
    pub right: SimplicialMap,
}

pub fn disjoint_union(x: &Arc<FiniteSimplicialSet>, y: &Arc<FiniteSimplicialSet>) -> DisjointUnion {
    let offset = x.len() as u32;
    let mut simplices = Vec::with_capacity(x.len() + y.len());
    let mut faces = Vec::with_capacity(x.len() + y.len());
    for id in x.ids() {
        simplices.push(NdSimplex {
            id: format!("L.{}", x.name(id)),
            dim: x.dim_of(id),
        });
        faces.push(x.faces_of(id).to_vec());
    }
    for id in y.ids() {
        simplices.push(NdSimplex {
            id: format!("R.{}", y.name(id)),
            dim: y.dim_of(id),
        });
        faces.push(
            y.faces_of(id)
                .iter()
                .map(|f| Simplex::new(NdId(f.base.0 + offset), f.deg.clone()))
                .collect(),
        );
    }
    let set = Arc::new(FiniteSimplicialSet::new(simplices, faces).expect("union is well formed"));
    let left = SimplicialMap::new(
        x.clone(),
        set.clone(),
        x.ids().map(Simplex::nondegenerate).collect(),
    )
    .expect("left inclusion");
    let right = SimplicialMap::new(
        y.clone(),
        set.clone(),
        y.ids()
            .map(|id| Simplex::nondegenerate(NdId(id.0 + offset)))
            .collect(),
    )
    .expect("right inclusion");
    DisjointUnion { set, left, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{minimal_circle, standard_simplex};

    fn arc(x: FiniteSimplicialSet) -> Arc<FiniteSimplicialSet> {
        Arc::new(x)
    }

    /// Brute-force oracle: nondegenerate simplices of `X × Y` counted by
    /// enumerating every pair of same-dimensional generated simplices and
    /// testing that no single degeneracy index is shared.
    fn brute_force_product_counts(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> Vec<usize> {
        let top = x.max_dim().unwrap_or(0) + y.max_dim().unwrap_or(0);
        (0..=top)
            .map(|m| {
                let xs = x.simplices_of_dim(m);
                let ys = y.simplices_of_dim(m);
                let mut count = 0;
                for a in &xs {
                    for b in &ys {
                        // (a, b) = s_j (a', b') iff both are in the image of s_j,
                        // i.e. d_j or d_{j+1} composed with s_j fixes both.
                        let degenerate = (0..m as u32).any(|j| {
                            let fa = x.degeneracy(&x.face(a, j).unwrap(), j).unwrap();
                            let fb = y.degeneracy(&y.face(b, j).unwrap(), j).unwrap();
                            fa == *a && fb == *b
                        });
                        if !degenerate {
                            count += 1;
                        }
                    }
                }
                count
            })
            .collect()
    }

    #[test]
    fn square_counts() {
        let d1 = arc(standard_simplex(1));
        let p = product(&d1, &d1);
        assert_eq!(p.set.counts_by_dim(), vec![4, 5, 2]);
        assert_eq!(p.set.len(), 11);
        assert_eq!(brute_force_product_counts(&d1, &d1), vec![4, 5, 2]);
        assert!(p.set.validate().is_valid());
    }

    #[test]
    fn product_with_point() {
        let pt = arc(standard_simplex(0));
        for x in [standard_simplex(1), standard_simplex(2), minimal_circle()] {
            let x = arc(x);
            let p = product(&pt, &x);
            assert_eq!(p.set.counts_by_dim(), x.counts_by_dim());
            assert!(p.set.validate().is_valid());
            let q = product(&x, &pt);
            assert_eq!(q.set.counts_by_dim(), x.counts_by_dim());
        }
    }

    #[test]
    fn product_counts_are_symmetric_and_match_oracle() {
        let sets = [standard_simplex(1), standard_simplex(2), minimal_circle()].map(arc);
        for a in &sets {
            for b in &sets {
                let ab = product(a, b);
                let ba = product(b, a);
                assert_eq!(ab.set.counts_by_dim(), ba.set.counts_by_dim());
                let mut oracle = brute_force_product_counts(a, b);
                while oracle.last() == Some(&0) {
                    oracle.pop();
                }
                assert_eq!(ab.set.counts_by_dim(), oracle);
                assert!(ab.set.validate().is_valid());
            }
        }
    }

    #[test]
    fn projections_and_slices() {
        let d1 = arc(standard_simplex(1));
        let c = arc(minimal_circle());
        let p = product(&d1, &c);
        assert!(p.projection_left().validate().is_valid());
        assert!(p.projection_right().validate().is_valid());
        for v in ["0", "1"] {
            let s = p.slice_right(d1.lookup(v).unwrap());
            assert!(s.validate().is_valid());
            let back = s.then(&p.projection_right()).unwrap();
            assert_eq!(back, SimplicialMap::identity(c.clone()));
        }
    }

    #[test]
    fn disjoint_union_counts() {
        let pt = arc(standard_simplex(0));
        let two = disjoint_union(&pt, &pt);
        assert_eq!(two.set.counts_by_dim(), vec![2]);
        let d2 = arc(standard_simplex(2));
        let empty = arc(FiniteSimplicialSet::empty());
        let u = disjoint_union(&d2, &empty);
        assert_eq!(u.set.counts_by_dim(), d2.counts_by_dim());
        let w = disjoint_union(&d2, &arc(minimal_circle()));
        assert_eq!(w.set.len(), d2.len() + 2);
        assert!(w.set.validate().is_valid());
        assert!(w.left.validate().is_valid() && w.right.validate().is_valid());
    }
}
