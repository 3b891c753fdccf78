//! The poset of nondegenerate simplices and its doubled quiver.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::SsetError;
use crate::sset::{FiniteSimplicialSet, NdId, SimplicialMap};

/// `Nd(X)` ordered by "is an iterated face of".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdPoset {
    names: Vec<String>,
    dims: Vec<usize>,
    below: Vec<BTreeSet<usize>>,
}

impl NdPoset {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(&a)
    }

    /// Strict pairs `(a, b)` with `a < b`, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .below
            .iter()
            .enumerate()
            .flat_map(|(b, set)| set.iter().map(move |&a| (a, b)))
            .collect();
        pairs.sort();
        pairs
    }

    /// Pairs `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !self.below[b].iter().any(|&m| self.less(a, m)))
            .collect()
    }
}

pub fn nd_poset(x: &FiniteSimplicialSet) -> NdPoset {
    let mut order: Vec<NdId> = x.ids().collect();
    order.sort_by_key(|&id| x.dim_of(id));
    let mut below = vec![BTreeSet::new(); x.len()];
    for id in order {
        let mut set = BTreeSet::new();
        for f in x.faces_of(id) {
            set.insert(f.base.index());
            set.extend(below[f.base.index()].iter().copied());
        }
        below[id.index()] = set;
    }
    NdPoset {
        names: x.simplices().iter().map(|s| s.id.clone()).collect(),
        dims: x.simplices().iter().map(|s| s.dim).collect(),
        below,
    }
}

/// The monotone map `σ ↦ χ(f(σ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    pub source_len: usize,
    pub target_len: usize,
    pub images: Vec<usize>,
}

impl PosetMap {
    pub fn preimage(&self, b: usize) -> Vec<usize> {
        (0..self.source_len)
            .filter(|&a| self.images[a] == b)
            .collect()
    }

    pub fn preimage_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target_len];
        for &b in &self.images {
            sizes[b] += 1;
        }
        sizes
    }

    pub fn then(&self, g: &PosetMap) -> Result<PosetMap, SsetError> {
        if self.target_len != g.source_len {
            return Err(SsetError::NotComposable);
        }
        Ok(PosetMap {
            source_len: self.source_len,
            target_len: g.target_len,
            images: self.images.iter().map(|&b| g.images[b]).collect(),
        })
    }

    pub fn is_monotone(&self, source: &NdPoset, target: &NdPoset) -> bool {
        source.strict_pairs().into_iter().all(|(a, b)| {
            let (fa, fb) = (self.images[a], self.images[b]);
            fa == fb || target.less(fa, fb)
        })
    }
}

pub fn nd_functor(f: &SimplicialMap) -> PosetMap {
    PosetMap {
        source_len: f.source().len(),
        target_len: f.target().len(),
        images: f.images().iter().map(|s| s.base.index()).collect(),
    }
}

/// Which comparabilities become quiver edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeMode {
    /// One edge per strict pair.
    #[default]
    AllPairs,
    /// Covers only.
    Hasse,
}

/// Vertices of the poset, one edge per chosen pair and a formal reverse
/// edge `x*` for each edge `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledQuiver {
    pub vertices: usize,
    /// `(s(x), t(x))` for the unstarred edges `x1, x2, ...`.
    pub edges: Vec<(usize, usize)>,
    pub mode: EdgeMode,
}

impl DoubledQuiver {
    pub fn new(p: &NdPoset, mode: EdgeMode) -> Self {
        let edges = match mode {
            EdgeMode::AllPairs => p.strict_pairs(),
            EdgeMode::Hasse => p.covers(),
        };
        Self {
            vertices: p.len(),
            edges,
            mode,
        }
    }

    /// Number of paths of `k` unstarred edges.
    pub fn unstarred_paths(&self, k: usize) -> usize {
        if k == 0 {
            return self.vertices;
        }
        // ending[v] = number of paths of the current length ending at v
        let mut ending = vec![0usize; self.vertices];
        for &(_, t) in &self.edges {
            ending[t] += 1;
        }
        for _ in 1..k {
            let mut next = vec![0usize; self.vertices];
            for &(s, t) in &self.edges {
                next[t] += ending[s];
            }
            ending = next;
        }
        ending.iter().sum()
    }

    /// Whether the unstarred edges contain a directed cycle.
    pub fn has_cycle(&self) -> bool {
        let mut g = petgraph::graph::DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.vertices).map(|_| g.add_node(())).collect();
        for &(s, t) in &self.edges {
            g.add_edge(nodes[s], nodes[t], ());
        }
        petgraph::algo::is_cyclic_directed(&g)
    }
}

pub fn doubled_quiver(p: &NdPoset) -> DoubledQuiver {
    DoubledQuiver::new(p, EdgeMode::AllPairs)
}

/// Strict chains `σ₀ < ... < σ_k`.
pub fn nerve_chains(p: &NdPoset, k: usize) -> Vec<Vec<usize>> {
    let mut chains: Vec<Vec<usize>> = (0..p.len()).map(|a| vec![a]).collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for c in &chains {
            let last = *c.last().unwrap();
            for b in 0..p.len() {
                if p.less(last, b) {
                    let mut d = c.clone();
                    d.push(b);
                    next.push(d);
                }
            }
        }
        chains = next;
    }
    chains
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverVertex {
    pub id: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverEdge {
    pub label: String,
    pub s: String,
    pub t: String,
    pub star: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDocument {
    pub schema: String,
    pub mode: EdgeMode,
    pub vertices: Vec<QuiverVertex>,
    pub edges: Vec<QuiverEdge>,
}

impl QuiverDocument {
    pub fn new(p: &NdPoset, q: &DoubledQuiver) -> Self {
        let vertices = (0..p.len())
            .map(|k| QuiverVertex {
                id: p.name(k).to_string(),
                label: vertex_label(k, p.len()),
            })
            .collect();
        let edges = q
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| QuiverEdge {
                label: edge_label(k),
                s: vertex_label(s, p.len()),
                t: vertex_label(t, p.len()),
                star: format!("{}*", edge_label(k)),
            })
            .collect();
        Self {
            schema: "quiver.v1".into(),
            mode: q.mode,
            vertices,
            edges,
        }
    }
}

/// `a, b, ..., w` when there are at most 23 vertices, else `v0, v1, ...`.
/// The letter `x` is reserved for edges.
pub fn vertex_label(k: usize, total: usize) -> String {
    if total <= 23 {
        char::from(b'a' + k as u8).to_string()
    } else {
        format!("v{k}")
    }
}

pub fn edge_label(k: usize) -> String {
    format!("x{}", k + 1)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sset::{disjoint_union, minimal_circle, standard_simplex};
    use crate::subdivision::subdivide;

    /// Oracle: `a < b` iff some composite of face maps takes `b` to `a`,
    /// found by exploring all iterated faces of every simplex.
    fn brute_pairs(x: &FiniteSimplicialSet) -> usize {
        let mut count = 0;
        for b in x.ids() {
            let mut seen = BTreeSet::new();
            let mut stack = vec![crate::sset::Simplex::nondegenerate(b)];
            while let Some(s) = stack.pop() {
                if x.dim(&s) == 0 {
                    continue;
                }
                for i in 0..=x.dim(&s) as u32 {
                    let f = x.face(&s, i).unwrap();
                    seen.insert(f.base);
                    stack.push(f);
                }
            }
            seen.remove(&b);
            count += seen.len();
        }
        count
    }

    #[test]
    fn posets_of_examples() {
        let sd1 = subdivide(&Arc::new(standard_simplex(1))).unwrap();
        let p = nd_poset(&sd1.sd);
        assert_eq!(p.len(), 5);
        // a<d, b<d, b<e, c<e
        assert_eq!(p.strict_pairs(), vec![(0, 3), (1, 3), (1, 4), (2, 4)]);
        let d2 = standard_simplex(2);
        let p2 = nd_poset(&d2);
        assert_eq!(p2.strict_pairs().len(), 12);
        assert_eq!(brute_pairs(&d2), 12);
        assert_eq!(nd_poset(&standard_simplex(0)).strict_pairs().len(), 0);
    }

    #[test]
    fn quivers_and_chains() {
        let sd1 = subdivide(&Arc::new(standard_simplex(1))).unwrap();
        let p = nd_poset(&sd1.sd);
        let q = doubled_quiver(&p);
        assert_eq!(q.edges.len(), 4);
        assert_eq!(nerve_chains(&p, 1).len(), 4);
        assert_eq!(nerve_chains(&p, 2).len(), 0);
        assert_eq!(nerve_chains(&p, 0).len(), 5);
        let p2 = nd_poset(&standard_simplex(2));
        let q2 = doubled_quiver(&p2);
        assert_eq!(q2.edges.len(), 12);
        assert_eq!(q2.unstarred_paths(2), 6);
        assert!(!q2.has_cycle());
    }

    #[test]
    fn paths_biject_with_chains() {
        let corpus = [
            standard_simplex(2),
            standard_simplex(3),
            subdivide(&Arc::new(minimal_circle()))
                .unwrap()
                .sd
                .as_ref()
                .clone(),
            subdivide(&Arc::new(standard_simplex(2)))
                .unwrap()
                .sd
                .as_ref()
                .clone(),
        ];
        for x in &corpus {
            let p = nd_poset(x);
            let q = doubled_quiver(&p);
            for k in 0..=3 {
                assert_eq!(q.unstarred_paths(k), nerve_chains(&p, k).len());
            }
            assert_eq!(p.strict_pairs().len(), brute_pairs(x));
        }
        let hasse = DoubledQuiver::new(&nd_poset(&standard_simplex(2)), EdgeMode::Hasse);
        assert_eq!(hasse.edges.len(), 9);
    }

    #[test]
    fn poset_maps() {
        let d0 = Arc::new(standard_simplex(0));
        let d1 = Arc::new(standard_simplex(1));
        let collapse = SimplicialMap::to_point(d1.clone(), d0.clone(), NdId(0)).unwrap();
        let m = nd_functor(&collapse);
        assert_eq!(m.images, vec![0, 0, 0]);
        assert!(m.is_monotone(&nd_poset(&d1), &nd_poset(&d0)));
        let two = disjoint_union(&d0, &d0);
        let fold = SimplicialMap::to_point(two.set.clone(), d0.clone(), NdId(0)).unwrap();
        assert_eq!(nd_functor(&fold).preimage(0).len(), 2);
        let id = nd_functor(&SimplicialMap::identity(d1.clone()));
        assert_eq!(id.images, vec![0, 1, 2]);
        let f = SimplicialMap::between_standard(d1.clone(), Arc::new(standard_simplex(2)), &[0, 2])
            .unwrap();
        let g =
            SimplicialMap::between_standard(f.target().clone(), d1.clone(), &[0, 0, 1]).unwrap();
        let lhs = nd_functor(&f.then(&g).unwrap());
        let rhs = nd_functor(&f).then(&nd_functor(&g)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn labels() {
        assert_eq!(vertex_label(0, 5), "a");
        assert_eq!(vertex_label(22, 23), "w");
        assert_eq!(vertex_label(3, 25), "v3");
        assert_eq!(edge_label(0), "x1");
    }
}
