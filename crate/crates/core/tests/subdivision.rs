use std::sync::Arc;

use procstar::corpus::Corpus;
use procstar::poset::nd_poset;
use procstar::sset::{minimal_circle, standard_simplex, SimplicialMap};
use procstar::subdivision::{is_regular, subdivide, subdivide_map, subdivide_map_with};

/// Strict chains of nonempty subsets of `[n]` with `k + 1` members, counted
/// by choosing a top set and a chain below it.
fn chains_by_length(n: usize) -> Vec<usize> {
    let full = (1u32 << (n + 1)) - 1;
    // ending[s][k]: chains of k+1 sets whose largest member is s
    let mut ending = vec![vec![0usize; n + 2]; full as usize + 1];
    let mut sets: Vec<u32> = (1..=full).collect();
    sets.sort_by_key(|s| s.count_ones());
    for &s in &sets {
        ending[s as usize][0] = 1;
        for &t in &sets {
            if t != s && t & s == t {
                for k in 0..=n {
                    ending[s as usize][k + 1] += ending[t as usize][k];
                }
            }
        }
    }
    (0..=n)
        .map(|k| sets.iter().map(|&s| ending[s as usize][k]).sum())
        .collect()
}

#[test]
fn simplex_subdivision_counts_match_chains() {
    for n in 0..=4 {
        let sd = subdivide(&Arc::new(standard_simplex(n))).unwrap();
        assert_eq!(sd.sd.counts_by_dim(), chains_by_length(n), "n = {n}");
        assert!(sd.sd.validate().is_valid());
    }
}

#[test]
fn subdivisions_of_corpus_are_regular() {
    let c = Corpus::new();
    for (name, x) in c.sets() {
        let sd = subdivide(&x).unwrap();
        assert!(is_regular(&sd.sd).is_regular(), "Sd({name})");
        assert!(sd.sd.validate().is_valid(), "Sd({name})");
    }
    assert!(!is_regular(&minimal_circle()).is_regular());
    assert!(is_regular(&c.sd_circle).is_regular());
}

#[test]
fn subdivided_circle_counts() {
    let circle = Arc::new(minimal_circle());
    let sd = subdivide(&circle).unwrap();
    // one vertex and one edge give two vertices and two edges
    assert_eq!(sd.sd.counts_by_dim(), vec![2, 2]);
    let sd2 = subdivide(&sd.sd).unwrap();
    assert_eq!(sd2.sd.counts_by_dim(), vec![4, 4]);
}

#[test]
fn subdivision_is_deterministic() {
    let x = Arc::new(standard_simplex(3));
    let a = subdivide(&x).unwrap();
    let b = subdivide(&x).unwrap();
    assert_eq!(a.sd.to_json(), b.sd.to_json());
    assert_eq!(a.provenance_document(), b.provenance_document());
}

#[test]
fn subdivision_is_functorial() {
    let c = Corpus::new();
    for (name, x) in c.sets() {
        let id = subdivide_map(&SimplicialMap::identity(x.clone())).unwrap();
        assert_eq!(
            id,
            SimplicialMap::identity(id.source().clone()),
            "id_{name}"
        );
    }
    for (f, g) in c.composable_pairs() {
        let sf = subdivide(f.map.source()).unwrap();
        let sm = subdivide(f.map.target()).unwrap();
        let st = subdivide(g.map.target()).unwrap();
        let direct = subdivide_map_with(&f.map.then(&g.map).unwrap(), &sf, &st).unwrap();
        let composed = subdivide_map_with(&f.map, &sf, &sm)
            .unwrap()
            .then(&subdivide_map_with(&g.map, &sm, &st).unwrap())
            .unwrap();
        assert_eq!(direct, composed, "{} then {}", f.name, g.name);
    }
}

#[test]
fn nd_poset_of_subdivided_simplex_is_face_order() {
    let sd = subdivide(&Arc::new(standard_simplex(2))).unwrap();
    let p = nd_poset(&sd.sd);
    assert_eq!(p.len(), 25);
    for (a, b) in p.strict_pairs() {
        assert!(p.dim(a) < p.dim(b));
        assert!(p.less(a, b) && !p.less(b, a));
    }
    // covers are the codimension-one pairs
    assert!(p.covers().iter().all(|&(a, b)| p.dim(a) + 1 == p.dim(b)));
    assert_eq!(p.covers().len(), 2 * 12 + 3 * 6);
}
