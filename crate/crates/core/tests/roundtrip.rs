use std::sync::Arc;

use procstar::corpus::Corpus;
use procstar::functor::{induced_hom, Filtration, GeneratorMap};
use procstar::presentation::{present, Presentation};
use procstar::repcheck::{matrix_unit_rep, MatrixRep};
use procstar::sset::{FiniteSimplicialSet, MapDocument, SimplicialMap};
use procstar::subdivision::subdivide;

#[test]
fn simplicial_sets_round_trip() {
    let c = Corpus::new();
    for (name, x) in c.sets() {
        let text = x.to_json();
        let back = FiniteSimplicialSet::from_json(&text).unwrap();
        assert_eq!(back, *x, "{name}");
        assert_eq!(back.to_json(), text, "{name}");
        let sd = subdivide(&x).unwrap().sd;
        assert_eq!(FiniteSimplicialSet::from_json(&sd.to_json()).unwrap(), *sd);
    }
}

#[test]
fn maps_round_trip() {
    let c = Corpus::new();
    for m in c.maps().into_iter().chain(c.extra_maps()) {
        let text = m.map.to_json();
        let back = SimplicialMap::from_json(&text).unwrap();
        assert_eq!(back, m.map, "{}", m.name);
        let doc: MapDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.to_map().unwrap(), m.map);
    }
}

#[test]
fn presentations_round_trip() {
    let c = Corpus::new();
    for (name, x) in c.sets() {
        let p = present(&x).unwrap();
        let text = p.to_json();
        let back = Presentation::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text, "{name}");
        assert_eq!(back.relations.len(), p.relations.len());
    }
}

#[test]
fn generator_maps_round_trip() {
    let c = Corpus::new();
    for m in c.maps().into_iter().chain(c.extra_maps()) {
        let g = induced_hom(&m.map).unwrap();
        let back = GeneratorMap::from_json(&g.to_json()).unwrap();
        assert_eq!(back.images, g.images, "{}", m.name);
        assert_eq!(back.to_json(), g.to_json());
    }
}

#[test]
fn filtrations_round_trip() {
    let f = Filtration::points_to_point(4).unwrap();
    let back = Filtration::from_json(&f.to_json()).unwrap();
    assert_eq!(back.to_json(), f.to_json());
    assert_eq!(back.properness(), f.properness());
}

#[test]
fn representations_round_trip() {
    let c = Corpus::new();
    let p = present(&c.interval).unwrap();
    let rep = matrix_unit_rep(&p);
    let back = MatrixRep::from_json(&rep.to_json(), p.generators.clone()).unwrap();
    assert_eq!(back, rep);
    let other = present(&Arc::new(procstar::sset::standard_simplex(0))).unwrap();
    assert!(MatrixRep::from_json(&rep.to_json(), other.generators.clone()).is_err());
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(FiniteSimplicialSet::from_json("{").is_err());
    assert!(FiniteSimplicialSet::from_json(r#"{"schema":"sset.v0","simplices":[]}"#).is_err());
    let c = Corpus::new();
    let text = c.interval.to_json().replace("sset.v1", "smap.v1");
    assert!(FiniteSimplicialSet::from_json(&text).is_err());
    assert!(Presentation::from_json(&c.interval.to_json()).is_err());
}
