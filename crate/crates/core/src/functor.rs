//! Properness of simplicial maps and the induced maps on generators.
//!
//! A map `f: X -> Y` induces `f~` from the generators of `Y` to
//! polynomials over the generators of `X`: a vertex goes to the sum of its
//! preimages under `Nd(Sd f)`, an edge to the sum of the edges whose
//! endpoints lie over its endpoints.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, SsetError};
use crate::poly::{GeneratorDocument, GeneratorSet, LetterKind, StarPolynomial, Word};
use crate::poset::{nd_functor, EdgeMode, PosetMap};
use crate::presentation::{pipeline, Pipeline, Presentation, Schema};
use crate::rewrite::{Decision, RewriteSystem};
use crate::sset::standard_simplex;
use crate::sset::{
    check_schema, map_from_images, to_pretty, FiniteSimplicialSet, MapDocument, NdId, NdSimplex,
    Simplex, SimplexRef, SimplicialMap, SsetDocument,
};
use crate::subdivision::subdivide_map_with;

pub const FILTRATION_SCHEMA: &str = "filtration.v1";
pub const GENMAP_SCHEMA: &str = "genmap.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Properness {
    Proper {
        max_preimage: usize,
    },
    /// Every preimage has stopped growing over the last two stages.
    ProperOnWindow {
        max_preimage: usize,
    },
    /// `witness` has a preimage that grows at every stage.
    NotProper {
        witness: String,
        sizes: Vec<usize>,
    },
    Unknown,
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        matches!(self, Self::Proper { .. } | Self::ProperOnWindow { .. })
    }
}

/// A finite map is always proper; the verdict records the largest
/// preimage of a nondegenerate simplex.
pub fn is_proper(f: &SimplicialMap) -> Properness {
    Properness::Proper {
        max_preimage: f.max_nd_preimage(),
    }
}

/// Finite window onto a map from an infinite simplicial set: an increasing
/// chain of stages over a fixed target.
#[derive(Clone, Debug)]
pub struct Filtration {
    target: Arc<FiniteSimplicialSet>,
    stages: Vec<Arc<FiniteSimplicialSet>>,
    inclusions: Vec<SimplicialMap>,
    maps: Vec<SimplicialMap>,
}

impl Filtration {
    pub fn new(
        stages: Vec<Arc<FiniteSimplicialSet>>,
        inclusions: Vec<SimplicialMap>,
        maps: Vec<SimplicialMap>,
    ) -> Result<Self, SsetError> {
        let invalid = |msg: String| Err(SsetError::Invalid(msg));
        if stages.is_empty() {
            return invalid("a filtration needs at least one stage".into());
        }
        if inclusions.len() + 1 != stages.len() || maps.len() != stages.len() {
            return invalid(format!(
                "{} stages need {} inclusions and {} maps",
                stages.len(),
                stages.len() - 1,
                stages.len()
            ));
        }
        let target = maps[0].target().clone();
        for (k, f) in maps.iter().enumerate() {
            if **f.source() != *stages[k] || **f.target() != *target {
                return invalid(format!("map {k} has the wrong endpoints"));
            }
            if !f.validate().is_valid() {
                return invalid(format!("map {k} is not simplicial"));
            }
        }
        for (k, i) in inclusions.iter().enumerate() {
            if **i.source() != *stages[k] || **i.target() != *stages[k + 1] {
                return invalid(format!("inclusion {k} has the wrong endpoints"));
            }
            if !i.validate().is_valid() || i.max_nd_preimage() > 1 {
                return invalid(format!("inclusion {k} is not an injective simplicial map"));
            }
            if i.images().iter().any(Simplex::is_degenerate) {
                return invalid(format!("inclusion {k} collapses a simplex"));
            }
            if i.then(&maps[k + 1])?.images() != maps[k].images() {
                return invalid(format!("map {} does not restrict to map {k}", k + 1));
            }
        }
        Ok(Self {
            target,
            stages,
            inclusions,
            maps,
        })
    }

    pub fn target(&self) -> &Arc<FiniteSimplicialSet> {
        &self.target
    }

    pub fn stages(&self) -> &[Arc<FiniteSimplicialSet>] {
        &self.stages
    }

    pub fn inclusions(&self) -> &[SimplicialMap] {
        &self.inclusions
    }

    pub fn maps(&self) -> &[SimplicialMap] {
        &self.maps
    }

    /// `n` stages of the map from `k` disjoint points to `Δ⁰`, `k = 1..=n`.
    pub fn points_to_point(n: usize) -> Result<Self, SsetError> {
        let target = Arc::new(standard_simplex(0));
        let stages: Vec<_> = (1..=n).map(|k| Arc::new(points(k))).collect();
        let inclusions = stages
            .windows(2)
            .map(|w| {
                let images = w[0]
                    .ids()
                    .map(|id| Simplex::nondegenerate(NdId(id.0)))
                    .collect();
                SimplicialMap::new(w[0].clone(), w[1].clone(), images)
            })
            .collect::<Result<_, _>>()?;
        let maps = stages
            .iter()
            .map(|s| SimplicialMap::to_point(s.clone(), target.clone(), NdId(0)))
            .collect::<Result<_, _>>()?;
        Self::new(stages, inclusions, maps)
    }

    pub fn preimage_sizes(&self) -> Vec<Vec<usize>> {
        self.maps
            .iter()
            .map(|f| nd_functor(f).preimage_sizes())
            .collect()
    }

    pub fn properness(&self) -> Properness {
        let sizes = self.preimage_sizes();
        if sizes.len() < 2 {
            return Properness::Unknown;
        }
        let last = &sizes[sizes.len() - 1];
        if sizes[sizes.len() - 2] == *last {
            return Properness::ProperOnWindow {
                max_preimage: last.iter().copied().max().unwrap_or(0),
            };
        }
        for b in 0..self.target.len() {
            if sizes.windows(2).all(|w| w[0][b] < w[1][b]) {
                return Properness::NotProper {
                    witness: self.target.name(NdId(b as u32)).to_string(),
                    sizes: sizes.iter().map(|s| s[b]).collect(),
                };
            }
        }
        Properness::Unknown
    }

    pub fn to_document(&self) -> FiltrationDocument {
        FiltrationDocument {
            schema: FILTRATION_SCHEMA.into(),
            target: SsetDocument::from_set(&self.target),
            stages: self
                .stages
                .iter()
                .map(|s| SsetDocument::from_set(s))
                .collect(),
            inclusions: self
                .inclusions
                .iter()
                .map(|i| MapDocument::from_map(i).images)
                .collect(),
            maps: self
                .maps
                .iter()
                .map(|f| MapDocument::from_map(f).images)
                .collect(),
        }
    }

    pub fn from_document(doc: &FiltrationDocument) -> Result<Self, FormatError> {
        check_schema(&doc.schema, FILTRATION_SCHEMA)?;
        let target = Arc::new(doc.target.to_set()?);
        let stages = doc
            .stages
            .iter()
            .map(|s| s.to_set().map(Arc::new))
            .collect::<Result<Vec<_>, _>>()?;
        if doc.inclusions.len() + 1 != stages.len() || doc.maps.len() != stages.len() {
            return Err(FormatError::Invalid(
                "stage, inclusion and map counts disagree".into(),
            ));
        }
        let inclusions = doc
            .inclusions
            .iter()
            .enumerate()
            .map(|(k, m)| map_from_images(stages[k].clone(), stages[k + 1].clone(), m))
            .collect::<Result<Vec<_>, _>>()?;
        let maps = doc
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| map_from_images(stages[k].clone(), target.clone(), m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(stages, inclusions, maps)?)
    }

    pub fn to_json(&self) -> String {
        to_pretty(&self.to_document())
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

/// `k` disjoint points `p1, ..., pk`.
fn points(k: usize) -> FiniteSimplicialSet {
    let simplices = (1..=k)
        .map(|i| NdSimplex {
            id: format!("p{i}"),
            dim: 0,
        })
        .collect();
    FiniteSimplicialSet::new(simplices, vec![Vec::new(); k]).expect("points are valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationDocument {
    pub schema: String,
    pub target: SsetDocument,
    pub stages: Vec<SsetDocument>,
    pub inclusions: Vec<BTreeMap<String, SimplexRef>>,
    pub maps: Vec<BTreeMap<String, SimplexRef>>,
}

/// Map from the letters of `source` to polynomials over `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    pub source: Arc<GeneratorSet>,
    pub target: Arc<GeneratorSet>,
    pub images: Vec<StarPolynomial>,
}

impl GeneratorMap {
    pub fn identity(gens: Arc<GeneratorSet>) -> Self {
        let images = gens.letters().map(StarPolynomial::letter).collect();
        Self {
            source: gens.clone(),
            target: gens,
            images,
        }
    }

    /// Extends the map to a polynomial.
    pub fn apply(&self, p: &StarPolynomial) -> StarPolynomial {
        p.substitute(&self.images)
    }

    /// Letters `l` with `g(l*) != g(l)*`.
    pub fn star_defects(&self) -> Vec<String> {
        self.source
            .letters()
            .filter(|&l| {
                self.images[self.source.star(l) as usize]
                    != self.images[l as usize].star(&self.target)
            })
            .map(|l| self.source.label(l))
            .collect()
    }

    pub fn normalized(&self, rs: &RewriteSystem) -> Self {
        Self {
            images: self.images.iter().map(|p| rs.normal_form(p)).collect(),
            ..self.clone()
        }
    }

    /// Per-letter comparison in `rs`; the first letter that is not equal,
    /// with its decision, or `None` when all agree.
    pub fn first_difference(
        &self,
        other: &GeneratorMap,
        rs: &RewriteSystem,
    ) -> Option<(String, Decision)> {
        if self.source != other.source || self.target != other.target {
            return Some(("<generators>".into(), Decision::Distinct));
        }
        self.source.letters().find_map(|l| {
            match rs.decide_equal(&self.images[l as usize], &other.images[l as usize]) {
                Decision::Equal => None,
                d => Some((self.source.label(l), d)),
            }
        })
    }

    pub fn to_document(&self) -> GenmapDocument {
        let images = self
            .source
            .letters()
            .filter(|&l| !matches!(self.source.kind(l), LetterKind::Star(_)))
            .map(|l| {
                (
                    self.source.label(l),
                    self.target.render(&self.images[l as usize]),
                )
            })
            .collect();
        GenmapDocument {
            schema: GENMAP_SCHEMA.into(),
            source: self.source.to_document(),
            target: self.target.to_document(),
            images,
        }
    }

    pub fn from_document(doc: &GenmapDocument) -> Result<Self, FormatError> {
        check_schema(&doc.schema, GENMAP_SCHEMA)?;
        let source = Arc::new(GeneratorSet::from_document(&doc.source)?);
        let target = Arc::new(GeneratorSet::from_document(&doc.target)?);
        let mut images = vec![StarPolynomial::zero(); source.letter_count()];
        for (label, text) in &doc.images {
            let l = source
                .lookup(label)
                .filter(|&l| !matches!(source.kind(l), LetterKind::Star(_)))
                .ok_or_else(|| FormatError::UnknownGenerator(label.clone()))?;
            images[l as usize] = target.parse(text)?;
        }
        for l in source.letters() {
            if matches!(source.kind(l), LetterKind::Star(_)) {
                images[l as usize] = images[source.star(l) as usize].star(&target);
            }
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    pub fn to_json(&self) -> String {
        to_pretty(&self.to_document())
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

/// Starred letters are omitted; their images are the adjoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenmapDocument {
    pub schema: String,
    pub source: GeneratorDocument,
    pub target: GeneratorDocument,
    pub images: BTreeMap<String, String>,
}

/// `f~` from already computed pipelines of the endpoints of `f`.
pub fn induced_hom_with(
    f: &SimplicialMap,
    source: &Pipeline,
    target: &Pipeline,
) -> Result<GeneratorMap, SsetError> {
    let sd_f = subdivide_map_with(f, &source.subdivision, &target.subdivision)?;
    Ok(induced_from_poset_map(
        &nd_functor(&sd_f),
        &source.generators,
        &target.generators,
    ))
}

pub fn induced_hom(f: &SimplicialMap) -> Result<GeneratorMap, SsetError> {
    let source = pipeline(f.source(), EdgeMode::AllPairs)?;
    let target = pipeline(f.target(), EdgeMode::AllPairs)?;
    induced_hom_with(f, &source, &target)
}

/// `phi` maps the vertices of `down` to the vertices of `up`; the result
/// goes from the letters of `up` to polynomials over `down`.
pub fn induced_from_poset_map(
    phi: &PosetMap,
    down: &Arc<GeneratorSet>,
    up: &Arc<GeneratorSet>,
) -> GeneratorMap {
    let mut images = vec![StarPolynomial::zero(); up.letter_count()];
    for w in down.vertex_letters() {
        images[phi.images[w as usize]].add_term(Word::letter(w), 1);
    }
    let mut over: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (j, &(s, t)) in down.edges().iter().enumerate() {
        over.entry((phi.images[s], phi.images[t]))
            .or_default()
            .push(j);
    }
    for (k, &st) in up.edges().iter().enumerate() {
        let x = up.edge_letter(k);
        let sum: StarPolynomial = over
            .get(&st)
            .into_iter()
            .flatten()
            .map(|&j| (Word::letter(down.edge_letter(j)), 1))
            .collect();
        images[up.star(x) as usize] = sum.star(down);
        images[x as usize] = sum;
    }
    GeneratorMap {
        source: up.clone(),
        target: down.clone(),
        images,
    }
}

/// `g2 ∘ g1`: substitute the images of `g1` into `g2`.
pub fn compose_genmaps(g1: &GeneratorMap, g2: &GeneratorMap) -> Result<GeneratorMap, SsetError> {
    if g1.target != g2.source {
        return Err(SsetError::NotComposable);
    }
    Ok(GeneratorMap {
        source: g1.source.clone(),
        target: g2.target.clone(),
        images: g1.images.iter().map(|p| g2.apply(p)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    /// The normal form of `g(lhs) - g(rhs)`.
    Fail {
        residue: String,
    },
    Unknown {
        residue: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub schema: Schema,
    pub relation: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub checks: Vec<RelationCheck>,
    /// `g(Σ v) = 1`, for unital presentations.
    pub unit: Option<Outcome>,
    pub star_defects: Vec<String>,
}

impl PreservationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Unknown { .. }))
    }

    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == Outcome::Pass)
            && self.unit.as_ref().is_none_or(|u| *u == Outcome::Pass)
            && self.star_defects.is_empty()
    }

    pub fn has_unknown(&self) -> bool {
        self.unknowns().next().is_some() || matches!(self.unit, Some(Outcome::Unknown { .. }))
    }

    pub fn has_failure(&self) -> bool {
        self.failures().next().is_some()
            || matches!(self.unit, Some(Outcome::Fail { .. }))
            || !self.star_defects.is_empty()
    }
}

fn outcome(rs: &RewriteSystem, d: &StarPolynomial) -> Outcome {
    let nf = rs.normal_form(d);
    if nf.is_zero() {
        Outcome::Pass
    } else if rs.is_complete() {
        Outcome::Fail {
            residue: rs.generators().render(&nf),
        }
    } else {
        Outcome::Unknown {
            residue: rs.generators().render(&nf),
        }
    }
}

/// Checks every relation instance of the presentation on `g.source`
/// after applying `g`, in the rewrite system `rs` of `g.target`.
pub fn verify_relation_preservation(
    g: &GeneratorMap,
    source: &Presentation,
    rs: &RewriteSystem,
) -> Result<PreservationReport, SsetError> {
    if *source.generators != *g.source || **rs.generators() != *g.target {
        return Err(SsetError::NotComposable);
    }
    let render = |p: &StarPolynomial| g.source.render(p);
    let checks = source
        .relations
        .iter()
        .map(|r| RelationCheck {
            schema: r.schema,
            relation: format!("{} = {}", render(&r.lhs), render(&r.rhs)),
            outcome: outcome(rs, &(g.apply(&r.lhs) - g.apply(&r.rhs))),
        })
        .collect();
    let unit = source.unital.then(|| {
        let total: StarPolynomial = g
            .source
            .vertex_letters()
            .map(StarPolynomial::letter)
            .fold(StarPolynomial::zero(), |acc, v| acc + v);
        outcome(rs, &(g.apply(&total) - StarPolynomial::one()))
    });
    Ok(PreservationReport {
        checks,
        unit,
        star_defects: g.star_defects(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::present;
    use crate::rewrite::compile;
    use crate::sset::disjoint_union;

    fn point() -> Arc<FiniteSimplicialSet> {
        Arc::new(standard_simplex(0))
    }

    #[test]
    fn finite_maps_are_proper() {
        let d1 = Arc::new(standard_simplex(1));
        assert_eq!(
            is_proper(&SimplicialMap::identity(d1)),
            Properness::Proper { max_preimage: 1 }
        );
        let u = disjoint_union(&point(), &point());
        let fold = SimplicialMap::to_point(u.set.clone(), point(), NdId(0)).unwrap();
        assert_eq!(is_proper(&fold), Properness::Proper { max_preimage: 2 });
    }

    #[test]
    fn growing_points_are_not_proper() {
        for n in 2..=5 {
            let f = Filtration::points_to_point(n).unwrap();
            match f.properness() {
                Properness::NotProper { witness, sizes } => {
                    assert_eq!(witness, point().name(NdId(0)));
                    assert_eq!(sizes, (1..=n).collect::<Vec<_>>());
                }
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(
            Filtration::points_to_point(1).unwrap().properness(),
            Properness::Unknown
        );
    }

    #[test]
    fn filtration_round_trip() {
        let f = Filtration::points_to_point(3).unwrap();
        let text = f.to_json();
        let g = Filtration::from_json(&text).unwrap();
        assert_eq!(g.to_json(), text);
        assert_eq!(g.properness(), f.properness());
    }

    #[test]
    fn fold_sums_preimages() {
        let u = disjoint_union(&point(), &point());
        let fold = SimplicialMap::to_point(u.set.clone(), point(), NdId(0)).unwrap();
        let g = induced_hom(&fold).unwrap();
        assert_eq!(g.target.render(&g.images[0]), "a + b");
        let rs = compile(&present(&u.set).unwrap(), 6);
        let sq = &g.images[0] * &g.images[0];
        assert_eq!(rs.normal_form(&sq), rs.normal_form(&g.images[0]));
        let report = verify_relation_preservation(&g, &present(&point()).unwrap(), &rs).unwrap();
        assert!(report.passes(), "{report:?}");
    }

    #[test]
    fn identity_induces_identity() {
        let d1 = Arc::new(standard_simplex(1));
        let g = induced_hom(&SimplicialMap::identity(d1.clone())).unwrap();
        assert_eq!(g, GeneratorMap::identity(g.source.clone()));
        let p = present(&d1).unwrap();
        let report = verify_relation_preservation(&g, &p, &compile(&p, 6)).unwrap();
        assert!(report.passes());
    }

    #[test]
    fn genmap_round_trip() {
        let d1 = Arc::new(standard_simplex(1));
        let collapse = SimplicialMap::to_point(d1, point(), NdId(0)).unwrap();
        let g = induced_hom(&collapse).unwrap();
        let text = g.to_json();
        assert_eq!(GeneratorMap::from_json(&text).unwrap(), g);
    }
}
