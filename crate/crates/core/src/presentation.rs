//! Generators and relations of the universal *-algebra attached to a finite
//! simplicial set: subdivide, take the poset of nondegenerate simplices,
//! double its quiver, and read off relations (1)–(5).

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, SsetError};
use crate::poly::{GeneratorDocument, GeneratorSet, Letter, StarPolynomial, Word};
use crate::poset::{nd_poset, DoubledQuiver, EdgeMode, NdPoset};
use crate::sset::FiniteSimplicialSet;
use crate::subdivision::{subdivide, SubdivisionResult};

pub const PRESENTATION_SCHEMA: &str = "presentation.v1";

/// Relation families, numbered (1)–(5) in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Schema {
    /// `xy = 0` when `t(x) ≠ s(y)`.
    Concat,
    /// `xx* = s(x)` and `x*x = t(x)`.
    PartialIsometry,
    /// `vx = x` when `v = s(x)`, else `0`.
    LeftUnit,
    /// `xv = x` when `v = t(x)`, else `0`.
    RightUnit,
    /// Finite form of the approximate unit: the vertices sum to `1`.
    ApproxUnit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub schema: Schema,
    pub lhs: StarPolynomial,
    pub rhs: StarPolynomial,
}

impl RelationInstance {
    pub fn difference(&self) -> StarPolynomial {
        self.lhs.clone() - self.rhs.clone()
    }

    pub fn is_monomial(&self) -> bool {
        self.lhs.len() <= 1 && self.rhs.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Arc<GeneratorSet>,
    pub relations: Vec<RelationInstance>,
    pub unital: bool,
    pub lambda_note: String,
}

const LAMBDA_NOTE: &str =
    "the unit relation ranges over the directed set of finite vertex subsets; \
for a finite vertex set it is the single identity: sum of all vertices = 1";

/// Instances of (1)–(4) and, when `unital`, the unit relation.
///
/// Composable pairs in (1) are skipped: for them the concatenation is the
/// word `xy` itself and the instance would read `xy = xy`.
pub fn relation_instances(gens: &GeneratorSet, unital: bool) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    let arrows: Vec<Letter> = gens.arrow_letters().collect();
    let word = |ls: &[Letter]| StarPolynomial::word(Word(ls.to_vec()));
    for &x in &arrows {
        for &y in &arrows {
            if gens.target(x) != gens.source(y) {
                out.push(RelationInstance {
                    schema: Schema::Concat,
                    lhs: word(&[x, y]),
                    rhs: StarPolynomial::zero(),
                });
            }
        }
    }
    for k in 0..gens.edge_count() {
        let x = gens.edge_letter(k);
        let xs = gens.star(x);
        out.push(RelationInstance {
            schema: Schema::PartialIsometry,
            lhs: word(&[x, xs]),
            rhs: StarPolynomial::letter(gens.source(x) as Letter),
        });
        out.push(RelationInstance {
            schema: Schema::PartialIsometry,
            lhs: word(&[xs, x]),
            rhs: StarPolynomial::letter(gens.target(x) as Letter),
        });
    }
    for v in gens.vertex_letters() {
        for &x in &arrows {
            let rhs = if gens.source(x) == v as usize {
                StarPolynomial::letter(x)
            } else {
                StarPolynomial::zero()
            };
            out.push(RelationInstance {
                schema: Schema::LeftUnit,
                lhs: word(&[v, x]),
                rhs,
            });
        }
    }
    for v in gens.vertex_letters() {
        for &x in &arrows {
            let rhs = if gens.target(x) == v as usize {
                StarPolynomial::letter(x)
            } else {
                StarPolynomial::zero()
            };
            out.push(RelationInstance {
                schema: Schema::RightUnit,
                lhs: word(&[x, v]),
                rhs,
            });
        }
    }
    if unital {
        let sum = gens
            .vertex_letters()
            .map(|v| (Word::letter(v), 1))
            .collect();
        out.push(RelationInstance {
            schema: Schema::ApproxUnit,
            lhs: sum,
            rhs: StarPolynomial::one(),
        });
    }
    out
}

/// Everything computed on the way from `X` to its generators.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub subdivision: SubdivisionResult,
    pub poset: NdPoset,
    pub quiver: DoubledQuiver,
    pub generators: Arc<GeneratorSet>,
}

pub fn pipeline(x: &Arc<FiniteSimplicialSet>, mode: EdgeMode) -> Result<Pipeline, SsetError> {
    let subdivision = subdivide(x)?;
    let poset = nd_poset(&subdivision.sd);
    let quiver = DoubledQuiver::new(&poset, mode);
    let names = subdivision
        .sd
        .simplices()
        .iter()
        .map(|s| s.id.clone())
        .collect();
    let generators = Arc::new(GeneratorSet::new(names, quiver.edges.clone()));
    Ok(Pipeline {
        subdivision,
        poset,
        quiver,
        generators,
    })
}

impl Pipeline {
    pub fn presentation(&self) -> Presentation {
        Presentation::from_generators(self.generators.clone(), true)
    }
}

/// The presentation of `X`, with one quiver edge per strict pair.
pub fn present(x: &Arc<FiniteSimplicialSet>) -> Result<Presentation, SsetError> {
    Ok(pipeline(x, EdgeMode::AllPairs)?.presentation())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub schema: Schema,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDocument {
    pub schema: String,
    pub unital: bool,
    pub lambda_note: String,
    pub generators: GeneratorDocument,
    pub relations: Vec<RelationEntry>,
}

/// Output formats for [`Presentation::emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = FormatError;
    fn from_str(s: &str) -> Result<Self, FormatError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(FormatError::UnknownFormat(other.into())),
        }
    }
}

impl Presentation {
    pub fn from_generators(generators: Arc<GeneratorSet>, unital: bool) -> Self {
        let relations = relation_instances(&generators, unital);
        Self {
            generators,
            relations,
            unital,
            lambda_note: LAMBDA_NOTE.into(),
        }
    }

    pub fn count(&self, schema: Schema) -> usize {
        self.relations.iter().filter(|r| r.schema == schema).count()
    }

    /// Whether every letter used by a relation is a declared generator.
    pub fn is_closed(&self) -> bool {
        let n = self.generators.letter_count() as Letter;
        self.relations.iter().all(|r| {
            r.lhs
                .terms()
                .chain(r.rhs.terms())
                .all(|(w, _)| w.0.iter().all(|&l| l < n))
        })
    }

    pub fn to_document(&self) -> PresentationDocument {
        let g = &self.generators;
        PresentationDocument {
            schema: PRESENTATION_SCHEMA.into(),
            unital: self.unital,
            lambda_note: self.lambda_note.clone(),
            generators: g.to_document(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationEntry {
                    schema: r.schema,
                    lhs: g.render(&r.lhs),
                    rhs: g.render(&r.rhs),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &PresentationDocument) -> Result<Self, FormatError> {
        crate::sset::check_schema(&doc.schema, PRESENTATION_SCHEMA)?;
        let generators = Arc::new(GeneratorSet::from_document(&doc.generators)?);
        let mut relations = Vec::with_capacity(doc.relations.len());
        for r in &doc.relations {
            relations.push(RelationInstance {
                schema: r.schema,
                lhs: generators.parse(&r.lhs)?,
                rhs: generators.parse(&r.rhs)?,
            });
        }
        Ok(Self {
            generators,
            relations,
            unital: doc.unital,
            lambda_note: doc.lambda_note.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        crate::sset::to_pretty(&self.to_document())
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: PresentationDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    /// Human-readable listing with one relation per line.
    pub fn to_text(&self) -> String {
        let g = &self.generators;
        let mut out = String::new();
        let labels: Vec<String> = g.vertex_letters().map(|v| g.label(v)).collect();
        let _ = writeln!(out, "# vertices (positive): {}", labels.join(" "));
        let _ = writeln!(out, "# edges:");
        for (k, &(s, t)) in g.edges().iter().enumerate() {
            let x = g.edge_letter(k);
            let _ = writeln!(
                out,
                "#   {}: {} -> {}   {}: {} -> {}",
                g.label(x),
                g.label(s as Letter),
                g.label(t as Letter),
                g.label(g.star(x)),
                g.label(t as Letter),
                g.label(s as Letter)
            );
        }
        if !self.unital {
            let _ = writeln!(out, "# {}", self.lambda_note);
        }
        let mut current = None;
        for r in &self.relations {
            if current != Some(r.schema) {
                let _ = writeln!(out, "# {:?}", r.schema);
                current = Some(r.schema);
            }
            let _ = writeln!(out, "{} = {}", g.render(&r.lhs), g.render(&r.rhs));
        }
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}
