//! Cylinders `Δ¹ × X`, homotopy diagrams and the endpoint check of the
//! rotation homotopy.
//!
//! For `f1, f2: X -> Y` a homotopy is `γ: Δ¹ × X -> Y` with
//! `γ ∘ (d⁰×1) = f1` and `γ ∘ (d¹×1) = f2`. Here `d⁰: Δ⁰ -> Δ¹` misses
//! vertex 0, so `d⁰×1` is the slice at vertex 1.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::SsetError;
use crate::functor::{induced_hom_with, is_proper, GeneratorMap, Properness};
use crate::poly::StarPolynomial;
use crate::poset::EdgeMode;
use crate::presentation::{pipeline, Pipeline};
use crate::rewrite::{Decision, RewriteSystem};
use crate::sset::{product, standard_simplex, FiniteSimplicialSet, NdId, Product, SimplicialMap};

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub product: Product,
    /// `d⁰×1: X -> Δ¹ × X`, the end at vertex 1.
    pub d0: SimplicialMap,
    /// `d¹×1: X -> Δ¹ × X`, the end at vertex 0.
    pub d1: SimplicialMap,
}

impl Cylinder {
    pub fn set(&self) -> &Arc<FiniteSimplicialSet> {
        &self.product.set
    }

    pub fn base(&self) -> &Arc<FiniteSimplicialSet> {
        &self.product.right
    }

    /// `d⁰×1` for `i = 0`, `d¹×1` for `i = 1`.
    pub fn end(&self, i: usize) -> &SimplicialMap {
        if i == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }
}

pub fn cylinder(x: &Arc<FiniteSimplicialSet>) -> Cylinder {
    let interval = Arc::new(standard_simplex(1));
    let product = product(&interval, x);
    let d0 = product.slice_right(NdId(1));
    let d1 = product.slice_right(NdId(0));
    Cylinder { product, d0, d1 }
}

#[derive(Clone, Debug)]
pub struct HomotopyDiagram {
    pub f1: SimplicialMap,
    pub f2: SimplicialMap,
    pub gamma: SimplicialMap,
    pub cylinder: Cylinder,
}

impl HomotopyDiagram {
    pub fn new(
        f1: SimplicialMap,
        f2: SimplicialMap,
        gamma: SimplicialMap,
    ) -> Result<Self, SsetError> {
        if **f1.source() != **f2.source() || **f1.target() != **f2.target() {
            return Err(SsetError::Invalid(
                "f1 and f2 have different endpoints".into(),
            ));
        }
        let cylinder = cylinder(f1.source());
        if **gamma.source() != **cylinder.set() || **gamma.target() != **f1.target() {
            return Err(SsetError::Invalid(
                "gamma must go from the cylinder on the source of f1 to its target".into(),
            ));
        }
        Ok(Self {
            f1,
            f2,
            gamma,
            cylinder,
        })
    }

    /// `γ = f ∘ pr₂` from `f` to itself.
    pub fn constant(f: &SimplicialMap) -> Self {
        let cylinder = cylinder(f.source());
        let gamma = cylinder
            .product
            .projection_right()
            .then(f)
            .expect("projection composes with f");
        Self {
            f1: f.clone(),
            f2: f.clone(),
            gamma,
            cylinder,
        }
    }

    /// `f1` for `i = 0`, `f2` for `i = 1`.
    pub fn endpoint(&self, i: usize) -> &SimplicialMap {
        if i == 0 {
            &self.f1
        } else {
            &self.f2
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyVerdict {
    pub valid: bool,
    /// Endpoint index and the first simplex where `γ ∘ (dⁱ×1)` and `fᵢ` differ.
    pub witness: Option<(usize, String)>,
    /// `f1`, `f2` and `γ`, when properness was requested.
    pub properness: Option<Vec<(String, Properness)>>,
}

pub fn verify_homotopy(
    d: &HomotopyDiagram,
    require_proper: bool,
) -> Result<HomotopyVerdict, SsetError> {
    let mut witness = None;
    if !d.gamma.validate().is_valid() {
        witness = Some((0, "<gamma is not simplicial>".to_string()));
    }
    for i in 0..2 {
        if witness.is_some() {
            break;
        }
        let composite = d.cylinder.end(i).then(&d.gamma)?;
        let f = d.endpoint(i);
        let x = f.source();
        if let Some(id) = x.ids().find(|&id| composite.image(id) != f.image(id)) {
            witness = Some((i, x.name(id).to_string()));
        }
    }
    let properness = require_proper.then(|| {
        vec![
            ("f1".to_string(), is_proper(&d.f1)),
            ("f2".to_string(), is_proper(&d.f2)),
            ("gamma".to_string(), is_proper(&d.gamma)),
        ]
    });
    let proper = properness
        .as_ref()
        .is_none_or(|ps| ps.iter().all(|(_, p)| p.is_proper()));
    Ok(HomotopyVerdict {
        valid: witness.is_none() && proper,
        witness,
        properness,
    })
}

/// Formal 2×2 matrix with polynomial entries.
pub type Matrix2 = [[StarPolynomial; 2]; 2];

/// `ω₁ = [[0, 1], [-1, 0]]`, the rotation at `t = 1`.
const OMEGA_1: [[i64; 2]; 2] = [[0, 1], [-1, 0]];

/// `ω m ωᵀ` for an integer matrix `ω`.
fn conjugate(omega: [[i64; 2]; 2], m: &Matrix2) -> Matrix2 {
    let entry = |i: usize, j: usize| {
        let mut acc = StarPolynomial::zero();
        for k in 0..2 {
            for l in 0..2 {
                let c = omega[i][k] * omega[j][l];
                if c != 0 {
                    acc = acc + m[k][l].scale(c);
                }
            }
        }
        acc
    };
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaEntry {
    pub generator: String,
    /// Rendered matrices at `t = 0` and `t = 1`.
    pub t0: [[String; 2]; 2],
    pub t1: [[String; 2]; 2],
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaCertificate {
    pub rotation: String,
    pub corner: String,
    pub entries: Vec<EtaEntry>,
    /// Per endpoint, the first generator of the target where
    /// `(dⁱ×1)~ ∘ γ~` and `fᵢ~` disagree, with the decision.
    pub composites: [Option<(String, Decision)>; 2],
}

impl EtaCertificate {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.decision == Decision::Equal)
            && self.composites.iter().all(Option::is_none)
    }

    pub fn has_unknown(&self) -> bool {
        self.entries.iter().any(|e| e.decision == Decision::Unknown)
            || self
                .composites
                .iter()
                .flatten()
                .any(|(_, d)| *d == Decision::Unknown)
    }
}

/// Conjunction of decisions, `Distinct` winning over `Unknown`.
fn all_equal(ds: impl IntoIterator<Item = Decision>) -> Decision {
    let mut out = Decision::Equal;
    for d in ds {
        match d {
            Decision::Distinct => return Decision::Distinct,
            Decision::Unknown => out = Decision::Unknown,
            Decision::Equal => {}
        }
    }
    out
}

/// Pipelines shared by the endpoint checks.
pub struct EtaInputs<'a> {
    pub base: &'a Pipeline,
    pub cylinder: &'a Pipeline,
    pub target: &'a Pipeline,
    /// Rewrite system over the generators of `base`.
    pub rewrite: &'a RewriteSystem,
}

/// Builds `diag((d⁰×1)~δ, (d¹×1)~δ)` and its `ω₁`-conjugate for every
/// generator `δ` of the cylinder and checks the corner entries and the
/// vanishing off-diagonals; then checks `(dⁱ×1)~ ∘ γ~ = fᵢ~`.
pub fn eta_endpoints_with(
    d: &HomotopyDiagram,
    inputs: &EtaInputs,
) -> Result<EtaCertificate, SsetError> {
    let rs = inputs.rewrite;
    if **rs.generators() != *inputs.base.generators {
        return Err(SsetError::NotComposable);
    }
    let ends: Vec<GeneratorMap> = (0..2)
        .map(|i| induced_hom_with(d.cylinder.end(i), inputs.base, inputs.cylinder))
        .collect::<Result<_, _>>()?;
    let base = &inputs.base.generators;
    let cyl = &inputs.cylinder.generators;
    let mut entries = Vec::with_capacity(cyl.letter_count());
    for l in cyl.letters() {
        let (h0, h1) = (&ends[0].images[l as usize], &ends[1].images[l as usize]);
        let m0: Matrix2 = [
            [h0.clone(), StarPolynomial::zero()],
            [StarPolynomial::zero(), h1.clone()],
        ];
        let m1 = conjugate(OMEGA_1, &m0);
        let decision = all_equal([
            rs.decide_equal(&m0[0][0], h0),
            rs.decide_equal(&m1[0][0], h1),
            rs.decide_equal(&m0[0][1], &StarPolynomial::zero()),
            rs.decide_equal(&m0[1][0], &StarPolynomial::zero()),
            rs.decide_equal(&m1[0][1], &StarPolynomial::zero()),
            rs.decide_equal(&m1[1][0], &StarPolynomial::zero()),
        ]);
        let render = |m: &Matrix2| m.clone().map(|row| row.map(|p| base.render(&p)));
        entries.push(EtaEntry {
            generator: cyl.label(l),
            t0: render(&m0),
            t1: render(&m1),
            decision,
        });
    }
    let gamma = induced_hom_with(&d.gamma, inputs.cylinder, inputs.target)?;
    let mut composites = [None, None];
    for (i, slot) in composites.iter_mut().enumerate() {
        let lhs = crate::functor::compose_genmaps(&gamma, &ends[i])?;
        let rhs = induced_hom_with(d.endpoint(i), inputs.base, inputs.target)?;
        *slot = lhs.first_difference(&rhs, rs);
    }
    Ok(EtaCertificate {
        rotation: "ω_t = [[cos(πt/2), sin(πt/2)], [-sin(πt/2), cos(πt/2)]]; only t = 0 (identity) \
                   and t = 1 ([[0, 1], [-1, 0]]) are evaluated"
            .into(),
        corner: "the corner embedding a ↦ diag(a, 0) is inverted formally by reading the (1,1) \
                 entry once the off-diagonal entries normalise to 0"
            .into(),
        entries,
        composites,
    })
}

/// [`eta_endpoints_with`], computing the pipelines and compiling the base
/// presentation with the given completion bound.
pub fn eta_endpoints(d: &HomotopyDiagram, bound: usize) -> Result<EtaCertificate, SsetError> {
    let base = pipeline(d.cylinder.base(), EdgeMode::AllPairs)?;
    let cyl = pipeline(d.cylinder.set(), EdgeMode::AllPairs)?;
    let target = pipeline(d.f1.target(), EdgeMode::AllPairs)?;
    let rewrite = crate::rewrite::compile(&base.presentation(), bound);
    eta_endpoints_with(
        d,
        &EtaInputs {
            base: &base,
            cylinder: &cyl,
            target: &target,
            rewrite: &rewrite,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::Simplex;

    #[test]
    fn cylinder_on_point_is_interval() {
        let pt = Arc::new(standard_simplex(0));
        let c = cylinder(&pt);
        assert_eq!(c.set().counts_by_dim(), vec![2, 1]);
        assert_ne!(c.d0.image(NdId(0)), c.d1.image(NdId(0)));
        let d1 = Arc::new(standard_simplex(1));
        let c = cylinder(&d1);
        assert_eq!(c.set().len(), 11);
        for end in [&c.d0, &c.d1] {
            assert_eq!(end.max_nd_preimage(), 1);
            assert!(end.images().iter().all(|s| !s.is_degenerate()));
        }
    }

    #[test]
    fn constant_homotopy_is_valid() {
        let pt = Arc::new(standard_simplex(0));
        let d = HomotopyDiagram::constant(&SimplicialMap::identity(pt));
        let v = verify_homotopy(&d, true).unwrap();
        assert!(v.valid);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn perturbed_homotopy_names_the_simplex() {
        let pt = Arc::new(standard_simplex(0));
        let d1 = Arc::new(standard_simplex(1));
        let f = SimplicialMap::between_standard(pt.clone(), d1.clone(), &[0]).unwrap();
        let mut d = HomotopyDiagram::constant(&f);
        // send the end at vertex 1 to the other vertex, and the edge across
        let cyl = d.cylinder.set().clone();
        let end = d.cylinder.d0.image(NdId(0)).base;
        let images = cyl
            .ids()
            .map(|id| match cyl.dim_of(id) {
                0 if id == end => Simplex::nondegenerate(NdId(1)),
                0 => Simplex::nondegenerate(NdId(0)),
                _ => Simplex::nondegenerate(NdId(2)),
            })
            .collect();
        d.gamma = SimplicialMap::checked(cyl, d1, images).unwrap();
        let v = verify_homotopy(&d, false).unwrap();
        assert!(!v.valid);
        assert_eq!(v.witness, Some((0, pt.name(NdId(0)).to_string())));
    }

    #[test]
    fn rotation_swaps_the_diagonal() {
        let a = StarPolynomial::letter(0);
        let b = StarPolynomial::letter(1);
        let m = [
            [a.clone(), StarPolynomial::zero()],
            [StarPolynomial::zero(), b.clone()],
        ];
        let r = conjugate(OMEGA_1, &m);
        assert_eq!(
            r,
            [[b, StarPolynomial::zero()], [StarPolynomial::zero(), a]]
        );
    }

    #[test]
    fn eta_on_interval() {
        let d1 = Arc::new(standard_simplex(1));
        let d = HomotopyDiagram::constant(&SimplicialMap::identity(d1));
        let cert = eta_endpoints(&d, 6).unwrap();
        assert!(cert.holds(), "{:?}", cert.composites);
        assert!(!cert.entries.is_empty());
    }
}
