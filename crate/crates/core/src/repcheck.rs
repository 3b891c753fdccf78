//! Finite-dimensional matrix representations of presentations.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::poly::{GeneratorSet, LetterKind, StarPolynomial};
use crate::presentation::Presentation;
use crate::sset::{check_schema, to_pretty};

pub const REP_SCHEMA: &str = "rep.v1";
pub const DEFAULT_TOL: f64 = 1e-9;
pub const SEARCH_TOL: f64 = 1e-6;

pub type Mat = DMatrix<Complex64>;

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("representation is over other generators")]
    Generators,
    #[error("image of `{0}` is not {1}x{1}")]
    Shape(String, usize),
    #[error("max relation residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },
}

/// One matrix per letter; starred letters carry the adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    pub generators: Arc<GeneratorSet>,
    pub dim: usize,
    pub images: Vec<Mat>,
}

impl MatrixRep {
    /// Fills in the starred letters from the edge images.
    pub fn from_unstarred(gens: Arc<GeneratorSet>, dim: usize, mut base: Vec<Mat>) -> Self {
        for k in 0..gens.edge_count() {
            base.push(base[gens.vertex_count() + k].adjoint());
        }
        Self {
            generators: gens,
            dim,
            images: base,
        }
    }

    pub fn image(&self, l: u32) -> &Mat {
        &self.images[l as usize]
    }

    pub fn evaluate(&self, p: &StarPolynomial) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (w, c) in p.terms() {
            let mut m = Mat::identity(self.dim, self.dim);
            for &l in &w.0 {
                m *= &self.images[l as usize];
            }
            out += m * Complex64::new(c as f64, 0.0);
        }
        out
    }

    /// Largest distance between an image and the adjoint of its star.
    pub fn star_defect(&self) -> f64 {
        let g = &self.generators;
        g.arrow_letters()
            .map(|l| operator_norm(&(self.image(g.star(l)) - self.image(l).adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> RepDocument {
        let g = &self.generators;
        let images = g
            .letters()
            .filter(|&l| !matches!(g.kind(l), LetterKind::Star(_)))
            .map(|l| {
                let m = self.image(l);
                let entries = (0..self.dim)
                    .flat_map(|i| (0..self.dim).map(move |j| [m[(i, j)].re, m[(i, j)].im]))
                    .collect();
                (g.label(l), entries)
            })
            .collect();
        RepDocument {
            schema: REP_SCHEMA.into(),
            dim: self.dim,
            images,
        }
    }

    pub fn from_document(doc: &RepDocument, gens: Arc<GeneratorSet>) -> Result<Self, FormatError> {
        check_schema(&doc.schema, REP_SCHEMA)?;
        let n = doc.dim;
        let unstarred = gens.vertex_count() + gens.edge_count();
        if doc.images.len() != unstarred {
            return Err(FormatError::Invalid(format!(
                "expected {unstarred} images, found {}",
                doc.images.len()
            )));
        }
        let mut base = Vec::with_capacity(unstarred);
        for l in 0..unstarred as u32 {
            let label = gens.label(l);
            let entries = doc
                .images
                .get(&label)
                .ok_or_else(|| FormatError::UnknownGenerator(label.clone()))?;
            if entries.len() != n * n {
                return Err(FormatError::Invalid(RepError::Shape(label, n).to_string()));
            }
            base.push(Mat::from_row_iterator(
                n,
                n,
                entries.iter().map(|&[re, im]| Complex64::new(re, im)),
            ));
        }
        Ok(Self::from_unstarred(gens, n, base))
    }

    pub fn to_json(&self) -> String {
        to_pretty(&self.to_document())
    }

    pub fn from_json(text: &str, gens: Arc<GeneratorSet>) -> Result<Self, FormatError> {
        Self::from_document(&serde_json::from_str(text)?, gens)
    }
}

/// Row-major `[re, im]` entries per unstarred generator label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDocument {
    pub schema: String,
    pub dim: usize,
    pub images: BTreeMap<String, Vec<[f64; 2]>>,
}

pub fn operator_norm(m: &Mat) -> f64 {
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    m.clone().singular_values().max()
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Vertex `v` to `E_vv`, edge `x` to `E_{s(x) t(x)}`.
pub fn matrix_unit_rep(p: &Presentation) -> MatrixRep {
    let g = p.generators.clone();
    let n = g.vertex_count();
    let mut base: Vec<Mat> = (0..n).map(|v| unit(n, v, v)).collect();
    base.extend(g.edges().iter().map(|&(s, t)| unit(n, s, t)));
    MatrixRep::from_unstarred(g, n, base)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Operator norm of `ρ(lhs) - ρ(rhs)` per relation instance.
    pub residuals: Vec<(String, f64)>,
    pub max: f64,
}

pub fn relation_residual(rep: &MatrixRep, p: &Presentation) -> Result<ResidualReport, RepError> {
    if *rep.generators != *p.generators {
        return Err(RepError::Generators);
    }
    let g = &p.generators;
    let residuals: Vec<(String, f64)> = p
        .relations
        .iter()
        .map(|r| {
            let name = format!("{} = {}", g.render(&r.lhs), g.render(&r.rhs));
            (name, operator_norm(&rep.evaluate(&r.difference())))
        })
        .collect();
    let max = residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(ResidualReport { residuals, max })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexNormReport {
    pub tol: f64,
    pub norms: Vec<(String, f64)>,
    /// Vertices with norm above `1 + 10·tol`.
    pub over_bound: Vec<String>,
    /// Edge-incident vertices with `‖ρ(v)² - ρ(v)‖ > tol`.
    pub non_projections: Vec<String>,
    /// Distinct edge-incident vertices with `‖ρ(v)ρ(w)‖ > tol`.
    pub non_orthogonal: Vec<(String, String)>,
}

impl VertexNormReport {
    pub fn passes(&self) -> bool {
        self.over_bound.is_empty()
            && self.non_projections.is_empty()
            && self.non_orthogonal.is_empty()
    }
}

/// Refuses representations whose relation residual exceeds `tol`.
pub fn vertex_norm_report(
    rep: &MatrixRep,
    p: &Presentation,
    tol: f64,
) -> Result<VertexNormReport, RepError> {
    let residual = relation_residual(rep, p)?.max;
    if residual > tol {
        return Err(RepError::Residual { residual, tol });
    }
    Ok(vertex_norms_unchecked(rep, tol))
}

pub fn vertex_norms_unchecked(rep: &MatrixRep, tol: f64) -> VertexNormReport {
    let g = &rep.generators;
    let norms: Vec<(String, f64)> = g
        .vertex_letters()
        .map(|v| (g.label(v), operator_norm(rep.image(v))))
        .collect();
    let over_bound = norms
        .iter()
        .filter(|(_, n)| *n > 1.0 + 10.0 * tol)
        .map(|(l, _)| l.clone())
        .collect();
    let mut incident = vec![false; g.vertex_count()];
    for &(s, t) in g.edges() {
        incident[s] = true;
        incident[t] = true;
    }
    let incident: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| incident[v as usize])
        .collect();
    let non_projections = incident
        .iter()
        .filter(|&&v| {
            let m = rep.image(v);
            operator_norm(&(m * m - m)) > tol
        })
        .map(|&v| g.label(v))
        .collect();
    let mut non_orthogonal = Vec::new();
    for (i, &v) in incident.iter().enumerate() {
        for &w in &incident[i + 1..] {
            if operator_norm(&(rep.image(v) * rep.image(w))) > tol {
                non_orthogonal.push((g.label(v), g.label(w)));
            }
        }
    }
    VertexNormReport {
        tol,
        norms,
        over_bound,
        non_projections,
        non_orthogonal,
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub rep: MatrixRep,
    /// Max operator-norm relation residual of `rep`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Sum of squared Frobenius residuals and its gradient with respect to the
/// unstarred images (vertex gradients projected to Hermitian matrices).
fn loss_and_gradient(rep: &MatrixRep, diffs: &[StarPolynomial]) -> (f64, Vec<Mat>) {
    let g = &rep.generators;
    let n = rep.dim;
    let mut grads = vec![Mat::zeros(n, n); g.letter_count()];
    let mut loss = 0.0;
    for d in diffs {
        let r = rep.evaluate(d);
        loss += r.norm_squared();
        for (w, c) in d.terms() {
            let c = Complex64::new(c as f64, 0.0);
            // prefix[k] = M_0 ⋯ M_{k-1}, suffix[k] = M_{k+1} ⋯ M_{n-1}
            let mats: Vec<&Mat> = w.0.iter().map(|&l| rep.image(l)).collect();
            let mut prefix = vec![Mat::identity(n, n)];
            for m in &mats {
                let next = prefix.last().unwrap() * *m;
                prefix.push(next);
            }
            let mut suffix = vec![Mat::identity(n, n); mats.len()];
            for k in (0..mats.len().saturating_sub(1)).rev() {
                suffix[k] = mats[k + 1] * &suffix[k + 1];
            }
            for (k, &l) in w.0.iter().enumerate() {
                let (p, s) = (&prefix[k], &suffix[k]);
                match g.kind(l) {
                    LetterKind::Star(e) => {
                        let x = g.vertex_count() + e;
                        grads[x] += (s * r.adjoint() * p) * c;
                    }
                    _ => grads[l as usize] += (p.adjoint() * &r * s.adjoint()) * c,
                }
            }
        }
    }
    grads.truncate(g.vertex_count() + g.edge_count());
    for grad in grads.iter_mut().take(g.vertex_count()) {
        *grad = (&*grad + grad.adjoint()) * Complex64::new(0.5, 0.0);
    }
    (loss, grads)
}

fn step(rep: &MatrixRep, grads: &[Mat], eta: f64) -> MatrixRep {
    let g = rep.generators.clone();
    let base = grads
        .iter()
        .enumerate()
        .map(|(k, d)| rep.image(k as u32) - d * Complex64::new(eta, 0.0))
        .collect();
    MatrixRep::from_unstarred(g, rep.dim, base)
}

/// Gradient descent with backtracking line search on the squared
/// Frobenius residual, from a seeded random start with Hermitian vertex
/// images. Converged means max residual at most [`SEARCH_TOL`].
pub fn search_representation(
    p: &Presentation,
    dim: usize,
    iters: usize,
    seed: u64,
) -> SearchResult {
    let g = p.generators.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = |n: usize| {
        Mat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }) * Complex64::new(0.5, 0.0)
    };
    let mut base: Vec<Mat> = Vec::new();
    for _ in 0..g.vertex_count() {
        let a = random(dim);
        base.push((&a + a.adjoint()) * Complex64::new(0.5, 0.0));
    }
    for _ in 0..g.edge_count() {
        base.push(random(dim));
    }
    let mut rep = MatrixRep::from_unstarred(g, dim, base);
    let diffs: Vec<StarPolynomial> = p.relations.iter().map(|r| r.difference()).collect();
    let (mut loss, mut grads) = loss_and_gradient(&rep, &diffs);
    let mut eta = 0.1;
    let mut iterations = 0;
    let target = SEARCH_TOL * SEARCH_TOL * 1e-4;
    while iterations < iters && loss > target {
        iterations += 1;
        let slope: f64 = grads.iter().map(|d| d.norm_squared()).sum();
        if slope == 0.0 {
            break;
        }
        let mut accepted = None;
        let mut trial_eta = eta;
        for _ in 0..60 {
            let trial = step(&rep, &grads, trial_eta);
            let (l, gr) = loss_and_gradient(&trial, &diffs);
            if l <= loss - 1e-4 * trial_eta * slope {
                accepted = Some((trial, l, gr));
                break;
            }
            trial_eta *= 0.5;
        }
        let Some((trial, l, gr)) = accepted else {
            break;
        };
        rep = trial;
        loss = l;
        grads = gr;
        eta = (trial_eta * 2.0).min(1.0);
    }
    let residual = relation_residual(&rep, p)
        .map(|r| r.max)
        .unwrap_or(f64::INFINITY);
    SearchResult {
        rep,
        residual,
        iterations,
        converged: residual <= SEARCH_TOL,
    }
}
