//! Finite simplicial sets.
//!
//! A [`FiniteSimplicialSet`] stores only its nondegenerate simplices together
//! with the faces of each of them. Every other simplex is a pair
//! `(base, degeneracy word)` in Eilenberg–Zilber normal form and is generated
//! on demand. All simplicial operators are evaluated by factoring the
//! corresponding monotone map into a surjection followed by an injection, so
//! results always come back in normal form.

mod json;
mod map;
mod ops;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SsetError;

pub(crate) use json::{check_schema, map_from_images, to_pretty};
pub use json::{MapDocument, SimplexRef, SsetDocument, SMAP_SCHEMA, SSET_SCHEMA};
pub use map::{MapReport, SimplicialMap};
pub use ops::{disjoint_union, product, DisjointUnion, Product};

/// Index of a nondegenerate simplex inside its [`FiniteSimplicialSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NdId(pub u32);

impl NdId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A nondegenerate simplex: opaque identifier plus dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NdSimplex {
    pub id: String,
    pub dim: usize,
}

/// Degeneracy indices `i_1 > i_2 > ... > i_k`, read as `s_{i_1} ... s_{i_k}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegeneracyWord(Vec<u32>);

impl DegeneracyWord {
    pub fn new(indices: Vec<u32>) -> Result<Self, SsetError> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(SsetError::DegeneracyOrder(indices));
        }
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The codegeneracy `[n + k] -> [n]` this word encodes, as a value table.
    pub(crate) fn to_surjection(&self, base_dim: usize) -> Vec<u32> {
        let total = base_dim + self.0.len();
        let mut eta = Vec::with_capacity(total + 1);
        eta.push(0u32);
        for j in 0..total {
            let step = if self.0.contains(&(j as u32)) { 0 } else { 1 };
            eta.push(eta[j] + step);
        }
        eta
    }

    /// Inverse of [`Self::to_surjection`]: the positions where the map repeats.
    pub(crate) fn from_surjection(eta: &[u32]) -> Self {
        let mut idx: Vec<u32> = eta
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(j, _)| j as u32)
            .collect();
        idx.reverse();
        Self(idx)
    }
}

impl fmt::Display for DegeneracyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

/// A simplex in Eilenberg–Zilber normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub base: NdId,
    pub deg: DegeneracyWord,
}

impl Simplex {
    pub fn nondegenerate(base: NdId) -> Self {
        Self {
            base,
            deg: DegeneracyWord::empty(),
        }
    }

    pub fn new(base: NdId, deg: DegeneracyWord) -> Self {
        Self { base, deg }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.deg.is_empty()
    }

    /// The nondegenerate simplex this one is a degeneracy of.
    pub fn chi(&self) -> NdId {
        self.base
    }
}

/// A face `d_i` or degeneracy `s_i` operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Face(u32),
    Degeneracy(u32),
}

/// A simplicial set with finitely many nondegenerate simplices.
#[derive(Clone, Debug)]
pub struct FiniteSimplicialSet {
    simplices: Vec<NdSimplex>,
    faces: Vec<Vec<Simplex>>,
    by_id: HashMap<String, NdId>,
}

impl PartialEq for FiniteSimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices && self.faces == other.faces
    }
}

impl Eq for FiniteSimplicialSet {}

/// A violated simplicial identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Highest dimension covered by the sweep over generated simplices.
    pub checked_up_to: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteSimplicialSet {
    /// Builds a set from its nondegenerate simplices and their face tables.
    ///
    /// `faces[k]` lists `d_0, ..., d_n` of simplex `k` (empty for vertices).
    /// Structural problems are rejected here; simplicial identities are
    /// checked separately by [`Self::validate`].
    pub fn new(simplices: Vec<NdSimplex>, faces: Vec<Vec<Simplex>>) -> Result<Self, SsetError> {
        if faces.len() != simplices.len() {
            return Err(SsetError::Invalid(format!(
                "{} simplices but {} face lists",
                simplices.len(),
                faces.len()
            )));
        }
        let mut by_id = HashMap::with_capacity(simplices.len());
        for (k, s) in simplices.iter().enumerate() {
            if by_id.insert(s.id.clone(), NdId(k as u32)).is_some() {
                return Err(SsetError::DuplicateId(s.id.clone()));
            }
        }
        let set = Self {
            simplices,
            faces,
            by_id,
        };
        for (k, s) in set.simplices.iter().enumerate() {
            let expected = if s.dim == 0 { 0 } else { s.dim + 1 };
            let fs = &set.faces[k];
            if fs.len() != expected {
                return Err(SsetError::FaceCount {
                    id: s.id.clone(),
                    dim: s.dim,
                    expected,
                    found: fs.len(),
                });
            }
            for (i, f) in fs.iter().enumerate() {
                set.check_simplex(f)?;
                let d = set.dim(f);
                if d + 1 != s.dim {
                    return Err(SsetError::FaceDimension {
                        id: s.id.clone(),
                        index: i,
                        expected: s.dim - 1,
                        found: d,
                    });
                }
            }
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        Self {
            simplices: Vec::new(),
            faces: Vec::new(),
            by_id: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[NdSimplex] {
        &self.simplices
    }

    pub fn ids(&self) -> impl Iterator<Item = NdId> + '_ {
        (0..self.simplices.len() as u32).map(NdId)
    }

    pub fn simplex(&self, id: NdId) -> &NdSimplex {
        &self.simplices[id.index()]
    }

    pub fn name(&self, id: NdId) -> &str {
        &self.simplices[id.index()].id
    }

    pub fn lookup(&self, id: &str) -> Option<NdId> {
        self.by_id.get(id).copied()
    }

    pub fn dim_of(&self, id: NdId) -> usize {
        self.simplices[id.index()].dim
    }

    pub fn dim(&self, s: &Simplex) -> usize {
        self.dim_of(s.base) + s.deg.len()
    }

    /// Dimension of the set, `None` when empty.
    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.dim).max()
    }

    /// Number of nondegenerate simplices per dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            counts[s.dim] += 1;
        }
        counts
    }

    pub fn faces_of(&self, id: NdId) -> &[Simplex] {
        &self.faces[id.index()]
    }

    pub fn check_simplex(&self, s: &Simplex) -> Result<(), SsetError> {
        if s.base.index() >= self.simplices.len() {
            return Err(SsetError::UnknownSimplex(format!("#{}", s.base.0)));
        }
        let total = self.dim(s);
        if let Some(&top) = s.deg.indices().first() {
            if top as usize >= total {
                return Err(SsetError::DimensionMismatch {
                    index: top,
                    dim: total - 1,
                });
            }
        }
        Ok(())
    }

    /// Human-readable rendering, e.g. `s1s0(v)`.
    pub fn render(&self, s: &Simplex) -> String {
        if s.deg.is_empty() {
            self.name(s.base).to_string()
        } else {
            format!("{}({})", s.deg, self.name(s.base))
        }
    }

    /// Applies the simplicial operator induced by a monotone map
    /// `theta: [p] -> [dim s]`, given as its value table.
    pub fn apply_monotone(&self, s: &Simplex, theta: &[u32]) -> Result<Simplex, SsetError> {
        self.check_simplex(s)?;
        let m = self.dim(s) as u32;
        if theta.is_empty() {
            return Err(SsetError::InvalidMonotone("empty domain".into()));
        }
        if theta.windows(2).any(|w| w[0] > w[1]) || theta.iter().any(|&v| v > m) {
            return Err(SsetError::InvalidMonotone(format!(
                "{theta:?} is not a monotone map into [{m}]"
            )));
        }
        Ok(self.apply_unchecked(s, theta))
    }

    pub(crate) fn apply_unchecked(&self, s: &Simplex, theta: &[u32]) -> Simplex {
        let eta = s.deg.to_surjection(self.dim_of(s.base));
        let rho: Vec<u32> = theta.iter().map(|&j| eta[j as usize]).collect();
        let mut image = rho.clone();
        image.dedup();
        let face = self.face_by_injection(s.base, &image);
        let face_eta = face.deg.to_surjection(self.dim_of(face.base));
        // rho = image ∘ eps with eps: [p] -> [q] collapsing repeats
        let mut total = Vec::with_capacity(rho.len());
        let mut k = 0usize;
        for (j, v) in rho.iter().enumerate() {
            if j > 0 && *v != rho[j - 1] {
                k += 1;
            }
            total.push(face_eta[k]);
        }
        Simplex::new(face.base, DegeneracyWord::from_surjection(&total))
    }

    /// The face of a nondegenerate simplex spanned by the vertices `delta`
    /// (a strictly increasing list).
    fn face_by_injection(&self, base: NdId, delta: &[u32]) -> Simplex {
        let n = self.dim_of(base) as u32;
        if delta.len() as u32 == n + 1 {
            return Simplex::nondegenerate(base);
        }
        let missing = (0..=n).rev().find(|i| !delta.contains(i)).unwrap();
        let face = &self.faces[base.index()][missing as usize];
        let reduced: Vec<u32> = delta
            .iter()
            .map(|&v| if v > missing { v - 1 } else { v })
            .collect();
        self.apply_unchecked(face, &reduced)
    }

    pub fn face(&self, s: &Simplex, i: u32) -> Result<Simplex, SsetError> {
        self.check_simplex(s)?;
        let m = self.dim(s);
        if m == 0 || i as usize > m {
            return Err(SsetError::FaceIndex { index: i, dim: m });
        }
        let theta: Vec<u32> = (0..m as u32)
            .map(|j| if j < i { j } else { j + 1 })
            .collect();
        Ok(self.apply_unchecked(s, &theta))
    }

    pub fn degeneracy(&self, s: &Simplex, i: u32) -> Result<Simplex, SsetError> {
        self.check_simplex(s)?;
        let m = self.dim(s);
        if i as usize > m {
            return Err(SsetError::DimensionMismatch { index: i, dim: m });
        }
        let theta: Vec<u32> = (0..=m as u32 + 1)
            .map(|j| if j <= i { j } else { j - 1 })
            .collect();
        Ok(self.apply_unchecked(s, &theta))
    }

    /// Applies `ops` (written in the usual order, rightmost first) to a
    /// nondegenerate simplex and returns the normal form of the result.
    pub fn normalize(&self, base: NdId, ops: &[Operator]) -> Result<Simplex, SsetError> {
        if base.index() >= self.len() {
            return Err(SsetError::UnknownSimplex(format!("#{}", base.0)));
        }
        let mut s = Simplex::nondegenerate(base);
        for op in ops.iter().rev() {
            s = match *op {
                Operator::Face(i) => {
                    self.face(&s, i).map_err(|_| SsetError::DimensionMismatch {
                        index: i,
                        dim: self.dim(&s),
                    })?
                }
                Operator::Degeneracy(i) => self.degeneracy(&s, i)?,
            };
        }
        Ok(s)
    }

    /// Every simplex of dimension `m`, nondegenerate or not.
    pub fn simplices_of_dim(&self, m: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for id in self.ids() {
            let n = self.dim_of(id);
            if n > m {
                continue;
            }
            for repeats in subsets_of_size(m as u32, m - n) {
                let mut idx = repeats;
                idx.reverse();
                out.push(Simplex::new(id, DegeneracyWord(idx)));
            }
        }
        out
    }

    /// Checks the face identities `d_i d_j = d_{j-1} d_i` (i < j) on the
    /// stored face tables; when those hold, additionally sweeps every
    /// generated simplex up to dimension `max_dim + 2` through all face and
    /// degeneracy identities.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for id in self.ids() {
            let n = self.dim_of(id);
            if n < 2 {
                continue;
            }
            let s = Simplex::nondegenerate(id);
            for j in 1..=n as u32 {
                for i in 0..j {
                    let lhs = self.face(&self.face(&s, j).unwrap(), i).unwrap();
                    let rhs = self.face(&self.face(&s, i).unwrap(), j - 1).unwrap();
                    if lhs != rhs {
                        report.violations.push(Violation {
                            identity: format!("d{i} d{j} = d{} d{i}", j - 1),
                            witness: self.name(id).to_string(),
                            lhs: self.render(&lhs),
                            rhs: self.render(&rhs),
                        });
                    }
                }
            }
        }
        let top = self.max_dim().map_or(0, |d| d + 2);
        report.checked_up_to = top;
        if !report.violations.is_empty() {
            return report;
        }
        for m in 0..=top {
            for x in self.simplices_of_dim(m) {
                self.sweep_identities(&x, m, &mut report);
            }
        }
        report
    }

    fn sweep_identities(&self, x: &Simplex, m: usize, report: &mut ValidationReport) {
        let mut fail = |identity: String, lhs: &Simplex, rhs: &Simplex| {
            report.violations.push(Violation {
                identity,
                witness: self.render(x),
                lhs: self.render(lhs),
                rhs: self.render(rhs),
            })
        };
        let mu = m as u32;
        if m >= 2 {
            for j in 1..=mu {
                for i in 0..j {
                    let lhs = self.face(&self.face(x, j).unwrap(), i).unwrap();
                    let rhs = self.face(&self.face(x, i).unwrap(), j - 1).unwrap();
                    if lhs != rhs {
                        fail(format!("d{i} d{j} = d{} d{i}", j - 1), &lhs, &rhs);
                    }
                }
            }
        }
        for j in 0..=mu {
            let sj = self.degeneracy(x, j).unwrap();
            for i in 0..=mu + 1 {
                let lhs = self.face(&sj, i).unwrap();
                let rhs = if i < j {
                    self.degeneracy(&self.face(x, i).unwrap(), j - 1).unwrap()
                } else if i == j || i == j + 1 {
                    x.clone()
                } else {
                    self.degeneracy(&self.face(x, i - 1).unwrap(), j).unwrap()
                };
                if lhs != rhs {
                    fail(format!("d{i} s{j}"), &lhs, &rhs);
                }
            }
            for i in 0..=j {
                let lhs = self.degeneracy(&sj, i).unwrap();
                let rhs = self
                    .degeneracy(&self.degeneracy(x, i).unwrap(), j + 1)
                    .unwrap();
                if lhs != rhs {
                    fail(format!("s{i} s{j} = s{} s{i}", j + 1), &lhs, &rhs);
                }
            }
        }
    }
}

/// All `k`-element subsets of `{0, ..., n-1}` in increasing order.
pub(crate) fn subsets_of_size(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if (n - v) as usize >= k - cur.len() {
                cur.push(v);
                go(v + 1, n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn vertex_list_id(vertices: &[u32], n: usize) -> String {
    let parts: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
    if n < 10 {
        parts.concat()
    } else {
        parts.join(".")
    }
}

/// The standard simplex `Δⁿ`: one nondegenerate simplex per nonempty subset
/// of `[n]`, named by its vertex list and ordered by dimension, then
/// lexicographically.
pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
    let mut subsets: Vec<Vec<u32>> = Vec::new();
    for k in 1..=n + 1 {
        subsets.extend(subsets_of_size(n as u32 + 1, k));
    }
    // subsets_of_size already yields lexicographic order within a size
    let index: HashMap<Vec<u32>, u32> = subsets
        .iter()
        .enumerate()
        .map(|(k, s)| (s.clone(), k as u32))
        .collect();
    let simplices = subsets
        .iter()
        .map(|s| NdSimplex {
            id: vertex_list_id(s, n),
            dim: s.len() - 1,
        })
        .collect();
    let faces = subsets
        .iter()
        .map(|s| {
            if s.len() == 1 {
                return Vec::new();
            }
            (0..s.len())
                .map(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    Simplex::nondegenerate(NdId(index[&f]))
                })
                .collect()
        })
        .collect();
    FiniteSimplicialSet::new(simplices, faces).expect("standard simplex is well formed")
}

/// The simplicial circle with one vertex `v` and one edge `c` whose two faces
/// are both `v`.
pub fn minimal_circle() -> FiniteSimplicialSet {
    FiniteSimplicialSet::new(
        vec![
            NdSimplex {
                id: "v".into(),
                dim: 0,
            },
            NdSimplex {
                id: "c".into(),
                dim: 1,
            },
        ],
        vec![
            vec![],
            vec![
                Simplex::nondegenerate(NdId(0)),
                Simplex::nondegenerate(NdId(0)),
            ],
        ],
    )
    .expect("circle is well formed")
}
