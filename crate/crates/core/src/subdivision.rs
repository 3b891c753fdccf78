//! Barycentric subdivision.
//!
//! `Sd(X)` is the colimit, over the simplices `σ: Δⁿ → X`, of the nerves of
//! the posets of nonempty subsets of `[n]`. An element of the colimit is
//! represented by a pair `(τ, chain)` with `τ` nondegenerate; a chain is a
//! weakly increasing list of subsets encoded as bitmasks. The identifications
//! `(d_i σ, c) ~ (σ, δⁱ_* c)` are closed with a union-find.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::SsetError;
use crate::sset::{DegeneracyWord, FiniteSimplicialSet, NdId, NdSimplex, Simplex, SimplicialMap};

/// A chain of nonempty subsets of `[n]`, each subset a bitmask.
pub type Chain = Vec<u32>;

/// `Sd(X)` plus the bookkeeping needed to map into it.
#[derive(Clone, Debug)]
pub struct SubdivisionResult {
    pub sd: Arc<FiniteSimplicialSet>,
    source: Arc<FiniteSimplicialSet>,
    index: HashMap<(NdId, Chain), usize>,
    node_nf: Vec<Option<Simplex>>,
    provenance: Vec<Vec<(NdId, Chain)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub simplex: String,
    pub chain: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceDocument {
    pub schema: String,
    pub entries: BTreeMap<String, Vec<ChainEntry>>,
}

fn is_strict(c: &[u32]) -> bool {
    c.windows(2).all(|w| w[0] != w[1])
}

fn vertices(mask: u32) -> Vec<u32> {
    (0..32).filter(|j| mask & (1 << j) != 0).collect()
}

/// Image of a subset under a map given by its value table.
fn push_mask(mask: u32, table: &[u32]) -> u32 {
    vertices(mask)
        .into_iter()
        .fold(0, |acc, j| acc | (1 << table[j as usize]))
}

fn full_mask(n: usize) -> u32 {
    (1u32 << (n + 1)) - 1
}

/// All strict chains of nonempty subsets of `[n]`, of every length.
pub fn strict_chains(n: usize) -> Vec<Chain> {
    fn extend(cur: &mut Chain, full: u32, out: &mut Vec<Chain>) {
        out.push(cur.clone());
        let last = *cur.last().unwrap();
        let free = full & !last;
        let mut sub = free;
        while sub != 0 {
            cur.push(last | sub);
            extend(cur, full, out);
            cur.pop();
            sub = (sub - 1) & free;
        }
    }
    let full = full_mask(n);
    let mut out = Vec::new();
    for s in 1..=full {
        extend(&mut vec![s], full, &mut out);
    }
    out
}

/// Drops repeated subsets; returns the strict chain and the surjection from
/// positions of `c` onto positions of the result.
fn dedup_chain(c: &[u32]) -> (Chain, Vec<u32>) {
    let mut strict: Chain = Vec::with_capacity(c.len());
    let mut eps = Vec::with_capacity(c.len());
    for &s in c {
        if strict.last() != Some(&s) {
            strict.push(s);
        }
        eps.push(strict.len() as u32 - 1);
    }
    (strict, eps)
}

/// `s ∘ eps` for `s` in normal form and `eps` a surjection onto `[dim s]`.
fn compose(dims: &[usize], s: &Simplex, eps: &[u32]) -> Simplex {
    let eta = s.deg.to_surjection(dims[s.base.index()]);
    let total: Vec<u32> = eps.iter().map(|&j| eta[j as usize]).collect();
    Simplex::new(s.base, DegeneracyWord::from_surjection(&total))
}

impl SubdivisionResult {
    pub fn source(&self) -> &Arc<FiniteSimplicialSet> {
        &self.source
    }

    /// The simplex of `Sd(X)` represented by `(base, chain)`, where `chain`
    /// is any weakly increasing chain of nonempty subsets of `[dim base]`.
    pub fn lookup(&self, base: NdId, chain: &[u32]) -> Option<Simplex> {
        let (strict, eps) = dedup_chain(chain);
        let node = *self.index.get(&(base, strict))?;
        let nf = self.node_nf[node].as_ref()?;
        let dims: Vec<usize> = self.sd.simplices().iter().map(|s| s.dim).collect();
        Some(compose(&dims, nf, &eps))
    }

    /// Strict `(simplex, chain)` pairs of `X` identified with a nondegenerate
    /// simplex of `Sd(X)`.
    pub fn provenance(&self, id: NdId) -> &[(NdId, Chain)] {
        &self.provenance[id.index()]
    }

    pub fn provenance_document(&self) -> ProvenanceDocument {
        let entries = self
            .sd
            .ids()
            .map(|id| {
                let members = self.provenance[id.index()]
                    .iter()
                    .map(|(tau, c)| ChainEntry {
                        simplex: self.source.name(*tau).to_string(),
                        chain: c.iter().map(|&m| vertices(m)).collect(),
                    })
                    .collect();
                (self.sd.name(id).to_string(), members)
            })
            .collect();
        ProvenanceDocument {
            schema: "provenance.v1".into(),
            entries,
        }
    }
}

struct Interner {
    nodes: Vec<(NdId, Chain)>,
    index: HashMap<(NdId, Chain), usize>,
}

impl Interner {
    fn get(&mut self, key: (NdId, Chain)) -> usize {
        if let Some(&k) = self.index.get(&key) {
            return k;
        }
        let k = self.nodes.len();
        self.nodes.push(key.clone());
        self.index.insert(key, k);
        k
    }
}

/// Computes `Sd(X)`.
///
/// A class is degenerate exactly when it contains a non-strict chain. The
/// nondegenerate simplices are named by the simplices of `X` spanned by the
/// subsets of a representative chain, joined with `<`; for `Δ¹` this gives
/// `0`, `01`, `1`, `0<01`, `1<01`.
pub fn subdivide(x: &Arc<FiniteSimplicialSet>) -> Result<SubdivisionResult, SsetError> {
    let report = x.validate();
    if let Some(v) = report.violations.first() {
        return Err(SsetError::Invalid(format!(
            "`{}` violates {}",
            v.witness, v.identity
        )));
    }
    let max_dim = x.max_dim().unwrap_or(0);
    let chains: Vec<Vec<Chain>> = (0..=max_dim).map(strict_chains).collect();

    let mut interner = Interner {
        nodes: Vec::new(),
        index: HashMap::new(),
    };
    for tau in x.ids() {
        for c in &chains[x.dim_of(tau)] {
            interner.get((tau, c.clone()));
        }
    }
    let mut unions = Vec::new();
    for sigma in x.ids() {
        let n = x.dim_of(sigma);
        if n == 0 {
            continue;
        }
        for i in 0..=n as u32 {
            let f = x.face(&Simplex::nondegenerate(sigma), i)?;
            let eta = f.deg.to_surjection(x.dim_of(f.base));
            let delta: Vec<u32> = (0..n as u32)
                .map(|j| if j < i { j } else { j + 1 })
                .collect();
            for c in &chains[n - 1] {
                let up: Chain = c.iter().map(|&m| push_mask(m, &delta)).collect();
                let down: Chain = c.iter().map(|&m| push_mask(m, &eta)).collect();
                let a = interner.get((sigma, up));
                let b = interner.get((f.base, down));
                unions.push((a, b));
            }
        }
    }
    let Interner { nodes, index } = interner;
    let mut uf = UnionFind::new(nodes.len());
    for (a, b) in unions {
        uf.union(a, b);
    }
    let roots: Vec<usize> = (0..nodes.len()).map(|k| uf.find(k)).collect();

    let mut weak_member: HashMap<usize, usize> = HashMap::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, (_, c)) in nodes.iter().enumerate() {
        if is_strict(c) {
            members.entry(roots[k]).or_default().push(k);
        } else {
            weak_member.entry(roots[k]).or_insert(k);
        }
    }

    let spanned = |tau: NdId, mask: u32| -> String {
        let s = x.apply_unchecked(&Simplex::nondegenerate(tau), &vertices(mask));
        x.name(s.base).to_string()
    };
    // (dim, names, canonical member, root) per nondegenerate class
    type Keyed = (usize, Vec<String>, (NdId, Chain), usize);
    let mut keyed: Vec<Keyed> = Vec::new();
    for (&root, ms) in &members {
        if weak_member.contains_key(&root) {
            continue;
        }
        let by_node = |a: &&usize, b: &&usize| nodes[**a].cmp(&nodes[**b]);
        let canon = ms
            .iter()
            .filter(|&&k| {
                let (tau, c) = &nodes[k];
                *c.last().unwrap() == full_mask(x.dim_of(*tau))
            })
            .min_by(by_node)
            .or_else(|| ms.iter().min_by(by_node))
            .copied()
            .unwrap();
        let (tau, c) = &nodes[canon];
        let names = c.iter().map(|&m| spanned(*tau, m)).collect();
        keyed.push((c.len() - 1, names, (*tau, c.clone()), root));
    }
    keyed.sort();

    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut simplices = Vec::with_capacity(keyed.len());
    let mut class_nf: HashMap<usize, Simplex> = HashMap::new();
    let mut provenance = Vec::with_capacity(keyed.len());
    for (k, (dim, names, _, root)) in keyed.iter().enumerate() {
        let base = names.join("<");
        let count = seen.entry(base.clone()).or_insert(0);
        let id = if *count == 0 {
            base
        } else {
            format!("{base}#{count}")
        };
        *count += 1;
        simplices.push(NdSimplex { id, dim: *dim });
        class_nf.insert(*root, Simplex::nondegenerate(NdId(k as u32)));
        provenance.push(members[root].iter().map(|&m| nodes[m].clone()).collect());
    }
    let sd_dims: Vec<usize> = simplices.iter().map(|s| s.dim).collect();

    // degenerate classes resolve through a weak member, lowest dimension first
    let mut degenerate: Vec<(usize, usize)> = members
        .keys()
        .filter_map(|r| weak_member.get(r).map(|&w| (nodes[w].1.len(), *r)))
        .collect();
    degenerate.sort();
    for (_, root) in degenerate {
        let (rho, w) = &nodes[weak_member[&root]];
        let (strict, eps) = dedup_chain(w);
        let inner = &class_nf[&roots[index[&(*rho, strict)]]];
        let nf = compose(&sd_dims, inner, &eps);
        class_nf.insert(root, nf);
    }
    let node_nf: Vec<Option<Simplex>> = roots.iter().map(|r| class_nf.get(r).cloned()).collect();

    let faces = keyed
        .iter()
        .map(|(dim, _, (tau, c), _)| {
            if *dim == 0 {
                return Vec::new();
            }
            (0..c.len())
                .map(|i| {
                    let mut face = c.clone();
                    face.remove(i);
                    node_nf[index[&(*tau, face)]]
                        .clone()
                        .expect("faces are resolved")
                })
                .collect()
        })
        .collect();
    let sd = Arc::new(FiniteSimplicialSet::new(simplices, faces)?);
    Ok(SubdivisionResult {
        sd,
        source: x.clone(),
        index,
        node_nf,
        provenance,
    })
}

/// `Sd(f)` between already computed subdivisions of its endpoints.
pub fn subdivide_map_with(
    f: &SimplicialMap,
    source: &SubdivisionResult,
    target: &SubdivisionResult,
) -> Result<SimplicialMap, SsetError> {
    if **f.source() != *source.source || **f.target() != *target.source {
        return Err(SsetError::NotComposable);
    }
    let mut images = Vec::with_capacity(source.sd.len());
    for id in source.sd.ids() {
        let (tau, c) = &source.provenance[id.index()][0];
        let img = f.image(*tau);
        let eta = img.deg.to_surjection(f.target().dim_of(img.base));
        let pushed: Chain = c.iter().map(|&m| push_mask(m, &eta)).collect();
        let s = target
            .lookup(img.base, &pushed)
            .ok_or_else(|| SsetError::Invalid("image chain not found".into()))?;
        images.push(s);
    }
    SimplicialMap::checked(source.sd.clone(), target.sd.clone(), images)
}

/// `Sd(f)`, subdividing both endpoints.
pub fn subdivide_map(f: &SimplicialMap) -> Result<SimplicialMap, SsetError> {
    let report = f.validate();
    if let Some((id, i)) = report.violations.first() {
        return Err(SsetError::Invalid(format!("map fails on d{i} of `{id}`")));
    }
    let s = subdivide(f.source())?;
    let t = subdivide(f.target())?;
    subdivide_map_with(f, &s, &t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    /// Per nondegenerate simplex of positive dimension: its id and whether it
    /// passes.
    pub simplices: Vec<(String, bool)>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.simplices.iter().all(|(_, ok)| *ok)
    }
}

/// Last-face criterion: a nondegenerate `n`-simplex `x` passes when the faces
/// of `x` containing its last vertex are nondegenerate, pairwise distinct,
/// and disjoint from the subcomplex generated by `d_n x`. This is the
/// condition that the subcomplex generated by `x` is the pushout of
/// `Δⁿ⁻¹ → Δⁿ` along `d_n x`.
pub fn is_regular(x: &FiniteSimplicialSet) -> RegularityReport {
    let mut out = Vec::new();
    for id in x.ids() {
        let n = x.dim_of(id);
        if n == 0 {
            continue;
        }
        let top = Simplex::nondegenerate(id);
        let mut last_faces = Vec::new();
        for mask in 1..full_mask(n) {
            if mask & (1 << n) != 0 {
                last_faces.push(x.apply_unchecked(&top, &vertices(mask)));
            }
        }
        let dn = x.face(&top, n as u32).unwrap();
        let mut generated = std::collections::HashSet::new();
        for mask in 1..=full_mask(n - 1) {
            generated.insert(x.apply_unchecked(&dn, &vertices(mask)).base);
        }
        let nondegenerate = last_faces.iter().all(|s| !s.is_degenerate());
        let mut bases: Vec<NdId> = last_faces.iter().map(|s| s.base).collect();
        bases.sort();
        let distinct = bases.windows(2).all(|w| w[0] != w[1]);
        let disjoint = bases.iter().all(|b| !generated.contains(b));
        out.push((
            x.name(id).to_string(),
            nondegenerate && distinct && disjoint,
        ));
    }
    RegularityReport { simplices: out }
}
