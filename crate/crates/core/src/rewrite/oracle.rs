//! Bounded congruence closure, independent of the rewriting engine.
//!
//! Nodes are the words of length at most `max_len` that contain no factor
//! killed outright by a monomial relation (`xy = 0`, `vx = 0`, ...); any
//! other word of that length is zero. Monomial relations are closed under
//! left and right multiplication with signature tables, and the remaining
//! linear relations are handled as a subspace of the free vector space on
//! the resulting classes, saturated under multiplication by letters.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_rational::Ratio;
use petgraph::unionfind::UnionFind;

use super::Decision;
use crate::error::FormatError;
use crate::poly::{GeneratorSet, Letter, StarPolynomial, Word};
use crate::presentation::Presentation;

type Q = Ratio<i128>;
type Vector = BTreeMap<usize, Q>;

/// Canonical form of a polynomial modulo the bounded congruence.
pub type OracleKey = Vec<(usize, Q)>;

pub struct CongruenceOracle {
    gens: Arc<GeneratorSet>,
    max_len: usize,
    words: HashMap<Vec<Letter>, usize>,
    class: Vec<usize>,
    zero: usize,
    /// Shortest word of each class, indexed by class root.
    reps: HashMap<usize, Vec<Letter>>,
    pivots: BTreeMap<usize, Vector>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Sig {
    Left(Letter, usize),
    Right(usize, Letter),
}

impl CongruenceOracle {
    pub fn new(p: &Presentation, max_len: usize) -> Self {
        let gens = p.generators.clone();
        let mut killed: HashSet<Vec<Letter>> = HashSet::new();
        let mut monomial: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
        let mut linear: Vec<StarPolynomial> = Vec::new();
        for r in &p.relations {
            let single = |q: &StarPolynomial| -> Option<Option<Vec<Letter>>> {
                match q.len() {
                    0 => Some(None),
                    1 => {
                        let (w, c) = q.terms().next().unwrap();
                        (c == 1).then(|| Some(w.0.clone()))
                    }
                    _ => None,
                }
            };
            match (single(&r.lhs), single(&r.rhs)) {
                (Some(Some(u)), Some(None)) | (Some(None), Some(Some(u))) => {
                    killed.insert(u);
                }
                (Some(Some(u)), Some(Some(w))) => monomial.push((u, w)),
                _ => linear.push(r.difference()),
            }
        }
        let longest_kill = killed.iter().map(Vec::len).max().unwrap_or(0);
        let has_killed_suffix = |w: &[Letter]| {
            (1..=longest_kill.min(w.len())).any(|k| killed.contains(&w[w.len() - k..]))
        };

        // admissible words, breadth first
        let letters: Vec<Letter> = gens.letters().collect();
        let mut node_words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut frontier = vec![0usize];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for &k in &frontier {
                for &l in &letters {
                    let mut w = node_words[k].clone();
                    w.push(l);
                    if !has_killed_suffix(&w) {
                        next.push(node_words.len());
                        node_words.push(w);
                    }
                }
            }
            frontier = next;
        }
        let words: HashMap<Vec<Letter>, usize> = node_words
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        let zero = node_words.len();
        let mut uf = UnionFind::new(zero + 1);
        for (u, w) in &monomial {
            if let (Some(&a), Some(&b)) = (words.get(u), words.get(w)) {
                uf.union(a, b);
            }
        }

        // killed extensions of admissible words within the bound
        let mut left_kills: Vec<(Letter, usize)> = Vec::new();
        let mut right_kills: Vec<(usize, Letter)> = Vec::new();
        for (k, w) in node_words.iter().enumerate() {
            if w.len() >= max_len {
                continue;
            }
            for &l in &letters {
                let mut lw = Vec::with_capacity(w.len() + 1);
                lw.push(l);
                lw.extend_from_slice(w);
                if !words.contains_key(&lw) {
                    left_kills.push((l, k));
                }
                let mut wl = w.clone();
                wl.push(l);
                if !words.contains_key(&wl) {
                    right_kills.push((k, l));
                }
            }
        }

        // signature closure
        loop {
            let mut table: HashMap<Sig, usize> = HashMap::new();
            let zr = uf.find(zero);
            for &l in &letters {
                table.insert(Sig::Left(l, zr), zero);
                table.insert(Sig::Right(zr, l), zero);
            }
            for &(l, k) in &left_kills {
                table.insert(Sig::Left(l, uf.find(k)), zero);
            }
            for &(k, l) in &right_kills {
                table.insert(Sig::Right(uf.find(k), l), zero);
            }
            let mut merged = false;
            for (k, w) in node_words.iter().enumerate().skip(1) {
                let rest = words[&w[1..]];
                let init = words[&w[..w.len() - 1]];
                for sig in [
                    Sig::Left(w[0], uf.find(rest)),
                    Sig::Right(uf.find(init), w[w.len() - 1]),
                ] {
                    match table.get(&sig) {
                        Some(&other) => {
                            if uf.union(k, other) {
                                merged = true;
                            }
                        }
                        None => {
                            table.insert(sig, k);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let class: Vec<usize> = (0..=zero).map(|k| uf.find(k)).collect();
        let mut reps: HashMap<usize, Vec<Letter>> = HashMap::new();
        for (k, w) in node_words.iter().enumerate() {
            let c = class[k];
            if c == class[zero] {
                continue;
            }
            let better = match reps.get(&c) {
                Some(cur) => Word(w.clone()) < Word(cur.clone()),
                None => true,
            };
            if better {
                reps.insert(c, w.clone());
            }
        }
        let mut oracle = CongruenceOracle {
            gens,
            max_len,
            words,
            class,
            zero,
            reps,
            pivots: BTreeMap::new(),
        };
        oracle.saturate(linear);
        oracle
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of nonzero classes of admissible words.
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    /// Class of a word, `None` for zero, `Err` when it exceeds the bound.
    fn class_of(&self, w: &[Letter]) -> Result<Option<usize>, ()> {
        if w.len() > self.max_len {
            return Err(());
        }
        match self.words.get(w) {
            Some(&k) if self.class[k] != self.class[self.zero] => Ok(Some(self.class[k])),
            _ => Ok(None),
        }
    }

    fn vector(&self, p: &StarPolynomial) -> Result<Vector, ()> {
        let mut v = Vector::new();
        for (w, c) in p.terms() {
            if let Some(k) = self.class_of(&w.0)? {
                add(&mut v, k, Q::from_integer(c as i128));
            }
        }
        Ok(v)
    }

    fn reduce(&self, mut v: Vector) -> Vector {
        while let Some(k) = v
            .keys()
            .rev()
            .find(|k| self.pivots.contains_key(k))
            .copied()
        {
            let c = v[&k];
            for (&j, &d) in &self.pivots[&k] {
                add(&mut v, j, -c * d);
            }
        }
        v
    }

    fn saturate(&mut self, linear: Vec<StarPolynomial>) {
        let mut queue: VecDeque<Vector> =
            linear.iter().filter_map(|p| self.vector(p).ok()).collect();
        let letters: Vec<Letter> = self.gens.letters().collect();
        while let Some(v) = queue.pop_front() {
            let v = self.reduce(v);
            let Some((&top, &lead)) = v.iter().next_back() else {
                continue;
            };
            let row: Vector = v.iter().map(|(&k, &c)| (k, c / lead)).collect();
            self.pivots.insert(top, row.clone());
            for &l in &letters {
                for side in [true, false] {
                    if let Some(u) = self.multiply(&row, l, side) {
                        queue.push_back(u);
                    }
                }
            }
        }
    }

    /// `l·v` or `v·l` on class representatives; `None` if a product leaves
    /// the bound.
    fn multiply(&self, v: &Vector, l: Letter, left: bool) -> Option<Vector> {
        let mut out = Vector::new();
        for (&k, &c) in v {
            let rep = &self.reps[&k];
            let mut w = Vec::with_capacity(rep.len() + 1);
            if left {
                w.push(l);
                w.extend_from_slice(rep);
            } else {
                w.extend_from_slice(rep);
                w.push(l);
            }
            if let Some(j) = self.class_of(&w).ok()? {
                add(&mut out, j, c);
            }
        }
        Some(out)
    }

    pub fn key(&self, p: &StarPolynomial) -> Result<OracleKey, FormatError> {
        let v = self.vector(p).map_err(|_| {
            FormatError::Invalid(format!(
                "a word is longer than the oracle bound {}",
                self.max_len
            ))
        })?;
        Ok(self.reduce(v).into_iter().collect())
    }

    pub fn equal(&self, p: &StarPolynomial, q: &StarPolynomial) -> Result<bool, FormatError> {
        Ok(self.key(&(p.clone() - q.clone()))?.is_empty())
    }
}

fn add(v: &mut Vector, k: usize, c: Q) {
    let e = v.entry(k).or_insert_with(|| Q::from_integer(0));
    *e += c;
    if *e == Q::from_integer(0) {
        v.remove(&k);
    }
}

/// Decides `p = q` by congruence closure over words of length at most
/// `max_len`; exact within that window.
pub fn brute_force_equal(
    p: &Presentation,
    a: &StarPolynomial,
    b: &StarPolynomial,
    max_len: usize,
) -> Result<Decision, FormatError> {
    if a.max_len() > max_len || b.max_len() > max_len {
        return Err(FormatError::Invalid(format!(
            "inputs exceed the oracle bound {max_len}"
        )));
    }
    let oracle = CongruenceOracle::new(p, max_len);
    Ok(if oracle.equal(a, b)? {
        Decision::Equal
    } else {
        Decision::Distinct
    })
}
