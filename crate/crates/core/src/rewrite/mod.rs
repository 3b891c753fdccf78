//! Rewriting in the free *-algebra modulo a presentation.
//!
//! Relations become rules `word → polynomial` oriented by the
//! degree-lexicographic order, and a bounded Knuth–Bendix/Buchberger
//! completion adds the rules needed to resolve overlaps. Coefficients stay
//! integral: a relation whose leading coefficient does not divide the rest
//! is dropped and the system is marked incomplete.

mod oracle;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::poly::{GeneratorSet, Letter, StarPolynomial, Word};
use crate::presentation::Presentation;

pub use oracle::{brute_force_equal, CongruenceOracle, OracleKey};

pub const DEFAULT_BOUND: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: StarPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Equal,
    Distinct,
    Unknown,
}

/// Why a completion run stopped short of confluence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Incompleteness {
    /// Overlap words longer than the bound that were not resolved.
    pub skipped_overlaps: usize,
    /// Relations whose leading coefficient does not divide the others.
    pub non_monic: usize,
}

impl Incompleteness {
    pub fn is_empty(&self) -> bool {
        self.skipped_overlaps == 0 && self.non_monic == 0
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    gens: Arc<GeneratorSet>,
    rules: Vec<Rule>,
    index: HashMap<Word, usize>,
    max_lhs: usize,
    bound: usize,
    incomplete: Incompleteness,
}

impl RewriteSystem {
    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, lhs: &[Letter]) -> Option<&Rule> {
        self.index.get(lhs).map(|&k| &self.rules[k])
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// True when every overlap was resolved within the bound.
    pub fn is_complete(&self) -> bool {
        self.incomplete.is_empty()
    }

    pub fn incompleteness(&self) -> &Incompleteness {
        &self.incomplete
    }

    /// Leftmost redex of `w`: start position and rule index.
    fn find_redex(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            let longest = self.max_lhs.min(w.len() - start);
            for len in 1..=longest {
                if let Some(&k) = self.index.get(&w[start..start + len]) {
                    return Some((start, k));
                }
            }
        }
        None
    }

    pub fn is_reducible(&self, w: &[Letter]) -> bool {
        self.find_redex(w).is_some()
    }

    /// Normal form and the number of rewrite steps taken.
    pub fn normal_form_steps(&self, p: &StarPolynomial) -> (StarPolynomial, usize) {
        reduce(p, |w| {
            self.find_redex(w)
                .map(|(start, k)| (start, self.rules[k].lhs.len(), &self.rules[k].rhs))
        })
    }

    pub fn normal_form(&self, p: &StarPolynomial) -> StarPolynomial {
        self.normal_form_steps(p).0
    }

    pub fn decide_equal(&self, p: &StarPolynomial, q: &StarPolynomial) -> Decision {
        let d = self.normal_form(&(p.clone() - q.clone()));
        if d.is_zero() {
            Decision::Equal
        } else if self.is_complete() {
            Decision::Distinct
        } else {
            Decision::Unknown
        }
    }
}

/// Repeatedly rewrites the largest reducible term; `redex` returns the
/// start, length and replacement of a redex in a word.
fn reduce<'r, F>(p: &StarPolynomial, redex: F) -> (StarPolynomial, usize)
where
    F: Fn(&[Letter]) -> Option<(usize, usize, &'r StarPolynomial)>,
{
    let mut work = p.clone();
    let mut out = StarPolynomial::zero();
    let mut steps = 0;
    while let Some((w, c)) = work.pop_leading() {
        match redex(&w.0) {
            Some((start, len, rhs)) => {
                steps += 1;
                let replaced = rhs.sandwich(&w.0[..start], &w.0[start + len..]);
                for (v, k) in replaced.terms() {
                    work.add_term(v.clone(), k * c);
                }
            }
            None => out.add_term(w, c),
        }
    }
    (out, steps)
}

struct Completion {
    rules: Vec<Option<Rule>>,
    index: HashMap<Word, usize>,
    by_first: HashMap<Letter, Vec<usize>>,
    by_last: HashMap<Letter, Vec<usize>>,
    max_lhs: usize,
    bound: usize,
    incomplete: Incompleteness,
}

impl Completion {
    fn find_redex(&self, w: &[Letter]) -> Option<(usize, usize, &StarPolynomial)> {
        for start in 0..w.len() {
            let longest = self.max_lhs.min(w.len() - start);
            for len in 1..=longest {
                if let Some(&k) = self.index.get(&w[start..start + len]) {
                    let r = self.rules[k].as_ref().unwrap();
                    return Some((start, len, &r.rhs));
                }
            }
        }
        None
    }

    fn normal_form(&self, p: &StarPolynomial) -> StarPolynomial {
        reduce(p, |w| self.find_redex(w)).0
    }

    /// Turns a reduced nonzero polynomial into a monic rule, if possible.
    fn orient(&mut self, p: StarPolynomial) -> Option<Rule> {
        let (lead, c) = p.leading().map(|(w, c)| (w.clone(), c))?;
        let p = if c < 0 { p.scale(-1) } else { p };
        let c = c.abs();
        if c != 1 && p.terms().any(|(_, k)| k % c != 0) {
            self.incomplete.non_monic += 1;
            return None;
        }
        let mut rhs = StarPolynomial::zero();
        for (w, k) in p.terms() {
            if *w != lead {
                rhs.add_term(w.clone(), -k / c);
            }
        }
        Some(Rule { lhs: lead, rhs })
    }

    fn insert(&mut self, rule: Rule, queue: &mut VecDeque<StarPolynomial>) -> usize {
        // rules whose left side contains the new one are re-queued
        let lhs = rule.lhs.0.clone();
        let stale: Vec<usize> = self
            .index
            .iter()
            .filter(|(w, _)| w.len() > lhs.len() && contains(&w.0, &lhs))
            .map(|(_, &k)| k)
            .collect();
        for k in stale {
            let old = self.rules[k].take().unwrap();
            self.index.remove(&old.lhs);
            queue.push_back(StarPolynomial::word(old.lhs) - old.rhs);
        }
        let k = self.rules.len();
        self.max_lhs = self.max_lhs.max(lhs.len());
        self.index.insert(rule.lhs.clone(), k);
        self.by_first.entry(lhs[0]).or_default().push(k);
        self.by_last
            .entry(*lhs.last().unwrap())
            .or_default()
            .push(k);
        self.rules.push(Some(rule));
        k
    }

    /// S-polynomials of overlaps `u·o·v` where `u·o` is the left side of
    /// rule `i` and `o·v` that of rule `j`.
    fn overlaps(&mut self, k: usize, queue: &mut VecDeque<StarPolynomial>) {
        let lk = self.rules[k].as_ref().unwrap().lhs.0.clone();
        let mut pairs = Vec::new();
        // k on the left
        for o in 1..lk.len() {
            if let Some(cands) = self.by_first.get(&lk[lk.len() - o]) {
                pairs.extend(cands.iter().map(|&j| (k, j, o)));
            }
        }
        // k on the right
        for o in 1..lk.len() {
            if let Some(cands) = self.by_last.get(&lk[o - 1]) {
                pairs.extend(cands.iter().filter(|&&j| j != k).map(|&j| (j, k, o)));
            }
        }
        for (i, j, o) in pairs {
            let (Some(ri), Some(rj)) = (&self.rules[i], &self.rules[j]) else {
                continue;
            };
            let (li, lj) = (&ri.lhs.0, &rj.lhs.0);
            if o >= li.len() || o >= lj.len() || li[li.len() - o..] != lj[..o] {
                continue;
            }
            if ri.rhs.is_zero() && rj.rhs.is_zero() {
                continue;
            }
            if li.len() + lj.len() - o > self.bound {
                self.incomplete.skipped_overlaps += 1;
                continue;
            }
            let s = ri.rhs.sandwich(&[], &lj[o..]) - rj.rhs.sandwich(&li[..li.len() - o], &[]);
            queue.push_back(s);
        }
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

/// Orients the relations of `p` into rules and completes them, resolving
/// every overlap whose word has length at most `bound`.
pub fn compile(p: &Presentation, bound: usize) -> RewriteSystem {
    let mut c = Completion {
        rules: Vec::new(),
        index: HashMap::new(),
        by_first: HashMap::new(),
        by_last: HashMap::new(),
        max_lhs: 0,
        bound,
        incomplete: Incompleteness::default(),
    };
    let mut initial: Vec<StarPolynomial> = p
        .relations
        .iter()
        .map(|r| r.difference())
        .filter(|d| !d.is_zero())
        .collect();
    // smallest leading words first, so short rules are in place before the
    // relations they simplify
    initial.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut queue: VecDeque<StarPolynomial> = initial.into();
    while let Some(poly) = queue.pop_front() {
        let r = c.normal_form(&poly);
        if r.is_zero() {
            continue;
        }
        if let Some(rule) = c.orient(r) {
            let k = c.insert(rule, &mut queue);
            c.overlaps(k, &mut queue);
        }
    }
    // final interreduction of right-hand sides
    let live: Vec<Rule> = c.rules.iter().flatten().cloned().collect();
    let mut rules = Vec::with_capacity(live.len());
    for rule in &live {
        rules.push(Rule {
            lhs: rule.lhs.clone(),
            rhs: c.normal_form(&rule.rhs),
        });
    }
    rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
    let index = rules
        .iter()
        .enumerate()
        .map(|(k, r)| (r.lhs.clone(), k))
        .collect();
    RewriteSystem {
        gens: p.generators.clone(),
        max_lhs: rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0),
        rules,
        index,
        bound,
        incomplete: c.incomplete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::present;
    use crate::sset::{minimal_circle, standard_simplex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(x: crate::sset::FiniteSimplicialSet) -> RewriteSystem {
        compile(&present(&Arc::new(x)).unwrap(), DEFAULT_BOUND)
    }

    #[test]
    fn point_collapses_to_scalars() {
        let rs = system(standard_simplex(0));
        let g = rs.generators().clone();
        assert_eq!(rs.rule(&[0]).unwrap().rhs, StarPolynomial::one());
        assert_eq!(
            rs.normal_form(&g.parse("a a a - 2a").unwrap()),
            StarPolynomial::constant(-1)
        );
    }

    #[test]
    fn interval_rules() {
        let rs = system(standard_simplex(1));
        assert!(rs.is_complete());
        let g = rs.generators().clone();
        let l = |s: &str| g.lookup(s).unwrap();
        assert_eq!(
            rs.rule(&[l("a"), l("a")]).unwrap().rhs,
            StarPolynomial::letter(l("a"))
        );
        assert!(rs.rule(&[l("a"), l("b")]).unwrap().rhs.is_zero());
        let nf = |s: &str| g.render(&rs.normal_form(&g.parse(s).unwrap()));
        assert_eq!(nf("x1x2"), "0");
        assert_eq!(nf("b x2"), "x2");
        assert_eq!(nf("x1 x1* x1"), "x1");
        assert_eq!(nf("x2* b"), "x2*");
        assert_eq!(nf("e"), "1 - a - b - c - d");
        let p = g.parse("a+b+c+d+e").unwrap();
        assert_eq!(rs.decide_equal(&p, &StarPolynomial::one()), Decision::Equal);
        let (a, b) = (g.parse("a").unwrap(), g.parse("b").unwrap());
        assert_eq!(rs.decide_equal(&a, &b), Decision::Distinct);
        assert_eq!(rs.decide_equal(&a, &a), Decision::Equal);
    }

    #[test]
    fn both_reduction_orders_agree() {
        let rs = system(standard_simplex(1));
        let g = rs.generators().clone();
        let (x1, x1s) = (g.lookup("x1").unwrap(), g.lookup("x1*").unwrap());
        // reduce (x1 x1*) x1 and x1 (x1* x1) by hand, then normalise
        let left = &StarPolynomial::letter(g.source(x1) as Letter) * &StarPolynomial::letter(x1);
        let right = &StarPolynomial::letter(x1) * &StarPolynomial::letter(g.target(x1) as Letter);
        assert_eq!(rs.normal_form(&left), rs.normal_form(&right));
        assert_eq!(
            rs.normal_form(&StarPolynomial::word(Word(vec![x1, x1s, x1]))),
            StarPolynomial::letter(x1)
        );
    }

    #[test]
    fn rules_decrease_and_are_linear() {
        for x in [standard_simplex(1), minimal_circle(), standard_simplex(2)] {
            let rs = system(x);
            for r in rs.rules() {
                assert!(r.rhs.terms().all(|(w, _)| *w < r.lhs));
            }
            let g = rs.generators().clone();
            let letters: Vec<Letter> = g.letters().collect();
            let p = StarPolynomial::word(Word(letters.iter().take(3).copied().collect()));
            let q = StarPolynomial::word(Word(letters.iter().rev().take(4).copied().collect()));
            let sum = rs.normal_form(&(p.clone() + q.clone()));
            assert_eq!(sum, rs.normal_form(&p) + rs.normal_form(&q));
        }
    }

    #[test]
    fn bounded_termination() {
        let rs = system(minimal_circle());
        let n = rs.generators().letter_count() as Letter;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let w: Vec<Letter> = (0..8).map(|_| rng.gen_range(0..n)).collect();
            let (_, steps) = rs.normal_form_steps(&StarPolynomial::word(Word(w)));
            assert!(steps < 10_000);
        }
    }
}
