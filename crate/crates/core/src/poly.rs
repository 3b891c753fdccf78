//! Words and integer polynomials over a generator alphabet with involution.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::poset::{edge_label, vertex_label};

pub type Letter = u32;

/// A word in the free monoid, ordered degree-lexicographically: shorter
/// words first, then lexicographically by letter index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Self(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::borrow::Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

/// What a letter stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LetterKind {
    Vertex(usize),
    Edge(usize),
    Star(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexGen {
    pub label: String,
    /// Id of the simplex of the subdivision this vertex stands for.
    pub simplex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeGen {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// The generators of a presentation: positive vertex generators, edge
/// generators, and their adjoints. Letters are numbered vertices first,
/// then edges, then starred edges.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    vertices: Vec<VertexGen>,
    edges: Vec<(usize, usize)>,
    by_label: HashMap<String, Letter>,
}

impl PartialEq for GeneratorSet {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for GeneratorSet {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub vertices: Vec<VertexGen>,
    pub edges: Vec<EdgeGen>,
}

impl GeneratorSet {
    /// Labels are assigned from the positions: `a, b, ...` (or `v0, ...`)
    /// for vertices and `x1, x2, ...` for edges.
    pub fn new(simplices: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        let n = simplices.len();
        let vertices: Vec<VertexGen> = simplices
            .into_iter()
            .enumerate()
            .map(|(k, simplex)| VertexGen {
                label: vertex_label(k, n),
                simplex,
            })
            .collect();
        let mut by_label = HashMap::new();
        for (k, v) in vertices.iter().enumerate() {
            by_label.insert(v.label.clone(), k as Letter);
        }
        let e = edges.len();
        for k in 0..e {
            by_label.insert(edge_label(k), (n + k) as Letter);
            by_label.insert(format!("{}*", edge_label(k)), (n + e + k) as Letter);
        }
        Self {
            vertices,
            edges,
            by_label,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn letter_count(&self) -> usize {
        self.vertices.len() + 2 * self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexGen] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.letter_count() as Letter
    }

    pub fn vertex_letters(&self) -> impl Iterator<Item = Letter> {
        0..self.vertices.len() as Letter
    }

    /// Edge and starred-edge letters.
    pub fn arrow_letters(&self) -> impl Iterator<Item = Letter> {
        self.vertices.len() as Letter..self.letter_count() as Letter
    }

    pub fn edge_letter(&self, k: usize) -> Letter {
        (self.vertices.len() + k) as Letter
    }

    pub fn kind(&self, l: Letter) -> LetterKind {
        let (v, e) = (self.vertices.len(), self.edges.len());
        let l = l as usize;
        if l < v {
            LetterKind::Vertex(l)
        } else if l < v + e {
            LetterKind::Edge(l - v)
        } else {
            LetterKind::Star(l - v - e)
        }
    }

    pub fn star(&self, l: Letter) -> Letter {
        let e = self.edges.len() as Letter;
        match self.kind(l) {
            LetterKind::Vertex(_) => l,
            LetterKind::Edge(_) => l + e,
            LetterKind::Star(_) => l - e,
        }
    }

    /// Source vertex of an arrow letter (a vertex is its own source).
    pub fn source(&self, l: Letter) -> usize {
        match self.kind(l) {
            LetterKind::Vertex(v) => v,
            LetterKind::Edge(k) => self.edges[k].0,
            LetterKind::Star(k) => self.edges[k].1,
        }
    }

    pub fn target(&self, l: Letter) -> usize {
        match self.kind(l) {
            LetterKind::Vertex(v) => v,
            LetterKind::Edge(k) => self.edges[k].1,
            LetterKind::Star(k) => self.edges[k].0,
        }
    }

    pub fn label(&self, l: Letter) -> String {
        match self.kind(l) {
            LetterKind::Vertex(v) => self.vertices[v].label.clone(),
            LetterKind::Edge(k) => edge_label(k),
            LetterKind::Star(k) => format!("{}*", edge_label(k)),
        }
    }

    pub fn lookup(&self, label: &str) -> Option<Letter> {
        self.by_label.get(label).copied()
    }

    pub fn to_document(&self) -> GeneratorDocument {
        let n = self.vertices.len();
        GeneratorDocument {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| EdgeGen {
                    label: edge_label(k),
                    source: vertex_label(s, n),
                    target: vertex_label(t, n),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &GeneratorDocument) -> Result<Self, FormatError> {
        let simplices = doc.vertices.iter().map(|v| v.simplex.clone()).collect();
        let n = doc.vertices.len();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (k, e) in doc.edges.iter().enumerate() {
            if e.label != edge_label(k) {
                return Err(FormatError::Invalid(format!(
                    "edge {} is labelled `{}`",
                    k + 1,
                    e.label
                )));
            }
            let find = |label: &str| {
                (0..n)
                    .find(|&v| vertex_label(v, n) == label)
                    .ok_or_else(|| FormatError::UnknownGenerator(label.to_string()))
            };
            edges.push((find(&e.source)?, find(&e.target)?));
        }
        let set = Self::new(simplices, edges);
        for (k, v) in doc.vertices.iter().enumerate() {
            if v.label != set.vertices[k].label {
                return Err(FormatError::Invalid(format!(
                    "vertex {k} is labelled `{}`",
                    v.label
                )));
            }
        }
        Ok(set)
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.0.iter().map(|&l| self.label(l)).collect()
    }

    /// Renders with terms in increasing order, e.g. `1 - a - b` or `x1x2`.
    pub fn render(&self, p: &StarPolynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, &c)) in p.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            let a = c.unsigned_abs();
            if w.is_empty() {
                let _ = write!(out, "{a}");
            } else if a == 1 {
                out.push_str(&self.word_string(w));
            } else {
                let _ = write!(out, "{a}{}", self.word_string(w));
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<StarPolynomial, FormatError> {
        Parser::new(self, text)?.parse()
    }
}

/// A finite integer combination of words; no zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StarPolynomial {
    terms: BTreeMap<Word, i64>,
}

impl StarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), 1)
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(Word::letter(l), 1)
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, 1)
    }

    pub fn monomial(w: Word, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Largest word with its coefficient.
    pub fn leading(&self) -> Option<(&Word, i64)> {
        self.terms.iter().next_back().map(|(w, &c)| (w, c))
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Word, i64)> {
        self.terms.pop_last()
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, &k)| (w.clone(), k * c))
                .collect(),
        }
    }

    /// `left · self · right`.
    pub fn sandwich(&self, left: &[Letter], right: &[Letter]) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            let mut v = Vec::with_capacity(left.len() + w.len() + right.len());
            v.extend_from_slice(left);
            v.extend_from_slice(&w.0);
            v.extend_from_slice(right);
            out.add_term(Word(v), c);
        }
        out
    }

    /// The involution: reverse each word and star each letter.
    pub fn star(&self, gens: &GeneratorSet) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            let v: Vec<Letter> = w.0.iter().rev().map(|&l| gens.star(l)).collect();
            out.add_term(Word(v), c);
        }
        out
    }

    /// Replaces every letter by a polynomial.
    pub fn substitute(&self, images: &[StarPolynomial]) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            let mut acc = Self::constant(c);
            for &l in &w.0 {
                acc = &acc * &images[l as usize];
                if acc.is_zero() {
                    break;
                }
            }
            out = out + acc;
        }
        out
    }
}

impl Add for StarPolynomial {
    type Output = StarPolynomial;
    fn add(mut self, rhs: StarPolynomial) -> StarPolynomial {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl Sub for StarPolynomial {
    type Output = StarPolynomial;
    fn sub(mut self, rhs: StarPolynomial) -> StarPolynomial {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl Neg for StarPolynomial {
    type Output = StarPolynomial;
    fn neg(self) -> StarPolynomial {
        self.scale(-1)
    }
}

impl Mul for &StarPolynomial {
    type Output = StarPolynomial;
    fn mul(self, rhs: &StarPolynomial) -> StarPolynomial {
        let mut out = StarPolynomial::zero();
        for (a, &c) in &self.terms {
            for (b, &d) in &rhs.terms {
                out.add_term(a.concat(b), c * d);
            }
        }
        out
    }
}

impl FromIterator<(Word, i64)> for StarPolynomial {
    fn from_iter<I: IntoIterator<Item = (Word, i64)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Star,
    Dot,
    Plus,
    Minus,
    Open,
    Close,
}

struct Parser<'a> {
    gens: &'a GeneratorSet,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormatError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'*' => Token::Star,
            b'.' => Token::Dot,
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'(' => Token::Open,
            b')' => Token::Close,
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i].parse().map_err(|_| FormatError::Parse {
                    pos: start,
                    msg: "integer out of range".into(),
                })?;
                Token::Int(n)
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(FormatError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", char::from(c)),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(gens: &'a GeneratorSet, text: &str) -> Result<Self, FormatError> {
        Ok(Self {
            gens,
            tokens: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: &str) -> Result<T, FormatError> {
        Err(FormatError::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn parse(mut self) -> Result<StarPolynomial, FormatError> {
        if self.tokens.is_empty() {
            return self.error("empty expression");
        }
        let p = self.expr()?;
        if self.pos != self.tokens.len() {
            return self.error("unexpected token");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<StarPolynomial, FormatError> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            negate = true;
        } else if self.peek() == Some(&Token::Plus) {
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<StarPolynomial, FormatError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Dot) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Ident(_)) | Some(Token::Int(_)) | Some(Token::Open) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<StarPolynomial, FormatError> {
        let mut p = match self.tokens.get(self.pos).cloned() {
            Some((_, Token::Int(n))) => {
                self.pos += 1;
                StarPolynomial::constant(n)
            }
            Some((pos, Token::Ident(name))) => {
                self.pos += 1;
                let l = self.gens.lookup(&name).ok_or_else(|| FormatError::Parse {
                    pos,
                    msg: format!("unknown generator `{name}`"),
                })?;
                StarPolynomial::letter(l)
            }
            Some((_, Token::Open)) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                inner
            }
            _ => return self.error("expected a generator, integer or `(`"),
        };
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            p = p.star(self.gens);
        }
        Ok(p)
    }
}
