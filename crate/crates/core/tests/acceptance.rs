//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use procstar::corpus::{Corpus, NamedMap};
use procstar::functor::{
    compose_genmaps, induced_hom_with, is_proper, verify_relation_preservation, Filtration,
    GeneratorMap, Outcome, Properness,
};
use procstar::homotopy::{eta_endpoints_with, verify_homotopy, EtaInputs, HomotopyDiagram};
use procstar::poly::{StarPolynomial, Word};
use procstar::poset::EdgeMode;
use procstar::presentation::{pipeline, present, Pipeline, Presentation};
use procstar::repcheck::{matrix_unit_rep, relation_residual, vertex_norm_report};
use procstar::rewrite::{compile, CongruenceOracle, RewriteSystem};
use procstar::sset::{standard_simplex, FiniteSimplicialSet};
use procstar::subdivision::subdivide;

/// Pipelines, presentations and rewrite systems per set, keyed by pointer.
struct Cache {
    entries: HashMap<*const FiniteSimplicialSet, Entry>,
}

struct Entry {
    pipeline: Pipeline,
    presentation: Presentation,
    rewrite: Option<RewriteSystem>,
}

impl Cache {
    fn new() -> Self {
        Self {
            entries: HashMap::new(),
        }
    }

    fn entry(&mut self, x: &Arc<FiniteSimplicialSet>) -> &mut Entry {
        self.entries.entry(Arc::as_ptr(x)).or_insert_with(|| {
            let pipeline = pipeline(x, EdgeMode::AllPairs).unwrap();
            let presentation = pipeline.presentation();
            Entry {
                pipeline,
                presentation,
                rewrite: None,
            }
        })
    }

    fn rewrite(&mut self, x: &Arc<FiniteSimplicialSet>) -> &RewriteSystem {
        let e = self.entry(x);
        if e.rewrite.is_none() {
            e.rewrite = Some(compile(&e.presentation, 6));
        }
        e.rewrite.as_ref().unwrap()
    }

    fn induced(&mut self, f: &procstar::sset::SimplicialMap) -> GeneratorMap {
        self.entry(f.source());
        self.entry(f.target());
        let s = &self.entries[&Arc::as_ptr(f.source())].pipeline;
        let t = &self.entries[&Arc::as_ptr(f.target())].pipeline;
        induced_hom_with(f, s, t).unwrap()
    }
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let p = present(&Arc::new(standard_simplex(1))).unwrap();
    let g = &p.generators;
    let labels: Vec<String> = g.vertex_letters().map(|v| g.label(v)).collect();
    let edges: Vec<(String, String, String)> = (0..g.edge_count())
        .map(|k| {
            let x = g.edge_letter(k);
            let (s, t) = g.edges()[k];
            (g.label(x), labels[s].clone(), labels[t].clone())
        })
        .collect();
    // the figure: a, b, c the vertices (b the midpoint), d, e the edges
    let figure = [
        ("x1", "a", "d"),
        ("x2", "b", "d"),
        ("x3", "b", "e"),
        ("x4", "c", "e"),
    ];
    let figure_ok = labels == ["a", "b", "c", "d", "e"]
        && edges
            .iter()
            .zip(figure)
            .all(|((x, s, t), (fx, fs, ft))| x == fx && s == fs && t == ft)
        && (0..3).all(|v| p.generators.vertices()[v].simplex.matches('<').count() == 0)
        && (3..5).all(|v| p.generators.vertices()[v].simplex.contains('<'));
    let text = p.to_text();
    let wanted = [
        "x1x2 = 0",
        "bx2 = x2",
        "x2*b = x2*",
        "a + b + c + d + e = 1",
    ];
    let missing: Vec<&str> = wanted
        .iter()
        .copied()
        .filter(|w| !text.lines().any(|l| l == *w))
        .collect();
    let elapsed = t.elapsed();
    check(
        figure_ok && missing.is_empty() && within(elapsed, Duration::from_secs(1)),
        format!("vertices {labels:?}, edges {edges:?}, missing relations {missing:?}, {elapsed:?}"),
    )
}

fn criterion_2() -> Verdict {
    let t = Instant::now();
    let p = present(&Arc::new(standard_simplex(0))).unwrap();
    let rs = compile(&p, 6);
    let a = p.generators.lookup("a").unwrap();
    let mut all_scalar = true;
    let mut count = 0;
    for len in 0..=8 {
        let w = StarPolynomial::word(Word(vec![a; len]));
        let nf = rs.normal_form(&w);
        all_scalar &= nf == StarPolynomial::one();
        count += 1;
    }
    // integer combinations collapse to their coefficient sum
    for (c1, c2, c3) in [(3, -2, 5), (1, 1, -7), (0, 4, 4)] {
        let mut q = StarPolynomial::constant(c1);
        q.add_term(Word(vec![a]), c2);
        q.add_term(Word(vec![a, a, a]), c3);
        all_scalar &= rs.normal_form(&q) == StarPolynomial::constant(c1 + c2 + c3);
        count += 1;
    }
    let elapsed = t.elapsed();
    check(
        all_scalar && rs.is_complete() && within(elapsed, Duration::from_secs(1)),
        format!("{count} polynomials normalised to scalars, {elapsed:?}"),
    )
}

/// Strict chains of nonempty subsets of `[n]`, by direct enumeration.
fn chain_oracle(n: usize) -> usize {
    let full = (1u32 << (n + 1)) - 1;
    fn extend(last: u32, full: u32) -> usize {
        // chains continuing strictly above `last`
        let mut total = 0;
        for next in 1..=full {
            if next != last && next & last == last {
                total += 1 + extend(next, full);
            }
        }
        total
    }
    (1..=full).map(|s| 1 + extend(s, full)).sum()
}

fn criterion_3() -> Verdict {
    let t = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 0..=3 {
        let sd = subdivide(&Arc::new(standard_simplex(n))).unwrap();
        let got = sd.sd.len();
        let want = chain_oracle(n);
        ok &= got == want;
        rows.push(format!("n={n}: {got}/{want}"));
    }
    ok &= chain_oracle(1) == 5 && chain_oracle(2) == 25;
    let elapsed = t.elapsed();
    check(
        ok && within(elapsed, Duration::from_secs(10)),
        format!("{}, {elapsed:?}", rows.join(", ")),
    )
}

fn criterion_4(corpus: &Corpus, cache: &mut Cache) -> Verdict {
    let t = Instant::now();
    let mut passed = 0;
    let mut unknown = 0;
    let mut bad = Vec::new();
    let maps = corpus.maps();
    for m in &maps {
        let g = cache.induced(&m.map);
        let src = cache.entry(m.map.target()).presentation.clone();
        let rs = cache.rewrite(m.map.source());
        let report = verify_relation_preservation(&g, &src, rs).unwrap();
        unknown += report.unknowns().count();
        if report.passes() && report.unit == Some(Outcome::Pass) {
            passed += 1;
        } else {
            bad.push(m.name.clone());
        }
    }
    let elapsed = t.elapsed();
    check(
        passed == maps.len() && maps.len() >= 10 && unknown == 0 && within(elapsed, Duration::from_secs(60)),
        format!(
            "{passed}/{} maps preserve all relations and the unit, {unknown} unknown, failing {bad:?}, {elapsed:?}",
            maps.len()
        ),
    )
}

/// Partial-isometry failures of the maps outside the preserving corpus.
fn counterexamples(corpus: &Corpus, cache: &mut Cache) -> String {
    let mut rows = Vec::new();
    for m in corpus.extra_maps() {
        let g = cache.induced(&m.map);
        let src = cache.entry(m.map.target()).presentation.clone();
        let rs = cache.rewrite(m.map.source());
        let report = verify_relation_preservation(&g, &src, rs).unwrap();
        let mut schemas: Vec<String> = report
            .failures()
            .map(|c| format!("{:?}", c.schema))
            .collect();
        schemas.dedup();
        rows.push(format!(
            "{} {} failed {:?}",
            m.name,
            report.failures().count(),
            schemas
        ));
    }
    rows.join("; ")
}

fn criterion_5(corpus: &Corpus, cache: &mut Cache) -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    let mut failures = Vec::new();
    for (name, x) in corpus.sets() {
        let id = cache.induced(&procstar::sset::SimplicialMap::identity(x.clone()));
        if id != GeneratorMap::identity(cache.entry(&x).pipeline.generators.clone()) {
            ok = false;
            failures.push(format!("id_{name}"));
        }
    }
    let pairs = corpus.composable_pairs();
    for (f, g) in &pairs {
        let NamedMap { map: fm, .. } = f;
        let gf = fm.then(&g.map).unwrap();
        let lhs = cache.induced(&gf);
        let rhs = compose_genmaps(&cache.induced(&g.map), &cache.induced(fm)).unwrap();
        let rs = cache.rewrite(fm.source());
        if let Some((letter, d)) = lhs.first_difference(&rhs, rs) {
            ok = false;
            failures.push(format!("{} then {} at {letter}: {d:?}", f.name, g.name));
        }
    }
    let elapsed = t.elapsed();
    check(
        ok && within(elapsed, Duration::from_secs(30)),
        format!(
            "{} identities, {} composable pairs, failures {failures:?}, {elapsed:?}",
            corpus.sets().len(),
            pairs.len()
        ),
    )
}

/// Every pair of words of length at most 5 over the Δ¹ alphabet: the
/// partition by normal form equals the partition by oracle class.
fn criterion_6() -> Verdict {
    let t = Instant::now();
    let p = present(&Arc::new(standard_simplex(1))).unwrap();
    let rs = compile(&p, 6);
    let oracle = CongruenceOracle::new(&p, 6);
    let letters: Vec<u32> = p.generators.letters().collect();
    let mut words: Vec<Vec<u32>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..5 {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for w in &frontier {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut nf_to_key: HashMap<StarPolynomial, procstar::rewrite::OracleKey> = HashMap::new();
    let mut key_to_nf: HashMap<procstar::rewrite::OracleKey, StarPolynomial> = HashMap::new();
    let mut disagreements = 0usize;
    for w in &words {
        let poly = StarPolynomial::word(Word(w.clone()));
        let nf = rs.normal_form(&poly);
        let key = oracle.key(&poly).unwrap();
        if nf_to_key.entry(nf.clone()).or_insert_with(|| key.clone()) != &key {
            disagreements += 1;
        }
        if key_to_nf.entry(key).or_insert(nf.clone()) != &nf {
            disagreements += 1;
        }
    }
    let elapsed = t.elapsed();
    check(
        disagreements == 0 && rs.is_complete() && within(elapsed, Duration::from_secs(300)),
        format!(
            "{} words, {} classes, {disagreements} disagreements, {elapsed:?}",
            words.len(),
            nf_to_key.len()
        ),
    )
}

fn criterion_7(corpus: &Corpus) -> Verdict {
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, x) in corpus.sets() {
        let p = present(&x).unwrap();
        let rep = matrix_unit_rep(&p);
        let residual = relation_residual(&rep, &p).unwrap().max;
        let norms = vertex_norm_report(&rep, &p, 1e-12).unwrap();
        let unit_norms = norms.norms.iter().all(|(_, n)| (n - 1.0).abs() <= 1e-12);
        ok &= residual <= 1e-12 && unit_norms && norms.passes();
        rows.push(format!("{name}: dim {} residual {residual:e}", rep.dim));
    }
    check(ok, rows.join(", "))
}

fn criterion_8(corpus: &Corpus, cache: &mut Cache) -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    let mut generators = 0;
    let mut failures = Vec::new();
    for m in corpus.maps() {
        let d = HomotopyDiagram::constant(&m.map);
        let verdict = verify_homotopy(&d, true).unwrap();
        let cyl = pipeline(d.cylinder.set(), EdgeMode::AllPairs).unwrap();
        cache.rewrite(m.map.source());
        cache.entry(m.map.target());
        let base = &cache.entries[&Arc::as_ptr(m.map.source())];
        let target = &cache.entries[&Arc::as_ptr(m.map.target())];
        let cert = eta_endpoints_with(
            &d,
            &EtaInputs {
                base: &base.pipeline,
                cylinder: &cyl,
                target: &target.pipeline,
                rewrite: base.rewrite.as_ref().unwrap(),
            },
        )
        .unwrap();
        generators += cert.entries.len();
        if !(verdict.valid && cert.holds()) {
            ok = false;
            failures.push(m.name.clone());
        }
    }
    let elapsed = t.elapsed();
    check(
        ok && within(elapsed, Duration::from_secs(30)),
        format!("{generators} cylinder generators certified, failures {failures:?}, {elapsed:?}"),
    )
}

fn criterion_9(corpus: &Corpus) -> Verdict {
    let filtration = Filtration::points_to_point(5).unwrap();
    let point = filtration
        .target()
        .name(procstar::sset::NdId(0))
        .to_string();
    let verdict = filtration.properness();
    let not_proper = matches!(&verdict, Properness::NotProper { witness, .. } if *witness == point);
    let mut finite = Vec::new();
    for (name, x) in corpus.sets() {
        finite.push((
            format!("id_{name}"),
            procstar::sset::SimplicialMap::identity(x),
        ));
    }
    for m in corpus.extra_maps() {
        if m.name.starts_with("vertex") || m.name.starts_with("edge") {
            finite.push((m.name.clone(), m.map));
        }
    }
    for m in corpus.maps() {
        let d = HomotopyDiagram::constant(&m.map);
        finite.push((format!("d0x1_{}", m.name), d.cylinder.d0.clone()));
        finite.push((format!("d1x1_{}", m.name), d.cylinder.d1.clone()));
    }
    let improper: Vec<&String> = finite
        .iter()
        .filter(|(_, f)| !is_proper(f).is_proper())
        .map(|(n, _)| n)
        .collect();
    check(
        not_proper && improper.is_empty(),
        format!(
            "filtration {verdict:?}; {} identity and inclusion maps, improper {improper:?}",
            finite.len()
        ),
    )
}

fn criterion_10() -> Verdict {
    let t = Instant::now();
    let sd = subdivide(&Arc::new(standard_simplex(4))).unwrap();
    let sd_time = t.elapsed();
    let t = Instant::now();
    let p = present(&Arc::new(standard_simplex(2))).unwrap();
    let present_time = t.elapsed();
    check(
        within(sd_time, Duration::from_secs(5)) && within(present_time, Duration::from_secs(10)),
        format!(
            "Sd(Δ⁴) has {} simplices in {sd_time:?}; Δ² presentation has {} relations in {present_time:?}",
            sd.sd.len(),
            p.relations.len()
        ),
    )
}

fn main() {
    let corpus = Corpus::new();
    let mut cache = Cache::new();
    let results = vec![
        ("1 interval presentation", criterion_1()),
        ("2 point collapses to scalars", criterion_2()),
        ("3 subdivision counts", criterion_3()),
        ("4 relation preservation", criterion_4(&corpus, &mut cache)),
        (
            "5 contravariant functoriality",
            criterion_5(&corpus, &mut cache),
        ),
        ("6 rewrite and oracle agree", criterion_6()),
        ("7 canonical representation", criterion_7(&corpus)),
        ("8 homotopy endpoints", criterion_8(&corpus, &mut cache)),
        ("9 properness", criterion_9(&corpus)),
        ("10 performance", criterion_10()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        println!(
            "{} criterion {name}: {}",
            if r.ok { "PASS" } else { "FAIL" },
            r.detail
        );
        failed += usize::from(!r.ok);
    }
    println!(
        "note: maps outside the corpus: {}",
        counterexamples(&corpus, &mut cache)
    );
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
