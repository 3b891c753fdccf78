use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use procstar::functor::{
    induced_hom, is_proper, verify_relation_preservation, Filtration, GeneratorMap, Outcome,
    Properness, FILTRATION_SCHEMA,
};
use procstar::homotopy::{eta_endpoints, verify_homotopy, HomotopyDiagram};
use procstar::poset::EdgeMode;
use procstar::presentation::{pipeline, Format, Presentation};
use procstar::repcheck::{
    matrix_unit_rep, relation_residual, search_representation, vertex_norms_unchecked, MatrixRep,
};
use procstar::rewrite::compile;
use procstar::sset::{FiniteSimplicialSet, SimplicialMap, SMAP_SCHEMA};
use procstar::subdivision::subdivide;

const OK: u8 = 0;
const FALSE: u8 = 1;
const USAGE: u8 = 2;
const UNKNOWN: u8 = 3;

/// Presentations of finite simplicial sets by generators and relations.
///
/// Exit codes: 0 success or verified, 1 verified false, 2 usage or parse
/// error, 3 undecided within the bounds.
#[derive(Parser, Debug)]
#[command(name = "procstar", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Shorthand for `--format text`.
    #[arg(long, global = true)]
    text: bool,
    /// Seed for randomised searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Completion bound (maximal overlap length).
    #[arg(long, global = true, default_value_t = 6)]
    bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

impl Global {
    fn text(&self) -> bool {
        self.text || self.format == OutFormat::Text
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Barycentric subdivision of a simplicial set.
    Subdivide {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the chain provenance of every simplex.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Generators and relations of a simplicial set.
    Present {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Quiver edges for covering relations only.
        #[arg(long)]
        hasse: bool,
    },
    /// Normal form of an expression modulo a presentation.
    Nf {
        presentation: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Generator map induced by a simplicial map.
    Induce {
        map: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Properness of a map or of a filtration.
    CheckProper { input: PathBuf },
    /// Relation preservation of a generator map.
    Verify { genmap: PathBuf },
    /// Checks a homotopy diagram `gamma` from `f1` to `f2`.
    CheckHomotopy {
        f1: PathBuf,
        f2: PathBuf,
        gamma: PathBuf,
        /// Also require the three maps to be proper.
        #[arg(long)]
        proper: bool,
        /// Also certify the endpoints of the rotation homotopy.
        #[arg(long)]
        eta: bool,
    },
    /// Matrix representations of a presentation.
    Rep {
        presentation: PathBuf,
        /// The matrix-unit representation.
        #[arg(long, conflicts_with = "search")]
        canonical: bool,
        /// Gradient search: dimension, iterations, seed.
        #[arg(long, num_args = 3, value_names = ["DIM", "ITERS", "SEED"])]
        search: Option<Vec<u64>>,
        /// Check a representation: the one given, or the one computed.
        #[arg(long, num_args = 0..=1)]
        check: Option<Option<PathBuf>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn schema_of(text: &str) -> Result<String> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    value
        .get("schema")
        .and_then(|s| s.as_str())
        .map(str::to_string)
        .ok_or_else(|| anyhow!("document has no schema field"))
}

/// Writes to `output` if given, to stdout otherwise.
fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_set(path: &Path) -> Result<Arc<FiniteSimplicialSet>> {
    Ok(Arc::new(FiniteSimplicialSet::from_json(&read(path)?)?))
}

fn load_map(path: &Path) -> Result<SimplicialMap> {
    Ok(SimplicialMap::from_json(&read(path)?)?)
}

fn load_presentation(path: &Path) -> Result<Presentation> {
    Ok(Presentation::from_json(&read(path)?)?)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Subdivide {
            input,
            output,
            provenance,
        } => {
            let sd = subdivide(&load_set(input)?)?;
            if let Some(p) = provenance {
                emit(Some(p), &json(&sd.provenance_document()))?;
            }
            let text = if g.text() {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "nondegenerate simplices by dimension: {:?}",
                    sd.sd.counts_by_dim()
                );
                for id in sd.sd.ids() {
                    let _ = writeln!(s, "{} (dim {})", sd.sd.name(id), sd.sd.dim_of(id));
                }
                s
            } else {
                sd.sd.to_json()
            };
            emit(output.as_deref(), &text)?;
            Ok(OK)
        }
        Command::Present {
            input,
            output,
            hasse,
        } => {
            let mode = if *hasse {
                EdgeMode::Hasse
            } else {
                EdgeMode::AllPairs
            };
            let p = pipeline(&load_set(input)?, mode)?.presentation();
            let format = if g.text() { Format::Text } else { Format::Json };
            emit(output.as_deref(), &p.emit(format))?;
            Ok(OK)
        }
        Command::Nf { presentation, expr } => {
            let p = load_presentation(presentation)?;
            let poly = p.generators.parse(expr)?;
            let rs = compile(&p, g.bound);
            let nf = rs.normal_form(&poly);
            let rendered = p.generators.render(&nf);
            if g.text() {
                println!("{rendered}");
            } else {
                print!(
                    "{}",
                    json(&serde_json::json!({
                        "input": expr,
                        "normal_form": rendered,
                        "complete": rs.is_complete(),
                    }))
                );
            }
            Ok(if rs.is_complete() { OK } else { UNKNOWN })
        }
        Command::Induce { map, output } => {
            let gm = induced_hom(&load_map(map)?)?;
            let text = if g.text() {
                let mut s = String::new();
                for l in gm.source.letters() {
                    let _ = writeln!(
                        s,
                        "{} -> {}",
                        gm.source.label(l),
                        gm.target.render(&gm.images[l as usize])
                    );
                }
                s
            } else {
                gm.to_json()
            };
            emit(output.as_deref(), &text)?;
            Ok(OK)
        }
        Command::CheckProper { input } => {
            let text = read(input)?;
            let verdict = match schema_of(&text)?.as_str() {
                SMAP_SCHEMA => is_proper(&SimplicialMap::from_json(&text)?),
                FILTRATION_SCHEMA => Filtration::from_json(&text)?.properness(),
                other => bail!("expected a map or a filtration, found schema `{other}`"),
            };
            if g.text() {
                match &verdict {
                    Properness::Proper { max_preimage } => {
                        println!("PROPER (max preimage {max_preimage})")
                    }
                    Properness::ProperOnWindow { max_preimage } => {
                        println!("PROPER_ON_WINDOW (max preimage {max_preimage})")
                    }
                    Properness::NotProper { witness, sizes } => {
                        println!("NOT_PROPER: preimage of `{witness}` grows {sizes:?}")
                    }
                    Properness::Unknown => println!("UNKNOWN"),
                }
            } else {
                print!("{}", json(&verdict));
            }
            Ok(match verdict {
                Properness::Proper { .. } | Properness::ProperOnWindow { .. } => OK,
                Properness::NotProper { .. } => FALSE,
                Properness::Unknown => UNKNOWN,
            })
        }
        Command::Verify { genmap } => {
            let gm = GeneratorMap::from_json(&read(genmap)?)?;
            let source = Presentation::from_generators(gm.source.clone(), true);
            let target = Presentation::from_generators(gm.target.clone(), true);
            let rs = compile(&target, g.bound);
            let report = verify_relation_preservation(&gm, &source, &rs)?;
            if g.text() {
                let failures: Vec<_> = report.failures().collect();
                let unknowns: Vec<_> = report.unknowns().collect();
                println!(
                    "{} relations: {} failed, {} unknown; unit {}",
                    report.checks.len(),
                    failures.len(),
                    unknowns.len(),
                    match &report.unit {
                        Some(Outcome::Pass) | None => "ok",
                        Some(Outcome::Fail { .. }) => "FAILED",
                        Some(Outcome::Unknown { .. }) => "unknown",
                    }
                );
                for c in failures.iter().chain(&unknowns) {
                    if let Outcome::Fail { residue } | Outcome::Unknown { residue } = &c.outcome {
                        println!("{:?} {}: residue {}", c.schema, c.relation, residue);
                    }
                }
                for l in &report.star_defects {
                    println!("not star-compatible at {l}");
                }
            } else {
                print!("{}", json(&report));
            }
            Ok(if report.has_failure() {
                FALSE
            } else if report.has_unknown() {
                UNKNOWN
            } else {
                OK
            })
        }
        Command::CheckHomotopy {
            f1,
            f2,
            gamma,
            proper,
            eta,
        } => {
            let d = HomotopyDiagram::new(load_map(f1)?, load_map(f2)?, load_map(gamma)?)?;
            let verdict = verify_homotopy(&d, *proper)?;
            let cert = if *eta && verdict.valid {
                Some(eta_endpoints(&d, g.bound)?)
            } else {
                None
            };
            if g.text() {
                match &verdict.witness {
                    None if verdict.valid => println!("homotopy: valid"),
                    None => println!("homotopy: a map is not proper"),
                    Some((i, s)) => println!("homotopy: invalid, end {i} differs at `{s}`"),
                }
                if let Some(c) = &cert {
                    let bad = c
                        .entries
                        .iter()
                        .filter(|e| e.decision != procstar::rewrite::Decision::Equal)
                        .count();
                    println!(
                        "eta endpoints: {} generators, {} not certified; composites {}",
                        c.entries.len(),
                        bad,
                        if c.composites.iter().all(Option::is_none) {
                            "agree"
                        } else {
                            "DIFFER"
                        }
                    );
                }
            } else {
                print!(
                    "{}",
                    json(&serde_json::json!({ "verdict": verdict, "eta": cert }))
                );
            }
            Ok(match (&verdict.valid, &cert) {
                (false, _) => FALSE,
                (true, Some(c)) if c.holds() => OK,
                (true, Some(c)) if c.has_unknown() => UNKNOWN,
                (true, Some(_)) => FALSE,
                (true, None) => OK,
            })
        }
        Command::Rep {
            presentation,
            canonical,
            search,
            check,
            output,
        } => {
            let p = load_presentation(presentation)?;
            let mut converged = true;
            let rep = match (canonical, search, check) {
                (true, _, _) => matrix_unit_rep(&p),
                (false, Some(args), _) => {
                    let r = search_representation(&p, args[0] as usize, args[1] as usize, args[2]);
                    converged = r.converged;
                    if g.text() {
                        println!(
                            "search: {} iterations, residual {:e}, {}",
                            r.iterations,
                            r.residual,
                            if r.converged {
                                "converged"
                            } else {
                                "not converged"
                            }
                        );
                    }
                    r.rep
                }
                (false, None, Some(Some(path))) => {
                    MatrixRep::from_json(&read(path)?, p.generators.clone())?
                }
                _ => bail!("give --canonical, --search DIM ITERS SEED or --check REP"),
            };
            if let Some(path) = output {
                emit(Some(path), &rep.to_json())?;
            }
            if check.is_none() {
                if output.is_none() && !g.text() {
                    print!("{}", rep.to_json());
                }
                return Ok(if converged { OK } else { FALSE });
            }
            let residual = relation_residual(&rep, &p)?;
            let norms = vertex_norms_unchecked(&rep, g.tol);
            let ok = residual.max <= g.tol && norms.passes();
            if g.text() {
                println!("dimension {}", rep.dim);
                println!("max residual {:e}", residual.max);
                for (v, n) in &norms.norms {
                    println!("|{v}| = {n}");
                }
                println!("{}", if ok { "PASS" } else { "FAIL" });
            } else {
                print!(
                    "{}",
                    json(&serde_json::json!({
                        "dim": rep.dim,
                        "max_residual": residual.max,
                        "vertex_norms": norms,
                        "pass": ok,
                    }))
                );
            }
            Ok(if ok { OK } else { FALSE })
        }
    }
}
