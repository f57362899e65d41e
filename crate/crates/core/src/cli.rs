//! Command-line front end.
//!
//! Exit codes: 0 for `yes`, a homomorphism found or a verified campaign;
//! 1 for `no`, `inconclusive` or a counterexample; 2 for usage, parse and
//! input errors; 3 when a budget is exceeded.

pub mod formats;

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arcgraph::{arc_graph, arc_graph_inverse};
use crate::duality::{
    check_nuf, finite_duality, has_bounded_height_tree_duality, has_tree_duality,
    lift_nuf_arc_graph, lift_nuf_pultr, BoundedHeightOptions, BoundedHeightVerdict, NufCandidate,
};
use crate::error::Error;
use crate::hom::{core, find_hom};
use crate::oracle::{
    check_adjunction, check_duality_pair, enumerate_digraphs, sample_pairs, PairOptions, Report,
    Verdict,
};
use crate::pultr::{builtin_pattern, psi, psi_inverse, Pattern};
use crate::sproink::{enumerate_sproinks, thunderbolt};
use crate::structures::{Digraph, Structure, Vocabulary};
use formats::{
    format_nuf, format_structure, parse_documents, parse_nuf, parse_pattern, parse_structure,
};

/// What a command printed and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "homdual",
    version,
    about = "Homomorphism dualities for digraphs and relational structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a homomorphism G -> H.
    Hom { g: PathBuf, h: PathBuf },
    /// Print the core of H and the retraction onto it.
    Core { h: PathBuf },
    /// Print the arc graph of a digraph.
    Arcgraph { g: PathBuf },
    /// Print the left adjoint of the arc graph applied to a digraph.
    ArcgraphInv { g: PathBuf },
    /// Print all sproinks of an oriented tree up to a vertex bound.
    Sproink {
        tree: PathBuf,
        #[arg(long)]
        max_size: usize,
        /// Use every height-one tree as a part, not just paths.
        #[arg(long)]
        all_trees: bool,
    },
    /// Print the thunderbolt with parameter J.
    Thunderbolt { j: usize },
    /// Apply a pattern functor; PAT is a pattern file or a builtin name.
    Psi { pattern: String, a: PathBuf },
    /// Apply the left adjoint of a pattern functor.
    PsiInv { pattern: String, b: PathBuf },
    /// Decide tree duality.
    TreeDuality { h: PathBuf },
    /// Decide bounded-height tree duality of a core with tree duality.
    BhDuality {
        h: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Decide finite duality.
    FiniteDuality { h: PathBuf },
    /// Check a near-unanimity table against a structure.
    VerifyNuf { h: PathBuf, table: PathBuf },
    /// Lift a near-unanimity function along a functor.
    #[command(subcommand)]
    LiftNuf(Lift),
    /// Check a candidate obstruction family on all small digraphs.
    CheckPair {
        h: PathBuf,
        /// `file:PATH`, `sproink:TREE_PATH` or `thunderbolts:J`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        max_g: usize,
        /// Ignore family members with more vertices.
        #[arg(long)]
        family_max: Option<usize>,
        /// Vertex bound for generated sproinks.
        #[arg(long, default_value_t = 15)]
        sproink_max_size: usize,
        #[arg(long)]
        all_trees: bool,
        /// Enumerate test digraphs up to isomorphism.
        #[arg(long)]
        iso: bool,
        /// Print tab-separated records instead of text.
        #[arg(long)]
        records: bool,
    },
    /// Test an adjunction on seeded random pairs.
    #[command(subcommand)]
    CheckAdjunction(Adjunction),
    /// Print every digraph on 1..=N vertices.
    Enumerate {
        n: usize,
        #[arg(long)]
        no_loops: bool,
        #[arg(long)]
        iso: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Lift {
    /// To the arc graph.
    Arc { h: PathBuf, table: PathBuf },
    /// To a pattern functor image.
    Pultr {
        pattern: String,
        h: PathBuf,
        table: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Adjunction {
    /// The arc graph and its left adjoint.
    Arc(Sampling),
    /// A pattern functor and its left adjoint.
    Pultr {
        pattern: String,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Args, Debug)]
struct Sampling {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    #[arg(long)]
    records: bool,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input {
                source: Error::BudgetExceeded { .. },
                ..
            }
            | Failure::Library(Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

type Outcome = Result<(i32, String), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => CliOutcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => CliOutcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {f}\n"),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_owned(),
        source,
    })
}

fn load(path: &Path) -> Result<Structure, Failure> {
    parse_structure(&read(path)?).map_err(|source| Failure::Input {
        path: path.to_owned(),
        source,
    })
}

fn load_digraph(path: &Path) -> Result<Digraph, Failure> {
    Digraph::try_from(load(path)?).map_err(|source| Failure::Input {
        path: path.to_owned(),
        source,
    })
}

fn load_pattern(name: &str) -> Result<Pattern, Failure> {
    let path = Path::new(name);
    if !path.exists() {
        if let Some(p) = builtin_pattern(name) {
            return Ok(p);
        }
    }
    parse_pattern(&read(path)?).map_err(|source| Failure::Input {
        path: path.to_owned(),
        source,
    })
}

fn load_nuf(h: &Path, table: &Path) -> Result<NufCandidate, Failure> {
    let s = load(h)?;
    parse_nuf(&read(table)?, &s).map_err(|source| Failure::Input {
        path: table.to_owned(),
        source,
    })
}

fn yes_no(b: bool) -> (i32, String) {
    if b {
        (0, "yes\n".into())
    } else {
        (1, "no\n".into())
    }
}

fn report_outcome(report: &Report, records: bool) -> (i32, String) {
    let code = if report.verdict == Verdict::Verified {
        0
    } else {
        1
    };
    let text = if records {
        report.records()
    } else {
        report.render_text()
    };
    (code, text)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Hom { g, h } => {
            let (g, h) = (load(&g)?, load(&h)?);
            Ok(match find_hom(&g, &h)? {
                Some(m) => {
                    let mut out = String::from("homomorphism\n");
                    for (x, y) in m.map().iter().enumerate() {
                        let _ = writeln!(out, "{x} -> {y}");
                    }
                    (0, out)
                }
                None => (1, "no homomorphism\n".into()),
            })
        }
        Command::Core { h } => {
            let c = core(&load(&h)?);
            let mut out = format!("# retract {}\n", join(&c.retraction.vertices));
            let _ = writeln!(out, "# retraction {}", join(&c.retraction.map));
            out += &format_structure("core", &c.structure);
            Ok((0, out))
        }
        Command::Arcgraph { g } => {
            let a = arc_graph(&load_digraph(&g)?);
            let mut out = String::new();
            for (i, (u, v)) in a.labels.iter().enumerate() {
                let _ = writeln!(out, "# {i} = arc {u} {v}");
            }
            out += &format_structure("arc_graph", &a.digraph);
            Ok((0, out))
        }
        Command::ArcgraphInv { g } => {
            let d = arc_graph_inverse(&load_digraph(&g)?);
            Ok((0, format_structure("arc_graph_inverse", &d)))
        }
        Command::Sproink {
            tree,
            max_size,
            all_trees,
        } => {
            let t = load_digraph(&tree)?;
            let mut out = String::new();
            for (i, s) in enumerate_sproinks(&t, max_size, !all_trees)?.enumerate() {
                out += &format_structure(&format!("sproink_{i}"), &s);
            }
            Ok((0, out))
        }
        Command::Thunderbolt { j } => Ok((
            0,
            format_structure(&format!("thunderbolt_{j}"), &thunderbolt(j)),
        )),
        Command::Psi { pattern, a } => {
            let pat = load_pattern(&pattern)?;
            let p = psi(&pat, &load(&a)?)?;
            let mut out = String::new();
            for (i, l) in p.labels.iter().enumerate() {
                let _ = writeln!(out, "# {i} = {}", join(l));
            }
            out += &format_structure("psi", &p.structure);
            Ok((0, out))
        }
        Command::PsiInv { pattern, b } => {
            let pat = load_pattern(&pattern)?;
            let s = psi_inverse(&pat, &load(&b)?)?;
            Ok((0, format_structure("psi_inverse", &s)))
        }
        Command::TreeDuality { h } => Ok(yes_no(has_tree_duality(&load(&h)?)?)),
        Command::BhDuality { h, max_n } => {
            let opts = BoundedHeightOptions {
                n_max: max_n,
                ..Default::default()
            };
            let report = has_bounded_height_tree_duality(&load_digraph(&h)?, opts)?;
            let code = match report.verdict {
                BoundedHeightVerdict::Yes { .. } => 0,
                _ => 1,
            };
            Ok((code, report.to_string()))
        }
        Command::FiniteDuality { h } => {
            let check = finite_duality(&load(&h)?)?;
            let d = &check.dismantling;
            let n = check.core.structure.size();
            let pair = |x: usize| format!("({},{})", x / n, x % n);
            let mut out = String::new();
            let code = if d.success {
                out += "yes\n";
                let seq: Vec<String> = d.sequence.iter().map(|&x| pair(x)).collect();
                let _ = writeln!(out, "dismantling {}", seq.join(" "));
                0
            } else if d.conclusive {
                out += "no\n";
                let _ = writeln!(out, "core size {n}, square size {}", check.square.size());
                1
            } else {
                out += "inconclusive\n";
                let _ = writeln!(
                    out,
                    "greedy dismantling stuck after {} removals; too many elements for exhaustive search",
                    d.sequence.len()
                );
                3
            };
            Ok((code, out))
        }
        Command::VerifyNuf { h, table } => {
            let f = load_nuf(&h, &table)?;
            Ok(match check_nuf(&f) {
                Ok(()) => (0, "yes\n".into()),
                Err(v) => (1, format!("no\n{v}\n")),
            })
        }
        Command::LiftNuf(Lift::Arc { h, table }) => {
            let f = load_nuf(&h, &table)?;
            Ok((0, format_nuf(&lift_nuf_arc_graph(&f)?)))
        }
        Command::LiftNuf(Lift::Pultr { pattern, h, table }) => {
            let pat = load_pattern(&pattern)?;
            let f = load_nuf(&h, &table)?;
            Ok((0, format_nuf(&lift_nuf_pultr(&pat, &f)?)))
        }
        Command::CheckPair {
            h,
            family,
            max_g,
            family_max,
            sproink_max_size,
            all_trees,
            iso,
            records,
        } => {
            let h = load_digraph(&h)?;
            let members = load_family(&family, sproink_max_size, all_trees)?;
            let opts = PairOptions {
                g_max: max_g,
                family_size_max: family_max.unwrap_or(usize::MAX),
                up_to_isomorphism: iso,
            };
            let report = check_duality_pair(&h, members, opts)?;
            Ok(report_outcome(&report, records))
        }
        Command::CheckAdjunction(adj) => {
            let (mut report, sampling) = match adj {
                Adjunction::Arc(s) => {
                    let v = Vocabulary::digraph();
                    let samples = sample_pairs(&v, &v, s.samples, s.max_size, s.seed);
                    let report = check_adjunction(
                        |a| {
                            Ok(arc_graph(&Digraph::try_from(a.clone())?)
                                .digraph
                                .into_structure())
                        },
                        |b| Ok(arc_graph_inverse(&Digraph::try_from(b.clone())?).into_structure()),
                        &samples,
                    )?;
                    (report, s)
                }
                Adjunction::Pultr {
                    pattern,
                    sampling: s,
                } => {
                    let pat = load_pattern(&pattern)?;
                    let samples =
                        sample_pairs(pat.tau(), pat.sigma(), s.samples, s.max_size, s.seed);
                    let report = check_adjunction(
                        |a| Ok(psi(&pat, a)?.structure),
                        |b| psi_inverse(&pat, b),
                        &samples,
                    )?;
                    (report, s)
                }
            };
            report
                .parameters
                .push(("seed".into(), sampling.seed.to_string()));
            report
                .parameters
                .push(("max_size".into(), sampling.max_size.to_string()));
            Ok(report_outcome(&report, sampling.records))
        }
        Command::Enumerate { n, no_loops, iso } => {
            let mut out = String::new();
            for (i, g) in enumerate_digraphs(n, !no_loops, iso)?.enumerate() {
                out += &format_structure(&format!("g{i}"), &g);
            }
            Ok((0, out))
        }
    }
}

fn load_family(spec: &str, sproink_max: usize, all_trees: bool) -> Result<Vec<Digraph>, Failure> {
    let (kind, arg) = spec.split_once(':').ok_or_else(|| {
        Failure::Usage(format!(
            "family `{spec}` must be file:, sproink: or thunderbolts:"
        ))
    })?;
    match kind {
        "file" => {
            let path = Path::new(arg);
            let docs = parse_documents(&read(path)?).map_err(|source| Failure::Input {
                path: path.to_owned(),
                source,
            })?;
            docs.into_iter()
                .map(|d| Digraph::try_from(d.structure))
                .collect::<Result<_, _>>()
                .map_err(|source| Failure::Input {
                    path: path.to_owned(),
                    source,
                })
        }
        "sproink" => {
            let t = load_digraph(Path::new(arg))?;
            Ok(enumerate_sproinks(&t, sproink_max, !all_trees)?.collect())
        }
        "thunderbolts" => {
            let j: usize = arg.parse().map_err(|_| {
                Failure::Usage(format!("thunderbolts needs a number, found `{arg}`"))
            })?;
            Ok((0..=j).map(thunderbolt).collect())
        }
        _ => Err(Failure::Usage(format!("unknown family kind `{kind}`"))),
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
