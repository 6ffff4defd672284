//! Command-line front end: file-based inputs, line-oriented output.
//!
//! Every subcommand reads its inputs from files given by flags, validates
//! them, runs the corresponding library operation and prints a deterministic
//! report. `--format machine` prepends a versioned `format: 1` header so
//! golden-file tests can pin outputs.

use crate::chain::{Chain, ChainError, Cochain, Ring, Theory};
use crate::diagram::{Conventions, DiagramError, OrientedDiagram};
use crate::homology::{
    homology_group, in_boundary_image, BoundaryCertificate, HomTheory,
    HomologyError, Obstruction, DEFAULT_SIZE_CAP,
};
use crate::invariants::{phi, phi_based, InvariantError};
use crate::quandle::{s3_multiplication_table, Quandle, QuandleError};
use crate::realization::{realize, RealizationError};
use crate::wirtinger::{
    check_assignment, evaluate_chain, pushforward, symbolic_shadow_chain, ArcWord, WirtingerError,
    WordAssignment,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("QuandleError: {0}")]
    Quandle(#[from] QuandleError),
    #[error("ChainError: {0}")]
    Chain(#[from] ChainError),
    #[error("DiagramError: {0}")]
    Diagram(#[from] DiagramError),
    #[error("HomologyError: {0}")]
    Homology(#[from] HomologyError),
    #[error("InvariantError: {0}")]
    Invariant(#[from] InvariantError),
    #[error("WirtingerError: {0}")]
    Wirtinger(#[from] WirtingerError),
    #[error("RealizationError: {0}")]
    Realization(#[from] RealizationError),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    #[error("VerifyError: {0}")]
    Verify(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "qhom", version, about = "Rack and quandle homology toolkit")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Worker cap; computations are small enough to run serially.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect or construct quandle files.
    Quandle {
        #[command(subcommand)]
        action: QuandleAction,
    },
    /// Rack/degenerate/quandle homology of a finite quandle.
    Homology {
        #[arg(long)]
        quandle: String,
        #[arg(long, default_value = "quandle")]
        theory: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "z")]
        ring: String,
    },
    /// All colourings of a diagram by a quandle.
    Colourings {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Shadow colourings extending the diagram's colourings.
    Shadow {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        base_region: Option<usize>,
        /// Restrict to this base-region colour; default lists all of them.
        #[arg(long)]
        base_colour: Option<usize>,
    },
    /// Diagram 2-chains, one per colouring.
    Chain2 {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Shadow diagram 3-chains, one per colouring.
    Chain3 {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, default_value_t = 0)]
        base_colour: usize,
    },
    /// Cocycle state-sum invariants.
    Invariant {
        #[command(subcommand)]
        kind: InvariantKind,
    },
    /// Symbolic shadow chain of a diagram over its own arc words.
    ShadowClass {
        #[arg(long)]
        pd: String,
        #[arg(long)]
        base_region: Option<usize>,
        /// Base region word; defaults to the least arc generator.
        #[arg(long)]
        base_colour: Option<String>,
    },
    /// Push a diagram's symbolic shadow chain through a word assignment.
    Pushforward {
        #[arg(long)]
        pd: String,
        #[arg(long)]
        assignment: String,
        #[arg(long)]
        base_region: Option<usize>,
        #[arg(long)]
        base_colour: Option<String>,
    },
    /// Re-run a bundled worked example end to end.
    VerifyExample {
        #[arg(value_parser = ["4_1", "9_37", "10_59"])]
        example: String,
    },
    /// Realize an integral rack 3-cycle as a closed surface diagram.
    Realize {
        #[arg(long)]
        quandle: String,
        #[arg(long)]
        chain: String,
    },
    /// Boundary of a chain read from a file.
    Boundary {
        #[arg(long)]
        quandle: String,
        #[arg(long)]
        chain: String,
    },
    /// Certify whether a chain is a boundary in the chosen theory.
    InBoundary {
        #[arg(long)]
        quandle: String,
        #[arg(long)]
        chain: String,
        #[arg(long, default_value = "quandle")]
        theory: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuandleAction {
    /// Validate a quandle file and report its orbit structure.
    Check {
        #[arg(long)]
        quandle: String,
    },
    /// Emit a standard quandle in the file format.
    Make {
        /// One of `dihedral:<n>`, `trivial:<n>`, `conj-s3`.
        spec: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum InvariantKind {
    /// Unbased shadow cocycle invariant.
    Phi {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        cocycle: String,
    },
    /// Based variant with a chosen edge.
    PhiBased {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        edge: usize,
    },
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long)]
    pub pd: String,
    #[arg(long)]
    pub quandle: String,
}

fn read(path: &str) -> Result<String, CliError> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_quandle(path: &str) -> Result<Quandle, CliError> {
    Ok(Quandle::parse(&read(path)?)?)
}

fn load_diagram(path: &str) -> Result<OrientedDiagram, CliError> {
    Ok(OrientedDiagram::parse_pd(&read(path)?)?)
}

fn parse_hom_theory(s: &str) -> Result<HomTheory, CliError> {
    HomTheory::parse(s)
        .ok_or_else(|| CliError::Verify(format!("unknown theory {s:?} (rack|degenerate|quandle)")))
}

fn fmt_word_chain(c: &Chain<ArcWord>) -> String {
    let mut out = format!("chain {} {} {}\n", c.theory(), c.degree(), c.ring());
    for (t, coeff) in c.terms() {
        let cells: Vec<String> = t.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "{coeff} ({})", cells.join(","));
    }
    out
}

/// Run one parsed command, returning its report text.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.threads == 0 {
        return Err(CliError::Verify("--threads must be at least 1".into()));
    }
    let conv = Conventions::default();
    let mut out = String::new();
    if cli.format == Format::Machine {
        out.push_str("format: 1\n");
    }
    match &cli.command {
        Command::Quandle { action } => match action {
            QuandleAction::Check { quandle } => {
                let q = load_quandle(quandle)?;
                let orbits = q.orbits().classes.len();
                let conn = if q.is_connected() { "connected" } else { "not connected" };
                let plural = if orbits == 1 { "orbit" } else { "orbits" };
                let _ = writeln!(out, "quandle: valid, {conn}, {orbits} {plural}");
            }
            QuandleAction::Make { spec } => {
                let q = match spec.split_once(':') {
                    Some(("dihedral", n)) => Quandle::dihedral(parse_size(n)?)?,
                    Some(("trivial", n)) => Quandle::trivial(parse_size(n)?)?,
                    None if spec == "conj-s3" => {
                        Quandle::conjugation(&s3_multiplication_table())?
                    }
                    _ => {
                        return Err(CliError::Verify(format!(
                            "unknown quandle spec {spec:?} (dihedral:<n>|trivial:<n>|conj-s3)"
                        )))
                    }
                };
                out.push_str(&q.dump());
            }
        },
        Command::Homology { quandle, theory, degree, ring } => {
            let q = load_quandle(quandle)?;
            let theory = parse_hom_theory(theory)?;
            let ring = Ring::parse(ring)?;
            let g = homology_group(&q, *degree, theory, ring, DEFAULT_SIZE_CAP)?;
            match cli.format {
                Format::Human => {
                    let _ = writeln!(out, "H^{theory}_{degree}({quandle}) = {g}");
                }
                Format::Machine => {
                    let _ = writeln!(out, "theory: {theory}");
                    let _ = writeln!(out, "degree: {degree}");
                    let _ = writeln!(out, "free_rank: {}", g.free_rank);
                    let torsion: Vec<String> =
                        g.torsion.iter().map(|d| d.to_string()).collect();
                    let _ = writeln!(out, "torsion: {}", torsion.join(","));
                }
            }
        }
        Command::Colourings { diagram } => {
            let d = load_diagram(&diagram.pd)?;
            let q = load_quandle(&diagram.quandle)?;
            let cols = d.enumerate_colourings(&q, conv);
            for (i, c) in cols.iter().enumerate() {
                let _ = writeln!(out, "colouring {i}");
                out.push_str(&c.dump());
            }
            let _ = writeln!(out, "count: {}", cols.len());
        }
        Command::Shadow { diagram, base_region, base_colour } => {
            let d = load_diagram(&diagram.pd)?;
            let q = load_quandle(&diagram.quandle)?;
            let mut regions = d.regions()?;
            if let Some(r) = base_region {
                regions = regions.with_base(*r)?;
            }
            let bases: Vec<usize> = match base_colour {
                Some(b) => vec![*b],
                None => (0..q.size()).collect(),
            };
            let mut n = 0;
            for c in d.enumerate_colourings(&q, conv) {
                for &b in &bases {
                    let sc = d.shadow_extend(&regions, &c, b, conv)?;
                    let _ = writeln!(out, "shadow {n}");
                    out.push_str(&sc.dump());
                    n += 1;
                }
            }
            let _ = writeln!(out, "count: {n}");
        }
        Command::Chain2 { diagram } => {
            let d = load_diagram(&diagram.pd)?;
            let q = load_quandle(&diagram.quandle)?;
            for (i, c) in d.enumerate_colourings(&q, conv).iter().enumerate() {
                let _ = writeln!(out, "colouring {i}");
                out.push_str(&d.diagram_chain(c, conv).dump());
            }
        }
        Command::Chain3 { diagram, base_colour } => {
            let d = load_diagram(&diagram.pd)?;
            let q = load_quandle(&diagram.quandle)?;
            let regions = d.regions()?;
            for (i, c) in d.enumerate_colourings(&q, conv).iter().enumerate() {
                let sc = d.shadow_extend(&regions, c, *base_colour, conv)?;
                let _ = writeln!(out, "colouring {i}");
                out.push_str(&d.shadow_chain(&regions, &sc, conv).dump());
            }
        }
        Command::Invariant { kind } => {
            let (diagram, cocycle, edge) = match kind {
                InvariantKind::Phi { diagram, cocycle } => (diagram, cocycle, None),
                InvariantKind::PhiBased { diagram, cocycle, edge } => {
                    (diagram, cocycle, Some(*edge))
                }
            };
            let d = load_diagram(&diagram.pd)?;
            let q = load_quandle(&diagram.quandle)?;
            let (phi3, _) = Cochain::parse(&read(cocycle)?, Theory::Quandle)?;
            let sum = match edge {
                None => phi(&d, &q, &phi3, conv)?,
                Some(e) => phi_based(&d, &q, &phi3, e, conv)?,
            };
            out.push_str(&sum.dump());
        }
        Command::ShadowClass { pd, base_region, base_colour } => {
            let d = load_diagram(pd)?;
            let mut regions = d.regions()?;
            if let Some(r) = base_region {
                regions = regions.with_base(*r)?;
            }
            let base = base_word(&d, base_colour.as_deref())?;
            out.push_str(&fmt_word_chain(&symbolic_shadow_chain(&d, &regions, &base, conv)));
        }
        Command::Pushforward { pd, assignment, base_region, base_colour } => {
            let d = load_diagram(pd)?;
            let mut regions = d.regions()?;
            if let Some(r) = base_region {
                regions = regions.with_base(*r)?;
            }
            let a = WordAssignment::parse(&read(assignment)?)?;
            let base = base_word(&d, base_colour.as_deref())?;
            let sym = symbolic_shadow_chain(&d, &regions, &base, conv);
            out.push_str(&fmt_word_chain(&pushforward(&sym, &a)?));
        }
        Command::VerifyExample { example } => {
            out.push_str(&verify_example(example, conv)?);
        }
        Command::Realize { quandle, chain } => {
            let q = load_quandle(quandle)?;
            let c = Chain::parse(&read(chain)?)?;
            let s = realize(&q, &c)?;
            out.push_str(&s.dump());
        }
        Command::Boundary { quandle, chain } => {
            let q = load_quandle(quandle)?;
            let c = Chain::parse(&read(chain)?)?;
            out.push_str(&c.boundary(&q)?.dump());
        }
        Command::InBoundary { quandle, chain, theory } => {
            let q = load_quandle(quandle)?;
            let c = Chain::parse(&read(chain)?)?;
            let theory = parse_hom_theory(theory)?;
            match in_boundary_image(&q, &c, theory, DEFAULT_SIZE_CAP)? {
                BoundaryCertificate::IsBoundary { witness } => {
                    let _ = writeln!(out, "certificate: boundary");
                    out.push_str(&witness.dump());
                }
                BoundaryCertificate::NotBoundary { obstruction } => {
                    let _ = writeln!(out, "certificate: not-boundary");
                    match obstruction {
                        Obstruction::Cocycle { f, pairing } => {
                            let _ = writeln!(out, "obstruction: cocycle pairing {pairing}");
                            out.push_str(&fmt_functional(&f));
                        }
                        Obstruction::Torsion { f, modulus, residue } => {
                            let _ = writeln!(
                                out,
                                "obstruction: torsion residue {residue} mod {modulus}"
                            );
                            out.push_str(&fmt_functional(&f));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn parse_size(s: &str) -> Result<usize, CliError> {
    s.parse()
        .map_err(|_| CliError::Verify(format!("bad size {s:?}")))
}

fn base_word(d: &OrientedDiagram, spec: Option<&str>) -> Result<ArcWord, CliError> {
    match spec {
        Some(s) => Ok(ArcWord::parse(s)?),
        None => {
            let classes = d.arc_classes();
            let least = classes
                .first()
                .and_then(|c| c.first())
                .copied()
                .ok_or_else(|| CliError::Verify("diagram has no arcs".into()))?;
            Ok(ArcWord::generator(least))
        }
    }
}

fn fmt_functional(f: &Cochain) -> String {
    let mut out = String::new();
    for (t, v) in f.support() {
        let cells: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "f({}) = {v}", cells.join(","));
    }
    out
}

const FIG8_PD: &str = include_str!("../fixtures/fig8.pd");
const K9_37_PD: &str = include_str!("../fixtures/k9_37.pd");
const K10_59_PD: &str = include_str!("../fixtures/k10_59.pd");
const ASG_9_37: &str = include_str!("../fixtures/9_37_to_4_1.asg");
const ASG_10_59: &str = include_str!("../fixtures/10_59_to_4_1.asg");

/// The bundled worked examples: the figure-eight symbolic shadow chain and
/// the two word assignments onto it.
fn verify_example(example: &str, conv: Conventions) -> Result<String, CliError> {
    let mut out = String::new();
    let fig8 = OrientedDiagram::parse_pd(FIG8_PD)?;
    let regions = fig8.regions()?;
    let base = ArcWord::generator(5);
    let sym = symbolic_shadow_chain(&fig8, &regions, &base, conv);
    if example == "4_1" {
        let mut expected = Chain::<ArcWord>::zero(3, Theory::Rack, Ring::Int);
        for (k, t) in [
            (1, [5usize, 7, 5]),
            (-1, [7, 3, 7]),
            (-1, [7, 7, 3]),
            (1, [7, 3, 1]),
        ] {
            expected.add_term(
                t.iter().map(|&g| ArcWord::generator(g)).collect(),
                BigInt::from(k),
            );
        }
        if sym != expected {
            return Err(CliError::Verify("unexpected figure-eight shadow chain".into()));
        }
        let _ = writeln!(out, "ok: shadow chain has the published form");
        let quandle = sym.project_quandle();
        if quandle.num_terms() != 3 {
            return Err(CliError::Verify(
                "quandle projection should drop exactly one degenerate term".into(),
            ));
        }
        let _ = writeln!(out, "ok: quandle projection drops the degenerate term");
        out.push_str(&fmt_word_chain(&sym));
        return Ok(out);
    }
    let (pd_text, asg_text) = match example {
        "9_37" => (K9_37_PD, ASG_9_37),
        "10_59" => (K10_59_PD, ASG_10_59),
        _ => return Err(CliError::Verify(format!("unknown example {example:?}"))),
    };
    let d = OrientedDiagram::parse_pd(pd_text)?;
    let a = WordAssignment::parse(asg_text)?;
    let tests = vec![
        ("z3".to_string(), Quandle::dihedral(3)?),
        ("z5".to_string(), Quandle::dihedral(5)?),
    ];
    let report = check_assignment(&a, &d, &fig8, &tests, conv)?;
    if !report.passed() {
        return Err(CliError::Verify("word assignment fails its relation checks".into()));
    }
    let _ = writeln!(out, "ok: word assignment passes over z3 and z5");
    let src_regions = d.regions()?;
    let src_base = base_word(&d, None)?;
    let pushed = pushforward(&symbolic_shadow_chain(&d, &src_regions, &src_base, conv), &a)?;
    let z5 = Quandle::dihedral(5)?;
    for c in fig8.enumerate_colourings(&z5, conv) {
        let evaled = evaluate_chain(&pushed, &c)?;
        if !evaled.boundary(&z5)?.is_zero() {
            return Err(CliError::Verify("pushforward is not a 3-cycle".into()));
        }
    }
    let _ = writeln!(out, "ok: pushforward evaluates to rack 3-cycles over z5");
    out.push_str(&fmt_word_chain(&pushed));
    Ok(out)
}

/// Interpret CLI failure for the process exit code: usage problems exit 2,
/// domain errors exit 1.
pub fn main_with(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).unwrap()
    }

    #[test]
    fn usage_errors_are_usage_errors() {
        assert!(Cli::try_parse_from(["qhom", "nonsense"]).is_err());
        assert!(Cli::try_parse_from(["qhom", "homology"]).is_err());
    }

    #[test]
    fn verify_examples_run_from_bundled_fixtures() {
        for ex in ["4_1", "9_37", "10_59"] {
            let cli = parse(&["qhom", "verify-example", ex]);
            let out = run(&cli).unwrap();
            assert!(out.contains("ok:"), "{ex}: {out}");
        }
    }

    #[test]
    fn zero_threads_rejected() {
        let cli = parse(&["qhom", "--threads", "0", "verify-example", "4_1"]);
        assert!(run(&cli).is_err());
    }

    #[test]
    fn machine_format_has_header() {
        let cli = parse(&["qhom", "--format", "machine", "verify-example", "4_1"]);
        let out = run(&cli).unwrap();
        assert!(out.starts_with("format: 1\n"));
    }
}
