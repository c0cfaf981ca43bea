use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use knotlike::census::{census, oracle_check, write_csv, Decision};
use knotlike::homology::{check_correct_homology, check_symmetry, HomologyReport, SymmetryResult};
use knotlike::io::{parse_complex, parse_sequence, parse_standard, serialize_complex, ParsedSequence};
use knotlike::realization::{realize_with, ExtensionParams, RealizeOutcome};
use knotlike::render::render_svg;
use knotlike::standard::{build_extended, build_standard};
use knotlike::tunnel::{partial_realize, DecisionOutcome};
use knotlike::BasedComplex;

#[derive(Parser)]
#[command(name = "knotlike", version, about = "Realizability of standard complexes over F2[U,V]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide partial realizability by tunnel filling.
    Decide {
        #[arg(short, long, allow_hyphen_values = true)]
        sequence: String,
        #[arg(long)]
        json: bool,
    },
    /// Build a realization over F2[U,V] and write it as JSON.
    Realize {
        #[arg(short, long, allow_hyphen_values = true)]
        sequence: String,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        n1: Option<u32>,
        #[arg(long)]
        n2: Option<u32>,
        /// Keep the arrow color tags in the document.
        #[arg(long)]
        colors: bool,
    },
    /// Run checks on a complex document.
    Verify {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "d2,degree,homology,symmetry")]
        check: Vec<String>,
    },
    /// Tabulate decisions over all small sequences.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: i64,
        #[arg(long)]
        out: PathBuf,
        /// Cross-check every row against the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Draw a complex document as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Serialize)]
struct JsonArrow {
    from: String,
    to: String,
    u: u32,
    v: u32,
    stage: usize,
    case: knotlike::tunnel::CaseTag,
}

#[derive(Serialize)]
struct JsonObstruction {
    source: String,
    monomial: String,
    target: String,
    reason: knotlike::tunnel::ObstructionReason,
}

#[derive(Serialize)]
struct JsonDecision {
    sequence: String,
    decision: Decision,
    arrows_added: Vec<JsonArrow>,
    obstructions: Vec<JsonObstruction>,
}

fn decide(text: &str, json: bool) -> Result<()> {
    let (label, complex) = match parse_sequence(text)? {
        ParsedSequence::Standard(s) => (s.to_string(), build_standard(&s)),
        ParsedSequence::Extended(e) => (e.to_string(), build_extended(&e)),
    };
    let outcome = partial_realize(&complex)?;
    let c = outcome.complex();
    if json {
        let doc = JsonDecision {
            sequence: label,
            decision: if outcome.is_realizable() { Decision::Realizable } else { Decision::NotRealizable },
            arrows_added: outcome
                .added()
                .iter()
                .map(|e| JsonArrow {
                    from: c.name(e.added.source).into(),
                    to: c.name(e.added.target).into(),
                    u: e.added.monomial.u,
                    v: e.added.monomial.v,
                    stage: e.stage,
                    case: e.case,
                })
                .collect(),
            obstructions: outcome
                .obstructions()
                .iter()
                .map(|o| JsonObstruction {
                    source: c.name(o.cause.source).into(),
                    monomial: o.cause.monomial.to_string(),
                    target: c.name(o.cause.target).into(),
                    reason: o.reason,
                })
                .collect(),
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    match &outcome {
        DecisionOutcome::PartialRealization { added, .. } => {
            println!("REALIZABLE: {} arrows added", added.len());
        }
        DecisionOutcome::NotRealizable { obstructions, .. } => {
            let parts: Vec<String> = obstructions
                .iter()
                .map(|o| format!("d²{} term {} {}", c.name(o.cause.source), o.cause.monomial, c.name(o.cause.target)))
                .collect();
            println!("NOT_REALIZABLE: obstruction at {}", parts.join("; "));
            for o in obstructions {
                println!("  {} at d²{}", o.reason, c.name(o.cause.source));
            }
        }
    }
    for e in outcome.added() {
        println!("  stage {}: added {} ({})", e.stage, c.describe(&e.added), e.case);
    }
    Ok(())
}

fn realize_cmd(text: &str, output: &PathBuf, n1: Option<u32>, n2: Option<u32>, colors: bool) -> Result<()> {
    let seq = parse_standard(text)?;
    let defaults = ExtensionParams::defaults(&seq);
    let params = ExtensionParams { n1: n1.unwrap_or(defaults.n1), n2: n2.unwrap_or(defaults.n2) };
    match realize_with(&seq, params)? {
        RealizeOutcome::Realized(r) => {
            fs::write(output, serialize_complex(&r.complex, colors))
                .with_context(|| format!("writing {}", output.display()))?;
            println!(
                "REALIZED: {} generators, {} arrows, N1={}, N2={}, s={} -> {}",
                r.complex.generator_count(),
                r.complex.arrow_count(),
                r.params.n1,
                r.params.n2,
                r.offset.0,
                output.display()
            );
        }
        RealizeOutcome::NotRealizable(_) => println!("NOT_REALIZABLE: nothing written"),
    }
    Ok(())
}

fn load(file: &PathBuf) -> Result<BasedComplex> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    Ok(parse_complex(&text).with_context(|| format!("parsing {}", file.display()))?)
}

fn describe_report(r: &HomologyReport) -> String {
    format!(
        "{}: free rank {}, free generator grading {}, torsion {:?}",
        r.kill,
        r.free_rank_total,
        r.free_generator_grading.map_or("-".to_string(), |g| g.to_string()),
        r.torsion_orders
    )
}

fn verify(file: &PathBuf, checks: &[String]) -> Result<()> {
    let c = load(file)?;
    for check in checks {
        let (pass, detail) = match check.as_str() {
            "d2" => {
                let bad: usize = c.differential_square().values().map(|t| t.len()).sum();
                (bad == 0, format!("{bad} nonzero terms"))
            }
            "degree" => {
                let r = c.check_degree();
                let names: Vec<String> = r.violations.iter().map(|a| c.describe(a)).collect();
                (r.passed(), if names.is_empty() { "all arrows have degree (-1,-1)".into() } else { names.join(", ") })
            }
            "homology" => {
                let (u, v) = check_correct_homology(&c);
                (u.verdict && v.verdict, format!("{}; {}", describe_report(&u), describe_report(&v)))
            }
            "symmetry" => match check_symmetry(&c) {
                SymmetryResult::Pass { witness } => {
                    let pairs: Vec<String> =
                        c.ids().map(|g| format!("{}->{}", c.name(g), c.name(witness[g.0]))).collect();
                    (true, pairs.join(" "))
                }
                SymmetryResult::Fail => (false, "no based isomorphism to the conjugate".into()),
            },
            other => bail!("unknown check `{other}` (expected d2, degree, homology, symmetry)"),
        };
        println!("{check}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}

fn census_cmd(n: usize, max: i64, out: &PathBuf, oracle: bool) -> Result<()> {
    let rows = census(n, max)?;
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(&rows, &mut w)?;
    w.flush()?;
    let realizable = rows.iter().filter(|r| r.decision == Decision::Realizable).count();
    println!("{} sequences, {} REALIZABLE -> {}", rows.len(), realizable, out.display());
    if oracle {
        let (mismatches, skipped) = oracle_check(&rows)?;
        println!("oracle: {} mismatches, {} rows above the candidate cap", mismatches.len(), skipped);
        for m in &mismatches {
            println!(
                "  {}: algorithm {}, oracle {:?}, witnesses missing forced arrows {}",
                m.sequence,
                m.algorithm.as_str(),
                m.oracle,
                m.witnesses_missing_forced
            );
        }
        if !mismatches.is_empty() {
            bail!("oracle disagrees on {} rows", mismatches.len());
        }
    }
    Ok(())
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Decide { sequence, json } => decide(&sequence, json),
        Command::Realize { sequence, output, n1, n2, colors } => realize_cmd(&sequence, &output, n1, n2, colors),
        Command::Verify { file, check } => verify(&file, &check),
        Command::Census { n, max, out, oracle } => census_cmd(n, max, &out, oracle),
        Command::Render { file, output } => {
            let svg = render_svg(&load(&file)?)?;
            fs::write(&output, svg).with_context(|| format!("writing {}", output.display()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
