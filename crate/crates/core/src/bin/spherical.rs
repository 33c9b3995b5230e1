use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use spherical::dl::{Element, LoopBound};
use spherical::expr::parse_class;
use spherical::facts::FactsFile;
use spherical::loopspace::{enumerate_basis, max_suspension, suspend, BasisQuery, SuspensionDepth};
use spherical::nishida::{is_a_annihilated, sq_dual, Annihilation};
use spherical::pipeline::{enumerate_candidates, run_elimination, Status};
use spherical::tables::{emit_table, Format, TableKind};

#[derive(Parser)]
#[command(name = "spherical", about = "Spherical classes in the homology of iterated loop spaces of spheres")]
struct Cli {
    /// Report discrepancy footnotes without failing (exit 0 instead of 3).
    #[arg(long, global = true)]
    warn_only: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List polynomial generators up to a dimension.
    Basis {
        /// Loop bound; `inf` for QS^n.
        #[arg(long)]
        l: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_dim: u32,
    },
    /// Apply the dual operation Sq^r_* to a class.
    Sq {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        class: String,
    },
    /// Test whether a class is killed by every dual Steenrod square.
    Annihilated {
        #[arg(long)]
        class: String,
    },
    /// Iterated homology suspension; `--steps 0` reports the maximal one.
    Suspend {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 1)]
        steps: u32,
    },
    /// List candidate sequences at a loop bound.
    Candidates {
        #[arg(long)]
        l: u32,
    },
    /// Run the elimination passes over a range of n.
    Eliminate {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n_from: u32,
        #[arg(long)]
        n_to: u32,
        /// Facts file; the built-in defaults are used when omitted.
        #[arg(long)]
        facts: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Regenerate a table.
    Table {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long, default_value_t = 8)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        n_from: u32,
        #[arg(long, default_value_t = 32)]
        n_to: u32,
    },
    /// Print the built-in facts file.
    Facts,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lemma81,
    Degenerate43,
    #[value(name = "mod4-44")]
    Mod4_44,
    Nondegenerate45,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
    Latex,
}

fn parse_loop_bound(s: &str) -> Result<LoopBound> {
    match s {
        "inf" | "infinity" | "INFINITY" => Ok(LoopBound::Infinite),
        _ => Ok(LoopBound::Finite(s.parse().with_context(|| format!("bad loop bound {s}"))?)),
    }
}

fn class(text: &str) -> Result<Element> {
    parse_class(text).with_context(|| format!("parsing class {text:?}"))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Basis { l, n, max_dim } => {
            let q = BasisQuery::new(parse_loop_bound(&l)?, n, max_dim)?;
            for w in enumerate_basis(&q) {
                println!("{}\t{}", w.dim(n), w.display(n));
            }
        }
        Cmd::Sq { r, class: c } => println!("{}", sq_dual(r, &class(&c)?)),
        Cmd::Annihilated { class: c } => match is_a_annihilated(&class(&c)?)? {
            Annihilation::Annihilated => println!("annihilated"),
            Annihilation::Witness { r, image } => println!("not annihilated: Sq^{r}_* -> {image}"),
        },
        Cmd::Suspend { class: c, steps } => {
            let e = class(&c)?;
            if steps == 0 {
                let m = max_suspension(&e);
                match m.depth {
                    SuspensionDepth::Stable => println!("STABLE\t{}", m.image),
                    SuspensionDepth::Finite(j) => println!("{j}\t{}", m.image),
                }
            } else {
                println!("{}", suspend(&e, steps));
            }
        }
        Cmd::Candidates { l } => {
            for c in enumerate_candidates(l)? {
                println!("{}{}", c.label(), if c.extra { "\tEXTRA" } else { "" });
            }
        }
        Cmd::Eliminate { l, n_from, n_to, facts, json } => {
            let facts = match facts {
                Some(p) => FactsFile::load(&p)?,
                None => FactsFile::default(),
            };
            let report = run_elimination(l, n_from, n_to, &facts)?;
            if json {
                println!("{}", report.to_json());
            } else {
                for r in &report.rows {
                    let pass = r.verdict.pass.map(|p| format!("{p:?}")).unwrap_or_else(|| "-".into());
                    let status = serde_json::to_value(r.verdict.status)?;
                    println!(
                        "n={}\t{}\t{}\t{}\t{}",
                        r.n,
                        if r.j.is_empty() && r.dim == r.n { "bottom".to_string() } else { fmt_seq(&r.j) },
                        r.class,
                        status.as_str().unwrap_or_default(),
                        pass
                    );
                }
            }
            if report.count(Status::Unresolved) > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Table { kind, format, l, n_from, n_to } => {
            let kind = match kind {
                KindArg::Lemma81 => TableKind::Lemma81,
                KindArg::Degenerate43 => TableKind::Degenerate43,
                KindArg::Mod4_44 => TableKind::Mod4,
                KindArg::Nondegenerate45 => TableKind::Nondegenerate,
            };
            let format = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
                FormatArg::Latex => Format::Latex,
            };
            if n_from == 0 || n_from >= n_to {
                bail!("table sweeps need 0 < n-from < n-to");
            }
            let out = emit_table(kind, format, l, n_from..=n_to)?;
            print!("{}", out.document);
            if out.has_discrepancies && !cli.warn_only {
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::Facts => println!("{}", FactsFile::default().to_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_seq(j: &[u32]) -> String {
    let parts: Vec<String> = j.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
