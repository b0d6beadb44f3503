//! `ribtor`: ribbon graphs, break divisors, and the Bernardi and
//! rotor-routing torsors from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ribbon_torsor::catalog::{audit_pointed_bowtie, audit_rounded_bowtie, catalog, standard_names, Calibration};
use ribbon_torsor::format::{parse, to_text};
use ribbon_torsor::report::{
    ActionReport, ActionRequest, GenusReport, PicardReport, TreesReport, WitnessReport, WitnessRequest,
};
use ribbon_torsor::ribbon_graph::{RibbonGraph, VertexId};
use ribbon_torsor::torsor::{base_report, scan_bases, ActionKind, AgreementReport, BaseActions, BaseReport};
use ribbon_torsor::trees::enumerate_trees;

#[derive(Parser, Debug)]
#[command(name = "ribtor", version, about = "Bernardi and rotor-routing torsors on ribbon graphs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Read the ribbon graph from FILE.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "catalog")]
    file: Option<PathBuf>,
    /// Use a named catalog graph (see `ribtor catalog`).
    #[arg(long, global = true, value_name = "NAME")]
    catalog: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Graph file; an alternative to --file.
    #[arg(value_name = "FILE")]
    path: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus of the surface the rotation system defines.
    Genus(Source),
    /// Spanning trees in canonical order.
    Trees {
        #[command(flatten)]
        source: Source,
        /// Print only the number of trees.
        #[arg(long)]
        count: bool,
    },
    /// Invariant factors of the degree-zero Picard group.
    Picard(Source),
    /// Permutation of the class (generator) - (base) under one action.
    Action {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        base: String,
        #[arg(long)]
        generator: String,
        /// Starting edge of the Bernardi tour (defaults to the first at base).
        #[arg(long)]
        edge: Option<String>,
        /// 1-based tree index whose image to show.
        #[arg(long)]
        tree: Option<usize>,
        /// Print the rotor-routing steps for --tree.
        #[arg(long, requires = "tree")]
        trace: bool,
    },
    /// Compare the two actions at one or every base vertex.
    Compare {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "all_bases")]
        base: Option<String>,
        #[arg(long)]
        all_bases: bool,
    },
    /// Nonseparating cycles, witness pairs, and the disagreement construction.
    Witness {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        proper: bool,
        #[arg(long)]
        tight: bool,
        #[arg(long)]
        construct: bool,
    },
    /// List catalog graphs, print one (with --catalog), or audit the bowtie
    /// rotations.
    Catalog {
        #[arg(long)]
        calibrate: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Bernardi,
    Rotor,
}

impl From<Kind> for ActionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Bernardi => ActionKind::Bernardi,
            Kind::Rotor => ActionKind::Rotor,
        }
    }
}

#[derive(Debug)]
enum Failure {
    /// Bad input: unreadable file, parse error, unknown names.
    Usage(String),
    /// A well-formed request with a negative answer.
    Domain(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(cli: &Cli, source: &Source) -> Result<RibbonGraph, Failure> {
    let path = source.path.as_ref().or(cli.file.as_ref());
    match (path, &cli.catalog) {
        (Some(_), Some(_)) => Err(usage("give either a graph file or --catalog, not both")),
        (Some(p), None) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            parse(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
        (None, Some(name)) => catalog(name).map(|c| c.graph).map_err(usage),
        (None, None) => Err(usage("no graph given: pass FILE, --file FILE or --catalog NAME")),
    }
}

fn vertex(g: &RibbonGraph, name: &str) -> Result<VertexId, Failure> {
    g.vertex_by_name(name).map_err(usage)
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn render<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce(&T) -> String) -> String {
    if cli.json {
        json(value)
    } else {
        text(value)
    }
}

fn base_text(r: &BaseReport) -> String {
    let mut out = String::new();
    match &r.witness {
        None => {
            let _ = writeln!(out, "base {}: agree", r.vertex);
        }
        Some(w) => {
            let _ = writeln!(
                out,
                "base {}: disagree (generator {}, tree {}: rotor {}, bernardi {})",
                r.vertex, w.generator, w.tree, w.rotor_image, w.bernardi_image
            );
        }
    }
    for d in &r.differences {
        let _ = writeln!(out, "  ({}) - ({}): {} {:?}", d.generator, r.vertex, d.cycles, d.cycle_type);
    }
    out
}

fn agreement_text(r: &AgreementReport) -> String {
    let mut out = format!("genus {}, {} trees\n", r.genus, r.trees);
    for b in &r.bases {
        out.push_str(&base_text(b));
    }
    let _ = writeln!(out, "bernardi base-independent: {}", r.bernardi_base_independent);
    let _ = writeln!(out, "rotor base-independent: {}", r.rotor_base_independent);
    out
}

fn calibration_text(c: &Calibration) -> String {
    let mut out = format!("{}: cyclic orders at {}\n", c.graph, c.vertex);
    for cand in &c.candidates {
        let _ = writeln!(
            out,
            "  [{}] ({}) genus {}{}",
            cand.index,
            cand.rotation.join(", "),
            cand.genus,
            if cand.satisfies { "  satisfies all claims" } else { "" }
        );
        for check in cand.checks.iter().filter(|_| cand.genus > 0) {
            let _ = writeln!(
                out,
                "      {} {}{}",
                if check.holds { "yes" } else { "no " },
                check.claim,
                if check.essential { "" } else { " (non-essential)" }
            );
        }
    }
    match (c.selected, c.essential) {
        (Some(k), _) => {
            let _ = writeln!(out, "  selected [{k}]");
        }
        (None, Some(k)) => {
            let _ = writeln!(out, "  no rotation satisfies every claim; serving [{k}], which satisfies the essential ones");
        }
        (None, None) => {
            let _ = writeln!(out, "  no rotation satisfies the essential claims");
        }
    }
    out
}

#[derive(Serialize)]
struct CatalogListing {
    name: String,
    planar: bool,
    genus: usize,
    note: String,
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Genus(source) => {
            let g = load(cli, source)?;
            Ok(render(cli, &GenusReport::new(&g), GenusReport::text))
        }
        Command::Trees { source, count } => {
            let g = load(cli, source)?;
            let trees = enumerate_trees(&g);
            if *count {
                return Ok(if cli.json {
                    json(&serde_json::json!({ "count": trees.len() }))
                } else {
                    format!("{}\n", trees.len())
                });
            }
            Ok(render(cli, &TreesReport::new(&g, &trees), TreesReport::text))
        }
        Command::Picard(source) => {
            let g = load(cli, source)?;
            Ok(render(cli, &PicardReport::new(&g), PicardReport::text))
        }
        Command::Action {
            source,
            kind,
            base,
            generator,
            edge,
            tree,
            trace,
        } => {
            let g = load(cli, source)?;
            let trees = enumerate_trees(&g);
            let edge = edge.as_deref().map(|e| g.edge_by_name(e)).transpose().map_err(usage)?;
            if edge.is_some() && matches!(kind, Kind::Rotor) {
                return Err(usage("--edge applies to the bernardi action only"));
            }
            let tree = match tree {
                Some(0) => return Err(usage("tree indices start at 1")),
                Some(i) if *i > trees.len() => {
                    return Err(usage(format!("tree index {i} out of range 1..={}", trees.len())))
                }
                Some(i) => Some(i - 1),
                None => None,
            };
            let req = ActionRequest {
                kind: (*kind).into(),
                base: vertex(&g, base)?,
                generator: vertex(&g, generator)?,
                edge,
                tree,
                trace: *trace,
            };
            let r = ActionReport::new(&g, &trees, req).map_err(usage)?;
            Ok(render(cli, &r, ActionReport::text))
        }
        Command::Compare { source, base, .. } => {
            let g = load(cli, source)?;
            let trees = enumerate_trees(&g);
            match base {
                Some(name) => {
                    let q = vertex(&g, name)?;
                    let r = base_report(&g, &BaseActions::new(&g, &trees, q), q);
                    Ok(render(cli, &r, base_text))
                }
                None => Ok(render(cli, &scan_bases(&g, &trees), agreement_text)),
            }
        }
        Command::Witness {
            source,
            proper,
            tight,
            construct,
        } => {
            let g = load(cli, source)?;
            let trees = enumerate_trees(&g);
            let all = !(*proper || *tight || *construct);
            let req = WitnessRequest {
                proper: *proper || all,
                tight: *tight || all,
                construct: *construct,
            };
            let r = WitnessReport::new(&g, &trees, req).map_err(|e| Failure::Domain(e.to_string()))?;
            if *proper && r.proper.is_none() {
                return Err(Failure::Domain("no proper witness pair".into()));
            }
            if *tight && r.tight.is_none() {
                return Err(Failure::Domain("no tight witness pair".into()));
            }
            Ok(render(cli, &r, WitnessReport::text))
        }
        Command::Catalog { calibrate } => {
            if *calibrate {
                let audits = [audit_rounded_bowtie(), audit_pointed_bowtie()];
                let out = if cli.json {
                    json(&audits)
                } else {
                    audits.iter().map(calibration_text).collect()
                };
                if let Some(bad) = audits.iter().find(|a| a.selected.is_none()) {
                    print!("{out}");
                    return Err(Failure::Domain(format!(
                        "calibration failed for `{}`: no rotation satisfies every claim",
                        bad.graph
                    )));
                }
                return Ok(out);
            }
            if let Some(name) = &cli.catalog {
                let entry = catalog(name).map_err(usage)?;
                return Ok(if cli.json {
                    json(&CatalogListing {
                        name: entry.name,
                        planar: entry.planar,
                        genus: entry.graph.genus(),
                        note: entry.note,
                    })
                } else {
                    format!("# {}: {}\n{}", entry.name, entry.note, to_text(&entry.graph))
                });
            }
            let listing: Vec<CatalogListing> = standard_names()
                .into_iter()
                .map(|n| {
                    let e = catalog(&n).expect("standard name");
                    CatalogListing {
                        genus: e.graph.genus(),
                        name: e.name,
                        planar: e.planar,
                        note: e.note,
                    }
                })
                .collect();
            Ok(render(cli, &listing, |l| {
                l.iter()
                    .map(|e| format!("{:<16} genus {}  {}\n", e.name, e.genus, e.note))
                    .collect()
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
