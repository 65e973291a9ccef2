use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use plumb::classify::{classify_report, corpus, Family};
use plumb::error::Error;
use plumb::graph::{parse_graph, render_graph, PlumbingGraph};
use plumb::model::{build_model, split_self_intersections, verify_model};
use plumb::obd::{assemble_obd, obd_summary};
use plumb::svg::{emit_profile_svg, emit_region_svg};

#[derive(Parser)]
#[command(name = "plumb", version, about = "Exact computations on negative definite plumbing graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// write the document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// pretty-print JSON
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph file and print the validation report
    Check {
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Build the toric neighborhood model and its verification report
    Build {
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Assemble the horizontal open book
    Obd {
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Classify against the theorem hypotheses and report invariants
    Classify {
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Render the edge regions and the profile contour plot as SVG
    Svg {
        input: PathBuf,
        /// directory for the emitted .svg files (default: current dir)
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// annotate corners and subregions
        #[arg(long)]
        labels: bool,
    },
    /// Emit a graph from a named example family
    Corpus {
        #[command(subcommand)]
        family: FamilyCmd,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Linear chain; self-intersections comma-separated, e.g. "-2,-2"
    Chain {
        #[arg(allow_hyphen_values = true)]
        selfints: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain (-(p+2), -2, ..., -2) with p-1 vertices
    RationalBlowdown {
        p: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Central vertex with chain legs
    Star {
        #[arg(long, allow_hyphen_values = true)]
        center: i64,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// repeatable; each leg is a comma-separated chain, e.g. --leg -2,-2
        #[arg(long, allow_hyphen_values = true)]
        leg: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seed-deterministic negative definite graph
    Random {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let color = use_color();
            let prefix = if matches!(err, Error::Internal(_)) {
                if color {
                    "\x1b[31minternal error\x1b[0m"
                } else {
                    "internal error"
                }
            } else if color {
                "\x1b[31merror\x1b[0m"
            } else {
                "error"
            };
            if let Error::Internal(_) = err {
                eprintln!("{prefix}: {err}");
                eprintln!("this indicates a bug or a falsified construction identity");
                ExitCode::from(2)
            } else {
                eprintln!("{prefix}: {err}");
                ExitCode::from(1)
            }
        }
    }
}

fn use_color() -> bool {
    match std::env::var("PLUMB_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn read_graph(path: &Path) -> Result<PlumbingGraph, Error> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text)
}

fn emit_json<T: Serialize>(doc: &T, output: &OutputOpts) -> Result<(), Error> {
    let json = if output.pretty {
        serde_json::to_string_pretty(doc)
    } else {
        serde_json::to_string(doc)
    }
    .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    write_text(&json, output.out.as_deref())
}

fn write_text(content: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, content.as_bytes())?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Check { input, output } => {
            let g = read_graph(&input)?;
            emit_json(&g.validate(), &output)
        }
        Command::Build { input, output } => {
            let g = read_graph(&input)?;
            let model = build_model(&g)?;
            let report = verify_model(&model);
            #[derive(Serialize)]
            struct BuildDoc<'a> {
                model: &'a plumb::model::NeighborhoodModel,
                report: &'a plumb::model::ModelReport,
            }
            emit_json(
                &BuildDoc {
                    model: &model,
                    report: &report,
                },
                &output,
            )?;
            if !report.ok {
                return Err(Error::Internal(
                    "model verification failed; see report".into(),
                ));
            }
            Ok(())
        }
        Command::Obd { input, output } => {
            let g = read_graph(&input)?;
            let split = split_self_intersections(&g)?;
            let obd = assemble_obd(&g, &split)?;
            let summary = obd_summary(&g, &obd);
            #[derive(Serialize)]
            struct ObdDoc<'a> {
                obd: &'a plumb::obd::HorizontalOBD,
                summary: &'a plumb::obd::ObdSummary,
            }
            emit_json(
                &ObdDoc {
                    obd: &obd,
                    summary: &summary,
                },
                &output,
            )
        }
        Command::Classify { input, output } => {
            let g = read_graph(&input)?;
            emit_json(&classify_report(&g)?, &output)
        }
        Command::Svg { input, out, labels } => {
            let g = read_graph(&input)?;
            let model = build_model(&g)?;
            fs::create_dir_all(&out)?;
            for region in &model.regions {
                let svg = emit_region_svg(region, labels);
                let path = out.join(format!("region_{}.svg", region.edge));
                fs::write(&path, svg.as_bytes())?;
                eprintln!("wrote {}", path.display());
            }
            let profile = emit_profile_svg(&model.constants);
            let path = out.join("profile.svg");
            fs::write(&path, profile.as_bytes())?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Corpus { family } => {
            let (graph, out) = match family {
                FamilyCmd::Chain { selfints, out } => {
                    (corpus(&Family::Chain(parse_int_list(&selfints)?))?, out)
                }
                FamilyCmd::RationalBlowdown { p, out } => {
                    (corpus(&Family::RationalBlowdown(p))?, out)
                }
                FamilyCmd::Star {
                    center,
                    genus,
                    leg,
                    out,
                } => {
                    let legs = leg
                        .iter()
                        .map(|l| parse_int_list(l))
                        .collect::<Result<Vec<_>, _>>()?;
                    (
                        corpus(&Family::Star {
                            center_self: center,
                            center_genus: genus,
                            legs,
                        })?,
                        out,
                    )
                }
                FamilyCmd::Random { n, seed, out } => {
                    (corpus(&Family::Random { n, seed })?, out)
                }
            };
            write_text(&render_graph(&graph), out.as_deref())
        }
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad integer `{part}`")))
        })
        .collect()
}
