use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use tropex_cli::codec::{dec_q, Document};
use tropex_cli::commands::{self, Options, Output, Predicate, DEFAULT_SEED};
use tropex_cli::fixtures;

/// Exact tropical expansions, degenerations and curve counts.
///
/// Every command reads one JSON document (a path, or `-` for standard input) and writes a
/// document or an SVG picture. Exit status: 0 on success, 1 when a check, comparison or
/// gluing fails, 2 on unreadable or unsuitable input.
#[derive(Parser)]
#[command(name = "tropex", version)]
struct Cli {
    /// Seed for random point configurations and genericity perturbations.
    #[arg(long, env = "TROPEX_SEED", default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads that library internals may use; output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    jobs: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a predicate on a complex morphism, expansion, curve family or map family.
    Check {
        input: PathBuf,
        #[arg(long, value_enum)]
        predicate: Predicate,
    },
    /// Make a family of tropical maps transverse by subdividing its base and expanding its target.
    Expand { input: PathBuf },
    /// Describe the special and generic fibers of a degeneration.
    Degenerate { input: PathBuf },
    /// Cut a rigid type into one piece per component of the special fiber.
    Cut { input: PathBuf },
    /// Check that the pieces of a cut agree along every node.
    Glue { input: PathBuf },
    /// Reassemble a glued configuration (or a rigid type) into a family over the base ray.
    Smooth {
        input: PathBuf,
        /// Compare the result with the original family at several heights.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Count rational curves through points, directly or through a degeneration.
    Count {
        input: PathBuf,
        /// Also count in the generic fiber and fail on any disagreement.
        #[arg(long)]
        direct: bool,
        /// Multiply the degeneration total by this rational before comparing (testing aid).
        #[arg(long, hide = true)]
        fault_scale: Option<String>,
    },
    /// Draw a plane fan, fiber, subdivision, curve or count.
    Render {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
    },
    /// Print a named example document, list them, or write them all to a directory.
    Fixture {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        list: bool,
        #[arg(long, conflicts_with_all = ["name", "list"])]
        dir: Option<PathBuf>,
    },
}

fn read_doc(path: &Path) -> anyhow::Result<Document> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(Document::parse(&text)?)
}

fn fixture_output(name: Option<String>, list: bool, dir: Option<PathBuf>, seed: u64) -> anyhow::Result<Output> {
    if list {
        let body: String = fixtures::all().iter().map(|f| format!("{:<32} {:<14} {}\n", f.name, f.kind.name(), f.about)).collect();
        return Ok(Output { body, summary: vec![], ok: true });
    }
    if let Some(dir) = dir {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let all = fixtures::all();
        for f in &all {
            let path = dir.join(format!("{}.json", f.name));
            std::fs::write(&path, f.build(seed).to_text()).with_context(|| format!("writing {}", path.display()))?;
        }
        return Ok(Output { body: String::new(), summary: vec![format!("wrote {} fixtures to {}", all.len(), dir.display())], ok: true });
    }
    let Some(name) = name else { bail!("name a fixture, or pass --list or --dir") };
    let Some(f) = fixtures::get(&name) else { bail!("no fixture named {name:?}; see `tropex fixture --list`") };
    Ok(Output { body: f.build(seed).to_text(), summary: vec![], ok: true })
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    let mut opts = Options { seed: cli.seed, jobs: cli.jobs as usize, fault_scale: None };
    let out = match cli.command {
        Command::Check { input, predicate } => commands::check(&read_doc(&input)?, predicate)?,
        Command::Expand { input } => commands::expand(&read_doc(&input)?)?,
        Command::Degenerate { input } => commands::degenerate(&read_doc(&input)?)?,
        Command::Cut { input } => commands::cut_cmd(&read_doc(&input)?)?,
        Command::Glue { input } => commands::glue_cmd(&read_doc(&input)?)?,
        Command::Smooth { input, roundtrip } => commands::smooth_cmd(&read_doc(&input)?, roundtrip)?,
        Command::Count { input, direct, fault_scale } => {
            if let Some(k) = fault_scale {
                opts.fault_scale = Some(dec_q(&serde_json::Value::String(k))?);
            }
            commands::count(&read_doc(&input)?, direct, &opts)?
        }
        Command::Render { input, format: Format::Svg } => commands::render(&read_doc(&input)?, &opts)?,
        Command::Fixture { name, list, dir } => fixture_output(name, list, dir, cli.seed)?,
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &out.body).with_context(|| format!("writing {}", path.display()))?;
    } else {
        std::io::stdout().write_all(out.body.as_bytes()).context("writing standard output")?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for line in &out.summary {
                eprintln!("{line}");
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
