//! Command-line surface.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
//! 3 size guard exceeded, 4 a check was violated or a certificate failed.

use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::io::{
    compose_records, map_records, parse_with, report_human, report_records, space_records, tree_records, Document,
    Format, ParseOptions, RecordSet,
};
use crate::mapcalc::FiniteMap;
use crate::miner::{enumerate_spaces, mine, verify_suite, EnumerationTask, MineBounds, Pattern, Sampler};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "scatcont", version, about = "Scattered continuity and weak discontinuity on finite and tree spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "records", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect the spaces of a document.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Analyse finite maps.
    #[command(subcommand)]
    Map(MapCommand),
    /// Analyse threshold maps and stable sequences on tree spaces.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Check every statement on all small spaces and maps.
    Verify(VerifyArgs),
    /// Search small instances for a pattern.
    Mine(MineArgs),
    /// Enumerate small spaces.
    #[command(subcommand)]
    Enum(EnumCommand),
}

#[derive(Subcommand, Debug)]
enum SpaceCommand {
    /// Validate a document and report the properties of its spaces.
    Check {
        file: String,
        /// Close `le` relations transitively instead of rejecting them.
        #[arg(long)]
        close: bool,
    },
}

#[derive(Subcommand, Debug)]
enum MapCommand {
    /// Series, decompositions, witnesses and checks for each map; `FILE#name`
    /// selects one map.
    Report {
        file: String,
        #[arg(long)]
        close: bool,
    },
    /// Compose `F: X -> Y` with `G: Y -> Z`; each is `FILE` or `FILE#name`.
    Compose {
        f: String,
        g: String,
        /// Also evaluate the composition bounds.
        #[arg(long)]
        bounds: bool,
        #[arg(long)]
        close: bool,
    },
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// Series, covers and certificates for each tree map and sequence.
    Report {
        file: String,
        /// Depth of the truncated model used to re-verify results.
        #[arg(long)]
        truncate: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_x: usize,
    #[arg(long)]
    max_y: usize,
    /// Codomain bound of the second map in composable pairs (default: max-y).
    #[arg(long)]
    max_z: Option<usize>,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// Also check randomly drawn maps, seeded by this value.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 6)]
    sample_max_points: usize,
    #[arg(long)]
    up_to_iso: bool,
}

#[derive(Args, Debug)]
struct MineArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    max_x: usize,
    #[arg(long)]
    max_y: usize,
    #[arg(long)]
    max_z: Option<usize>,
    #[arg(long)]
    regular_middle_only: bool,
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum EnumCommand {
    /// List every topology on `n` points.
    Spaces {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        up_to_iso: bool,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Split `path#name`.
fn split_ref(arg: &str) -> (&str, Option<&str>) {
    match arg.rsplit_once('#') {
        Some((path, name)) if !name.is_empty() => (path, Some(name)),
        _ => (arg, None),
    }
}

fn load(path: &str, close: bool) -> Result<Document, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_string(), message: e.to_string() })?;
    parse_with(&text, ParseOptions { close }).map_err(|source| Error::Parse { path: path.to_string(), source })
}

fn load_map(arg: &str, close: bool) -> Result<FiniteMap, Error> {
    let (path, name) = split_ref(arg);
    let doc = load(path, close)?;
    let maps: Vec<_> = doc.maps().collect();
    match name {
        Some(n) => doc.map(n).cloned().ok_or_else(|| Error::Input(format!("{path}: no map named `{n}`"))),
        None if maps.len() == 1 => Ok(maps[0].1.clone()),
        None => Err(Error::Input(format!("{path}: expected exactly one map, found {}; use FILE#name", maps.len()))),
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

fn rendered(rs: RecordSet, format: Format, ok: bool) -> Outcome {
    Outcome { text: rs.render(format), ok }
}

fn execute(cli: Cli) -> Result<Outcome, Error> {
    let format = cli.format;
    match cli.command {
        Command::Space(SpaceCommand::Check { file, close }) => {
            let doc = load(&file, close)?;
            let mut rs = RecordSet::default();
            for (name, space) in doc.spaces() {
                rs.extend(space_records(name, space));
            }
            let kinds: Vec<_> = doc.blocks.iter().map(|b| b.kind()).collect();
            rs.push("document", [("blocks", doc.blocks.len().to_string()), ("kinds", kinds.join(","))]);
            Ok(rendered(rs, format, true))
        }
        Command::Map(MapCommand::Report { file, close }) => {
            let (path, name) = split_ref(&file);
            let doc = load(path, close)?;
            let mut rs = RecordSet::default();
            let mut ok = true;
            let selected: Vec<_> = doc.maps().filter(|(n, _)| name.is_none_or(|want| want == *n)).collect();
            if selected.is_empty() {
                return Err(Error::Input(format!("{path}: no matching map")));
            }
            for (n, f) in selected {
                let (r, good) = map_records(&doc, n, f)?;
                rs.extend(r);
                ok &= good;
            }
            Ok(rendered(rs, format, ok))
        }
        Command::Map(MapCommand::Compose { f, g, bounds, close }) => {
            let (f, g) = (load_map(&f, close)?, load_map(&g, close)?);
            let (mut rs, ok) = compose_records(&f, &g)?;
            if !bounds {
                rs.records.retain(|r| r.tag != "check");
            }
            Ok(rendered(rs, format, ok || !bounds))
        }
        Command::Tree(TreeCommand::Report { file, truncate }) => {
            let doc = load(&file, false)?;
            if doc.treemaps().next().is_none() && doc.sequences().next().is_none() {
                return Err(Error::Input(format!("{file}: no treemap or sequence blocks")));
            }
            let (rs, ok) = tree_records(&doc, truncate)?;
            Ok(rendered(rs, format, ok))
        }
        Command::Verify(a) => {
            let task = EnumerationTask {
                max_x: a.max_x,
                max_y: a.max_y,
                max_z: a.max_z.unwrap_or(a.max_y),
                up_to_iso: a.up_to_iso,
                sampler: a.seed.map(|seed| Sampler { seed, count: a.samples, max_points: a.sample_max_points }),
            };
            let report = verify_suite(&task, a.jobs)?;
            let text = match format {
                Format::Records => report_records(&report).lines(),
                Format::Human => report_human(&report),
            };
            Ok(Outcome { text, ok: !report.has_violations() })
        }
        Command::Mine(a) => {
            let pattern: Pattern = a.pattern.parse().map_err(|e: crate::miner::MinerError| Error::Usage(e.to_string()))?;
            let bounds = MineBounds {
                max_x: a.max_x,
                max_y: a.max_y,
                max_z: a.max_z.unwrap_or(a.max_y),
                regular_middle_only: a.regular_middle_only,
            };
            let report = mine(pattern, &bounds, a.jobs)?;
            let text = match format {
                Format::Records => report_records(&report).lines(),
                Format::Human => report_human(&report),
            };
            Ok(Outcome { text, ok: !report.has_violations() })
        }
        Command::Enum(EnumCommand::Spaces { n, up_to_iso }) => {
            let e = enumerate_spaces(n, up_to_iso)?;
            let mut rs = RecordSet::default();
            for (i, s) in e.spaces.iter().enumerate() {
                let w = e.spaces.len().to_string().len();
                rs.push("space", [("index", format!("{i:0w$}")), ("space", s.to_string())]);
            }
            rs.push(
                "count",
                [
                    ("n", n.to_string()),
                    ("up-to-iso", up_to_iso.to_string()),
                    ("listed", e.spaces.len().to_string()),
                    ("labeled", e.labeled_count.to_string()),
                ],
            );
            Ok(rendered(rs, format, true))
        }
    }
}

/// Run the command line on `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return 2;
            }
            if outcome.ok {
                0
            } else {
                let _ = writeln!(err, "scatcont: a check was violated or a certificate failed");
                4
            }
        }
        Err(e) => {
            let _ = writeln!(err, "scatcont: {e}");
            e.exit_code()
        }
    }
}
