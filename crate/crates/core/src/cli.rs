//! The `sprouts` command line.
//!
//! Exit codes: 0 on success, 2 on bad input, 3 when a solve ran out of
//! budget (whatever was found is still printed).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::canonical::{canonical_form_with, CanonOptions, CanonicalKey};
use crate::moves::{all_moves, apply_move};
use crate::position::{parse_position, Position, PositionError};
use crate::solver::{
    count_canonical_trees, enumerate_canonical_trees, limit_genus_bound, solve_table, Cell, Outcome, SolveRecord,
    Solver, SolverConfig, TreeStore,
};
use crate::surface::{classify_polygon_word, Surface};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "sprouts", version, about = "Sprouts on compact surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Maximum number of transposition-table entries.
    #[arg(long, env = "SPROUTS_MEMO_LIMIT", default_value_t = 10_000_000, global = true)]
    pub memo_limit: usize,
    /// Time budget per solve, in seconds (0 for none).
    #[arg(long, env = "SPROUTS_TIME_LIMIT", default_value_t = 600.0, global = true)]
    pub time_limit: f64,
    /// Worker threads (0 solves sequentially).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Cap the genus of orientable regions by their lives.
    #[arg(long, global = true)]
    pub clamp: bool,
}

impl Config {
    fn canon(&self) -> CanonOptions {
        CanonOptions { clamp: self.clamp, ..CanonOptions::default() }
    }

    fn solver(&self) -> Solver {
        Solver::new(SolverConfig {
            memo_limit: self.memo_limit,
            time_limit: (self.time_limit > 0.0).then(|| Duration::from_secs_f64(self.time_limit)),
            threads: self.threads,
            canon: self.canon(),
            ..SolverConfig::default()
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Name the surface of a fundamental-polygon word such as `aba'b'`.
    Classify { word: String },
    /// Print the starting position with `p` spots.
    New {
        #[arg(short = 'p', long = "spots")]
        spots: u32,
        #[arg(short = 's', long = "surface", default_value = "S")]
        surface: Surface,
    },
    /// List the canonical forms of the children of a position.
    Children { position: String },
    /// Print the canonical form of a position.
    Canon { position: String },
    /// Compute the nimber and the winner.
    Solve {
        /// Position to solve; alternatively give `-p` and `-s`.
        position: Option<String>,
        #[arg(short = 'p', long = "spots", conflicts_with = "position")]
        spots: Option<u32>,
        #[arg(short = 's', long = "surface", default_value = "S")]
        surface: Surface,
        /// Also list the winning moves (text output).
        #[arg(long)]
        moves: bool,
    },
    /// Nimbers of starting positions, surfaces by spot counts.
    Table {
        /// Spot counts, as `2..4`, `2-4` or `3`.
        #[arg(long, value_parser = parse_range)]
        spots: RangeInclusive<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        surfaces: Vec<Surface>,
    },
    /// Canonical game trees of bounded height.
    Trees {
        #[arg(long)]
        height: u32,
        /// Print only how many there are.
        #[arg(long)]
        count: bool,
    },
    /// Genus beyond which an orientable region stops mattering.
    LimitGenus {
        position: String,
        #[arg(long, default_value_t = 0)]
        region: usize,
    },
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected a spot count or a range like 2..4, got `{text}`");
    let (lo, hi) = match text.split_once("..").or_else(|| text.split_once('-')) {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Reads a position, also accepting canonical keys (which may hold walks
/// the strict grammar rejects).
fn read_position(text: &str) -> Result<Position, PositionError> {
    parse_position(text).or_else(|e| CanonicalKey::from_text(text, CanonOptions::default()).map(|k| k.to_position()).map_err(|_| e))
}

struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(EXIT_INPUT, e.to_string())
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

fn to_csv<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields")
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let cfg = &cli.config;
    let f = cfg.format;
    let ok = |s: String| Ok((s, EXIT_OK));
    match &cli.command {
        Command::Classify { word } => {
            let s = classify_polygon_word(word)?;
            match f {
                Format::Text => ok(format!("{s}\n")),
                Format::Json => ok(to_json(&json!({
                    "word": word,
                    "surface": s,
                    "orientable": s.is_orientable(),
                    "genus": s.genus(),
                    "euler_characteristic": s.euler_characteristic(),
                }))),
                Format::Csv => ok(to_csv(
                    ["word", "surface", "euler_characteristic"],
                    &[[word.clone(), s.to_string(), s.euler_characteristic().to_string()]],
                )),
            }
        }
        Command::New { spots, surface } => {
            let p = Position::initial(*spots, *surface).to_string();
            match f {
                Format::Json => ok(to_json(&json!({ "position": p }))),
                Format::Text | Format::Csv => ok(format!("{p}\n")),
            }
        }
        Command::Children { position } => {
            let p = read_position(position)?;
            let kids: BTreeSet<String> = all_moves(&p)
                .iter()
                .map(|m| canonical_form_with(&apply_move(&p, m).expect("generated moves are legal"), cfg.canon()).into_string())
                .collect();
            let kids: Vec<String> = kids.into_iter().collect();
            match f {
                Format::Json => ok(to_json(&kids)),
                Format::Text | Format::Csv => ok(lines(&kids)),
            }
        }
        Command::Canon { position } => {
            let p = read_position(position)?;
            let key = canonical_form_with(&p, cfg.canon()).into_string();
            match f {
                Format::Json => ok(to_json(&json!({ "position": p.to_string(), "canonical": key }))),
                Format::Text | Format::Csv => ok(format!("{key}\n")),
            }
        }
        Command::Solve { position, spots, surface, moves } => {
            let p = match (position, spots) {
                (Some(text), _) => read_position(text)?,
                (None, Some(n)) => Position::initial(*n, *surface),
                (None, None) => return Err(Failure(EXIT_INPUT, "give a position or -p <spots>".into())),
            };
            let solver = cfg.solver();
            let (outcome, stats) = solver.solve_partial(&p);
            let rec = SolveRecord::new(&p, cfg.canon(), outcome, stats);
            let code = if matches!(outcome, Outcome::Solved(_)) { EXIT_OK } else { EXIT_BUDGET };
            let opt = |v: Option<u32>| v.map_or(String::new(), |n| n.to_string());
            let winner = rec.winner.map_or(String::new(), |w| format!("{w:?}").to_lowercase());
            let text = match f {
                Format::Json => to_json(&rec),
                Format::Csv => to_csv(
                    ["position", "canonical", "nimber", "nimber_lower_bound", "winner", "memo_entries", "nodes"],
                    &[[
                        rec.position.clone(),
                        rec.canonical.clone(),
                        opt(rec.nimber),
                        opt(rec.nimber_lower_bound),
                        winner,
                        rec.stats.memo_entries.to_string(),
                        rec.stats.nodes.to_string(),
                    ]],
                ),
                Format::Text => {
                    let mut s = format!("position  {}\ncanonical {}\n", rec.position, rec.canonical);
                    s += &match outcome {
                        Outcome::Solved(n) => format!("nimber    {n}\n"),
                        Outcome::AtLeast(n) => format!("nimber    >= {n} (budget exceeded)\n"),
                        Outcome::Unknown => "nimber    unknown (budget exceeded)\n".to_string(),
                    };
                    if !winner.is_empty() {
                        s += &format!("winner    {winner}\n");
                    }
                    if *moves && code == EXIT_OK {
                        match solver.winning_moves(&p) {
                            Ok(ms) => {
                                for (m, key) in ms {
                                    s += &format!("move      {m} -> {key}\n");
                                }
                            }
                            Err(_) => return Ok((s, EXIT_BUDGET)),
                        }
                    }
                    s
                }
            };
            Ok((text, code))
        }
        Command::Table { spots, surfaces } => {
            let table = solve_table(&cfg.solver(), spots.clone(), surfaces);
            let code = if table.cells.iter().flatten().all(|c| matches!(c, Cell::Solved(_))) { EXIT_OK } else { EXIT_BUDGET };
            let text = match f {
                Format::Text => table.to_text(),
                Format::Csv => table.to_csv(),
                Format::Json => to_json(&table),
            };
            Ok((text, code))
        }
        Command::Trees { height, count } => {
            if *count {
                let n = count_canonical_trees(*height)?.to_string();
                match f {
                    Format::Json => ok(to_json(&json!({ "height": height, "count": n }))),
                    Format::Text | Format::Csv => ok(format!("{n}\n")),
                }
            } else {
                let mut store = TreeStore::new();
                let trees = enumerate_canonical_trees(&mut store, *height)?;
                let rendered: Vec<String> = trees.iter().map(|&t| store.render(t)).collect();
                match f {
                    Format::Json => ok(to_json(&rendered)),
                    Format::Text | Format::Csv => ok(lines(&rendered)),
                }
            }
        }
        Command::LimitGenus { position, region } => {
            let p = read_position(position)?;
            let r = limit_genus_bound(&p, *region)?;
            match f {
                Format::Json => ok(to_json(&r)),
                Format::Csv => ok(to_csv(["region", "lives", "bound"], &[[r.region.to_string(), r.lives.to_string(), r.bound.to_string()]])),
                Format::Text => ok(format!("{}\n", r.bound)),
            }
        }
    }
}
