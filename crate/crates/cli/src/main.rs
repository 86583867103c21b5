//! `prgraph`: command-line front end for prgraph-core.

mod groups;
mod output;

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use prgraph_core::dsl;
use prgraph_core::group::FiniteBackend;
use prgraph_core::prp::{self, append_trivial, ball, components_finite, BallOptions, DEFAULT_BUDGET};
use prgraph_core::schreier::{
    build_certificate, growth_report, rw_speed, spanning_walk, verify_certificate, Certificate, SchreierGraph,
    WalkOptions, DEFAULT_MAX_SCHREIER_LEVEL, MAX_BRUTE_FORCE,
};
use prgraph_core::tree::Order;
use prgraph_core::witness::{self, WitnessReport};
use prgraph_core::{Bits, GrigorchukGroup, Letter, OmegaSequence, TreeWord};

use groups::{GroupArgs, Source, TupleSyntax};
use output::{Format, Out};

/// Exit status for a verification that ran and failed.
const EXIT_INVALID: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "prgraph",
    version,
    about = "Grigorchuk groups, product replacement graphs and growth certificates"
)]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest tree level any command may build
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SCHREIER_LEVEL)]
    max_level: usize,
    /// Vertex budget for ball explorations
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Word operations in a tree group
    #[command(subcommand)]
    Element(ElementCmd),
    /// Rigid-stabilizer witnesses
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Schreier graph of a level
    Schreier(SchreierArgs),
    /// Depth-first spanning walk of a level
    Walk(WalkArgs),
    /// Growth certificates
    #[command(subcommand)]
    Cert(CertCmd),
    /// Product replacement graphs
    #[command(subcommand)]
    Prp(PrpCmd),
    /// Random walk distances in a product replacement graph
    RwSpeed(RwSpeedArgs),
    /// Group description files
    #[command(subcommand)]
    Parse(ParseCmd),
}

#[derive(Subcommand, Debug)]
enum ElementCmd {
    /// Free reduction of a word
    Reduce {
        word: String,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Image of a binary string
    Act {
        word: String,
        string: String,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Order, found by repeated squaring up to `2^cap`
    Order {
        word: String,
        #[arg(long, default_value_t = 32)]
        cap: u32,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// First-level sections
    Sections {
        word: String,
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// `t_m` for the first Grigorchuk group
    Classical {
        #[arg(long)]
        m: usize,
    },
    /// `t` for a non-constant ω
    General {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        n: usize,
    },
    /// General witnesses for several ω and a range of levels
    Sweep {
        /// Comma-separated ω list
        #[arg(long, default_value = "dcb,db,dc,bcd")]
        omegas: String,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 6)]
        to: usize,
    },
}

#[derive(Args, Debug)]
struct SchreierArgs {
    #[arg(long)]
    m: usize,
    /// Generators, comma-separated words
    #[arg(long, default_value = "a,b,c,d")]
    gens: String,
    #[command(flatten)]
    group: GroupArgs,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long)]
    m: usize,
    /// Start vertex (default 1^m)
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value = "a,b,c,d")]
    gens: String,
    #[command(flatten)]
    group: GroupArgs,
}

#[derive(Subcommand, Debug)]
enum CertCmd {
    Build {
        #[arg(long, default_value = "dcb")]
        omega: String,
        #[arg(long)]
        m: usize,
        /// Base tuple letters
        #[arg(long, default_value = "abcd")]
        base: String,
    },
    /// Check a certificate from FILE or standard input
    Verify { file: Option<PathBuf> },
}

#[derive(Args, Debug)]
struct TupleArgs {
    /// Start tuple, entries separated by `;` (coordinates by `,`)
    #[arg(long)]
    tuple: Option<String>,
    /// Append this many identity entries
    #[arg(long, default_value_t = 0)]
    pad: usize,
}

#[derive(Subcommand, Debug)]
enum PrpCmd {
    /// Breadth-first ball around a tuple
    Ball {
        #[arg(long)]
        radius: usize,
        /// Also report `|B(r)|^{1/r}` on these comma-separated radii
        #[arg(long)]
        growth: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[command(flatten)]
        tuple: TupleArgs,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Connected components among generating tuples of a finite group
    Components {
        /// Tuple length (default: the group rank)
        #[arg(long)]
        tuple_len: Option<usize>,
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Args, Debug)]
struct RwSpeedArgs {
    #[arg(long, default_value_t = 40)]
    steps: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Radius of the ball used to measure distances
    #[arg(long, default_value_t = 10)]
    radius: usize,
    #[command(flatten)]
    tuple: TupleArgs,
    #[command(flatten)]
    group: GroupArgs,
}

#[derive(Subcommand, Debug)]
enum ParseCmd {
    /// Validate a .grp file and print it in canonical form
    Check { file: PathBuf },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Invalid,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Invalid) => ExitCode::from(EXIT_INVALID),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    if cli.budget == 0 || cli.max_level == 0 {
        bail!("budgets must be positive");
    }
    match &cli.command {
        Command::Element(cmd) => element(cli, cmd),
        Command::Witness(cmd) => witness_cmd(cli, cmd),
        Command::Schreier(a) => schreier(cli, a),
        Command::Walk(a) => walk(cli, a),
        Command::Cert(cmd) => cert(cli, cmd),
        Command::Prp(cmd) => prp_cmd(cli, cmd),
        Command::RwSpeed(a) => rw(cli, a),
        Command::Parse(ParseCmd::Check { file }) => parse_check(cli, file),
    }
}

fn out(cli: &Cli, group: &str) -> Out {
    Out::new(cli.format, group, cli.seed, cli.max_level, cli.budget, MAX_BRUTE_FORCE)
}

fn element(cli: &Cli, cmd: &ElementCmd) -> Result<Verdict> {
    match cmd {
        ElementCmd::Reduce { word, group } => {
            let mut o = out(cli, &group.describe());
            group.tree()?;
            let w = TreeWord::parse(word, 0)?;
            o.table("input,reduced,length", &[format!("{word},{w},{}", w.len())]);
            o.record(&serde_json::json!({ "input": word, "reduced": w.to_string(), "length": w.len() }));
            o.finish()
        }
        ElementCmd::Act { word, string, group } => {
            let mut o = out(cli, &group.describe());
            let s: Bits = string.parse()?;
            let image = match group.source()? {
                Source::Tree(g) => g.act(&TreeWord::parse(word, 0)?, &s),
                Source::Mealy(m) => m.act(&m.parse_word(word)?, &s)?,
                _ => bail!("element act needs a tree group"),
            };
            o.table("word,string,image", &[format!("{word},{s},{image}")]);
            o.record(&serde_json::json!({ "word": word, "string": s.to_string(), "image": image.to_string() }));
            o.finish()
        }
        ElementCmd::Order { word, cap, group } => {
            let mut o = out(cli, &group.describe());
            let g = group.tree()?;
            let w = TreeWord::parse(word, 0)?;
            let ord = g.order(&w, *cap);
            o.table("word,order", &[format!("{w},{ord}")]);
            let value = match ord {
                Order::Finite(n) => serde_json::json!(n),
                Order::ExceedsCap => serde_json::json!("exceeds-cap"),
            };
            o.record(&serde_json::json!({ "word": w.to_string(), "order": value }));
            o.finish()
        }
        ElementCmd::Sections { word, group } => {
            let mut o = out(cli, &group.describe());
            let (l, r, swapped) = match group.source()? {
                Source::Tree(g) => {
                    let s = g.sections(&TreeWord::parse(word, 0)?);
                    (s.left.to_string(), s.right.to_string(), s.swapped)
                }
                Source::Mealy(m) => {
                    let (l, r, s) = m.sections(&m.parse_word(word)?)?;
                    (m.format_word(&l), m.format_word(&r), s)
                }
                _ => bail!("element sections needs a tree group"),
            };
            o.table("word,left,right,swapped", &[format!("{word},{l},{r},{swapped}")]);
            o.record(&serde_json::json!({ "word": word, "left": l, "right": r, "swapped": swapped }));
            o.finish()
        }
    }
}

fn report_out(o: &mut Out, reports: &[&WitnessReport]) {
    let rows: Vec<String> = reports.iter().map(|r| r.csv_row()).collect();
    o.table(WitnessReport::CSV_HEADER, &rows);
    for r in reports {
        o.record(r);
    }
}

fn witness_cmd(cli: &Cli, cmd: &WitnessCmd) -> Result<Verdict> {
    match cmd {
        WitnessCmd::Classical { m } => {
            let g = GrigorchukGroup::classical();
            let mut o = out(cli, &format!("grigorchuk:{}", g.omega()));
            let r = witness::verify_classical(&g, *m)?;
            o.comment(&format!("t = {}", r.word));
            report_out(&mut o, &[&r]);
            o.finish_with(r.is_valid())
        }
        WitnessCmd::General { omega, n } => {
            let w: OmegaSequence = omega.parse()?;
            let mut o = out(cli, &format!("grigorchuk:{w}"));
            let r = witness::verify_generalized(&w, *n)?;
            o.comment(&format!("t = {}", r.word));
            report_out(&mut o, &[&r]);
            o.finish_with(r.is_valid())
        }
        WitnessCmd::Sweep { omegas, from, to } => {
            let ws = omegas
                .split(',')
                .map(|s| s.parse::<OmegaSequence>())
                .collect::<prgraph_core::Result<Vec<_>>>()?;
            let mut o = out(cli, "grigorchuk:sweep");
            let rows = witness::sweep(&ws, *from..=*to)?;
            let mut all_valid = true;
            let csv: Vec<String> = rows
                .iter()
                .map(|row| match &row.report {
                    Some(r) => {
                        all_valid &= r.is_valid();
                        r.csv_row()
                    }
                    None => format!("generalized,{},{},,,,,,,,NO-WITNESS", row.omega, row.n),
                })
                .collect();
            o.table(WitnessReport::CSV_HEADER, &csv);
            for row in &rows {
                o.record(row);
            }
            o.finish_with(all_valid)
        }
    }
}

fn parse_gens(s: &str) -> Result<Vec<TreeWord>> {
    s.split(',')
        .map(|w| TreeWord::parse(w.trim(), 0).map_err(Into::into))
        .collect()
}

fn schreier(cli: &Cli, a: &SchreierArgs) -> Result<Verdict> {
    let g = a.group.tree()?;
    let mut o = out(cli, &a.group.describe());
    let sg = SchreierGraph::with_max_level(&g, &parse_gens(&a.gens)?, a.m, cli.max_level)?;
    o.comment(&format!(
        "level={} vertices={} components={}",
        sg.level(),
        sg.num_vertices(),
        sg.num_components()
    ));
    o.table(SchreierGraph::CSV_HEADER, &sg.csv_rows());
    o.record(&serde_json::json!({
        "level": sg.level(),
        "vertices": sg.num_vertices(),
        "connected": sg.is_connected(),
        "components": sg.num_components(),
        "edges": sg.csv_rows(),
    }));
    o.dot(&sg.to_dot());
    o.finish()
}

fn walk(cli: &Cli, a: &WalkArgs) -> Result<Verdict> {
    let g = a.group.tree()?;
    let mut o = out(cli, &a.group.describe());
    let sg = SchreierGraph::with_max_level(&g, &parse_gens(&a.gens)?, a.m, cli.max_level)?;
    let start = match &a.start {
        Some(s) => s.parse()?,
        None => Bits::ones(a.m),
    };
    let w = spanning_walk(&sg, &start)?;
    let bound = (2usize << a.m).saturating_sub(2);
    o.comment(&format!("visits={} cost={} bound={bound}", w.visits.len(), w.cost()));
    let rows: Vec<String> = w
        .visits
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let step = if i == 0 {
                String::new()
            } else {
                w.steps[i - 1].to_string()
            };
            format!("{i},{v},{step}")
        })
        .collect();
    o.table("index,visit,step", &rows);
    o.record(&serde_json::json!({
        "start": start.to_string(),
        "visits": w.visits.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "steps": w.steps.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "cost": w.cost(),
        "bound": bound,
    }));
    o.finish()
}

fn cert(cli: &Cli, cmd: &CertCmd) -> Result<Verdict> {
    match cmd {
        CertCmd::Build { omega, m, base } => {
            let w: OmegaSequence = omega.parse()?;
            let base = base
                .chars()
                .map(Letter::from_char)
                .collect::<prgraph_core::Result<Vec<_>>>()?;
            let mut o = out(cli, &format!("grigorchuk:{w}"));
            let c = build_certificate(&w, *m, &base)?;
            o.text(&c.to_string());
            o.finish()
        }
        CertCmd::Verify { file } => {
            let text = match file {
                Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).context("reading standard input")?;
                    s
                }
            };
            let c: Certificate = text.parse()?;
            let mut o = out(cli, &format!("grigorchuk:{}", c.omega));
            let check = verify_certificate(&c);
            for d in &check.diagnostics {
                o.comment(d);
            }
            o.table(
                "walk_ok,marks_ok,cubic_ok,alpha_ok,length_ok,path_len,bound,valid",
                &[format!(
                    "{},{},{},{},{},{},{},{}",
                    check.walk_ok,
                    check.marks_ok,
                    check.cubic_ok,
                    check.alpha_ok,
                    check.length_ok,
                    check.path_len,
                    check.bound,
                    if check.is_valid() { "VALID" } else { "INVALID" }
                )],
            );
            o.record(&check);
            o.finish_with(check.is_valid())
        }
    }
}

fn start_tuple<B: TupleSyntax>(b: &B, t: &TupleArgs) -> Result<Vec<B::Elem>> {
    let base = match &t.tuple {
        Some(s) => b.parse_tuple(s)?,
        None => b.default_tuple(),
    };
    Ok(append_trivial(b, &base, t.pad))
}

fn prp_cmd(cli: &Cli, cmd: &PrpCmd) -> Result<Verdict> {
    match cmd {
        PrpCmd::Ball {
            radius,
            growth,
            beta,
            tuple,
            group,
        } => {
            let radii = growth
                .as_deref()
                .map(|s| {
                    s.split(',')
                        .map(|r| r.trim().parse::<usize>().with_context(|| format!("bad radius {r:?}")))
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let mut o = out(cli, &group.describe());
            crate::with_backend!(group, |b| {
                let origin = start_tuple(&b, tuple)?;
                o.comment(&format!("origin={}", prp::format_tuple(&b, &origin)));
                let ex = ball(
                    &b,
                    &origin,
                    BallOptions {
                        budget: cli.budget,
                        record_edges: cli.format == Format::Dot,
                        ..BallOptions::new(*radius)
                    },
                );
                if ex.table.truncated {
                    o.comment(&format!("truncated: budget {} exhausted", cli.budget));
                }
                o.table(prgraph_core::prp::BallTable::CSV_HEADER, &ex.table.csv_rows());
                o.record(&ex.table);
                if let Some(radii) = &radii {
                    let rep = growth_report(&ex.table, radii, *beta)?;
                    for row in &rep.rows {
                        o.comment(&format!(
                            "growth r={} |B|={} rate={:.6}",
                            row.radius, row.count, row.rate
                        ));
                    }
                    o.comment(&format!("growth min_rate={:.6}", rep.rate));
                    o.record(&rep);
                }
                match ex.to_dot(&b) {
                    Some(d) => o.dot(&d),
                    None if cli.format == Format::Dot => {
                        bail!(
                            "ball has more than {} vertices or no edges; not drawn",
                            prp::MAX_DOT_VERTICES
                        )
                    }
                    None => {}
                }
            });
            o.finish()
        }
        PrpCmd::Components { tuple_len, group } => {
            let mut o = out(cli, &group.describe());
            let census = match group.source()? {
                Source::Mod(p, n) => {
                    let b = prgraph_core::ModVector::new(p, n)?;
                    o.comment(&format!("group order {}", b.order()));
                    components_finite(&b, tuple_len.unwrap_or(n))?
                }
                _ => bail!("prp components needs a finite group (zpn or z2k)"),
            };
            let sizes: Vec<String> = census.components.iter().map(ToString::to_string).collect();
            o.comment(&format!("{} components: {}", census.components.len(), sizes.join(",")));
            o.table(prgraph_core::prp::Census::CSV_HEADER, &census.csv_rows());
            o.record(&census);
            o.finish()
        }
    }
}

fn rw(cli: &Cli, a: &RwSpeedArgs) -> Result<Verdict> {
    let mut o = out(cli, &a.group.describe());
    crate::with_backend!(a.group, |b| {
        let origin = start_tuple(&b, &a.tuple)?;
        o.comment(&format!(
            "origin={} steps={} trials={} radius={}",
            prp::format_tuple(&b, &origin),
            a.steps,
            a.trials,
            a.radius
        ));
        let stats = rw_speed(
            &b,
            &origin,
            WalkOptions {
                steps: a.steps,
                trials: a.trials,
                radius: a.radius,
                budget: cli.budget,
                seed: cli.seed,
            },
        );
        let speed = stats.mean_speed.map_or("none".to_string(), |s| format!("{s:.6}"));
        o.comment(&format!(
            "exact={} censored={} exact_radius={} mean_speed={speed}",
            stats.exact, stats.censored, stats.radius
        ));
        o.table(prgraph_core::schreier::WalkStats::CSV_HEADER, &stats.csv_rows());
        o.record(&stats);
    });
    o.finish()
}

fn parse_check(cli: &Cli, file: &PathBuf) -> Result<Verdict> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let mut o = out(cli, &format!("file:{}", file.display()));
    match dsl::load(&text) {
        Ok((spec, lowered)) => {
            o.comment(&format!(
                "ok: {} omega, {} group declarations",
                lowered.omegas.len(),
                lowered.groups.len()
            ));
            o.text(&spec.to_string());
            o.finish()
        }
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            Ok(Verdict::Invalid)
        }
    }
}
